// Copyright 2026 The gce-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file report.hpp
/// @brief CSV tables and the JSON summary of a scenario run.
#ifndef GCELAB_REPORT_HPP
#define GCELAB_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "gcelab/scenario.hpp"

namespace gcelab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Header row then one row per line; numbers as %.17g, LF line endings.
std::string format_csv(const Table& table);

/// Verdicts, table names and the scenario echo as a JSON document.
std::string format_summary(const ReportBundle& bundle);

/// Writes <name>.csv per table and summary.json into out_dir (created when
/// missing). Each file goes to a temporary name first and is renamed into
/// place, so readers never see partial files. Returns the written paths.
std::vector<std::filesystem::path> write_reports(const ReportBundle& bundle,
                                                 const std::filesystem::path& out_dir);

/// Atomic single-file write used by write_reports.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace gcelab

#endif  // GCELAB_REPORT_HPP
