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

#include "gcelab/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace gcelab {

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k > 0) out += ',';
    out += table.header[k];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw Error(ErrorKind::invariant_violation, "table " + table.name + " has a ragged row");
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string format_summary(const ReportBundle& bundle) {
  nlohmann::json doc;
  doc["tool"] = "gce_lab";
  doc["version"] = kToolVersion;
  doc["scenario"] = nlohmann::json::parse(bundle.scenario_text);
  doc["convention"] = bundle.convention;
  doc["grid_spacing"] = bundle.spacing;
  nlohmann::json tables = nlohmann::json::array();
  for (const Table& t : bundle.tables) {
    tables.push_back({{"name", t.name}, {"file", t.name + ".csv"}, {"rows", t.rows.size()}});
  }
  doc["tables"] = tables;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const Verdict& v : bundle.verdicts) {
    verdicts.push_back({{"check", v.check},
                        {"pass", v.pass},
                        {"value", v.value},
                        {"threshold", v.threshold},
                        {"counts", v.counts}});
  }
  doc["verdicts"] = verdicts;
  doc["ok"] = bundle.ok();
  return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) throw Error(ErrorKind::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::io_error, "cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::vector<std::filesystem::path> write_reports(const ReportBundle& bundle,
                                                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot create " + out_dir.string() + ": " + ec.message());
  // Render everything before touching the directory.
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (const Table& t : bundle.tables) files.emplace_back(out_dir / (t.name + ".csv"), format_csv(t));
  files.emplace_back(out_dir / "summary.json", format_summary(bundle));
  std::vector<std::filesystem::path> written;
  for (const auto& [path, content] : files) {
    write_file(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace gcelab
