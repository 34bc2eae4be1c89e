// Copyright 2026 The fluxccz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// In-memory CSV tables and an all-or-nothing writer. Tables are built
// completely before anything touches the disk; commit() writes each to a
// temporary file and renames it into place only when all writes succeeded.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "fluxccz/common.hpp"
#include "fluxccz/config.hpp"

namespace fluxccz {

inline constexpr const char* kVersion = "1.0.0";

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row() {
    rows_.emplace_back();
    return *this;
  }
  CsvTable& add(double v) { return add_text(format_double(v)); }
  CsvTable& add(int v) { return add_text(std::to_string(v)); }
  CsvTable& add(std::int64_t v) { return add_text(std::to_string(v)); }
  CsvTable& add(std::uint64_t v) { return add_text(std::to_string(v)); }
  CsvTable& add(bool v) { return add_text(v ? "1" : "0"); }
  CsvTable& add(const std::string& v) { return add_text(quote(v)); }
  CsvTable& add(const char* v) { return add(std::string(v)); }

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  /// Serialize with a leading metadata comment line.
  std::string render(const std::string& metadata) const {
    std::string out = "# " + metadata + "\n";
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
    out += "\n";
    for (const auto& r : rows_) {
      if (r.size() != header_.size()) throw Error("csv: row width does not match header");
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += "\n";
    }
    return out;
  }

 private:
  CsvTable& add_text(std::string s) {
    if (rows_.empty()) row();
    rows_.back().push_back(std::move(s));
    return *this;
  }

  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct RunMetadata {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;

  std::string line() const {
    return std::string("fluxccz ") + kVersion + " seed=" + std::to_string(seed) + " config_hash=" + config_hash +
           " command=" + command;
  }
};

/// Collects named tables and writes them together.
class OutputSet {
 public:
  CsvTable& table(const std::string& file, std::vector<std::string> header) {
    auto [it, inserted] = tables_.try_emplace(file, std::move(header));
    if (!inserted) throw Error("output: table '" + file + "' declared twice");
    return it->second;
  }

  void add_text(const std::string& file, std::string content) { texts_[file] = std::move(content); }

  std::vector<std::string> files() const {
    std::vector<std::string> f;
    for (const auto& [k, v] : tables_) f.push_back(k);
    for (const auto& [k, v] : texts_) f.push_back(k);
    return f;
  }

  /// Write everything to `dir`; on failure no target file is replaced.
  void commit(const std::filesystem::path& dir, const RunMetadata& meta) const {
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
    auto stage = [&](const std::string& name, const std::string& content) {
      const auto target = dir / name;
      const auto tmp = dir / ("." + name + ".tmp");
      std::ofstream out(tmp, std::ios::binary);
      out << content;
      out.close();
      if (!out) throw Error("output: cannot write " + tmp.string());
      staged.emplace_back(tmp, target);
    };
    try {
      for (const auto& [name, t] : tables_) stage(name, t.render(meta.line()));
      for (const auto& [name, text] : texts_) stage(name, text);
    } catch (...) {
      for (const auto& [tmp, target] : staged) std::filesystem::remove(tmp);
      throw;
    }
    for (const auto& [tmp, target] : staged) std::filesystem::rename(tmp, target);
  }

 private:
  std::map<std::string, CsvTable> tables_;
  std::map<std::string, std::string> texts_;
};

}  // namespace fluxccz
