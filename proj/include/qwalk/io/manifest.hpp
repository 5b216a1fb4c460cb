// Copyright 2026 The qwalk-nm Authors
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

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/io/checksum.hpp"
#include "qwalk/io/config.hpp"
#include "qwalk/io/format.hpp"

namespace qwalk::io {

inline constexpr const char* kToolName = "qwalk-nm";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kSeedVariable = "QWALK_NM_SEED";

struct FileEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  ExperimentConfig config;
  json regime = json::array();
  json conventions = json::object();
  std::optional<std::string> seed;
  double wall_time_seconds = 0.0;
  std::vector<FileEntry> files;
};

inline json to_json_value(const RunManifest& m) {
  json files = json::array();
  for (const auto& f : m.files)
    files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"command", m.command},
              {"config", m.config},
              {"regime", m.regime},
              {"conventions", m.conventions},
              {"seed", m.seed ? json(*m.seed) : json(nullptr)},
              {"wall_time_seconds", m.wall_time_seconds},
              {"files", files}};
}

inline std::optional<std::string> seed_from_environment() {
  if (const char* s = std::getenv(kSeedVariable)) return std::string(s);
  return std::nullopt;
}

/// Single writer for one run's output directory; records every file it
/// writes for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw UsageError("cannot create output directory '" + root_.string() + "': " + ec.message());
  }

  void write(const std::string& name, std::string_view text) {
    if (name == kManifestName) throw UsageError("reserved file name");
    for (const auto& f : files_)
      if (f.path == name) throw IntegrityError("file '" + name + "' written twice");
    write_text_file(root_ / name, text);
    files_.push_back({name, sha256_hex(text), text.size()});
  }

  const std::filesystem::path& root() const noexcept { return root_; }

  void write_manifest(RunManifest m) {
    m.files = files_;
    write_text_file(root_ / kManifestName, to_json_value(m).dump(2) + "\n");
  }

 private:
  std::filesystem::path root_;
  std::vector<FileEntry> files_;
};

struct AuditReport {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Every listed file exists with the recorded size and digest, and every
/// file in the directory is listed exactly once.
inline AuditReport audit_manifest(const std::filesystem::path& dir) {
  AuditReport r;
  const auto manifest_path = dir / kManifestName;
  json m;
  try {
    m = json::parse(read_text_file(manifest_path));
  } catch (const Error& e) {
    r.problems.push_back(e.what());
    return r;
  } catch (const json::exception& e) {
    r.problems.push_back(std::string("manifest is not valid JSON: ") + e.what());
    return r;
  }
  if (!m.contains("files") || !m.at("files").is_array()) {
    r.problems.push_back("manifest has no file list");
    return r;
  }
  std::set<std::string> listed;
  for (const auto& f : m.at("files")) {
    const auto path = f.value("path", std::string());
    if (!listed.insert(path).second) r.problems.push_back("'" + path + "' listed more than once");
    const auto full = dir / path;
    if (!std::filesystem::is_regular_file(full)) {
      r.problems.push_back("'" + path + "' is missing");
      continue;
    }
    const auto text = read_text_file(full);
    if (text.size() != f.value("bytes", std::uintmax_t{0}))
      r.problems.push_back("'" + path + "' size differs from manifest");
    if (sha256_hex(text) != f.value("sha256", std::string()))
      r.problems.push_back("'" + path + "' checksum mismatch");
    ++r.checked;
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name != kManifestName && !listed.count(name))
      r.problems.push_back("'" + name + "' is not in the manifest");
  }
  return r;
}

}  // namespace qwalk::io
