// lasr/base/json_util.h

// Copyright 2026  The LASR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LASR_BASE_JSON_UTIL_H_
#define LASR_BASE_JSON_UTIL_H_

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"

namespace lasr {

/// Strict reader over one JSON object: every Get() names a required field,
/// and Finish() rejects keys that were never read. Error messages carry the
/// dotted path of the offending field.
class JsonReader {
 public:
  JsonReader(const nlohmann::json& j, std::string path);

  template <typename T>
  T Get(std::string_view key) const;
  JsonReader Child(std::string_view key) const;
  const nlohmann::json& Raw(std::string_view key) const;
  bool Has(std::string_view key) const;

  /// Throws ConfigError if the object holds keys outside `known`.
  void Finish(std::initializer_list<std::string_view> known) const;
  const std::string& path() const { return path_; }

 private:
  std::string Field(std::string_view key) const;

  const nlohmann::json& j_;
  std::string path_;
};

nlohmann::json ReadJsonFile(const std::filesystem::path& path);
/// Pretty-printed with sorted keys and a trailing newline.
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace lasr

#endif  // LASR_BASE_JSON_UTIL_H_
