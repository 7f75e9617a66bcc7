// base/json_util.cc

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

#include "lasr/base/json_util.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <vector>

#include "lasr/base/error.h"

namespace lasr {

JsonReader::JsonReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) Fail<ConfigError>("config field '", path_, "' must be an object");
}

std::string JsonReader::Field(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool JsonReader::Has(std::string_view key) const { return j_.contains(std::string(key)); }

const nlohmann::json& JsonReader::Raw(std::string_view key) const {
  auto it = j_.find(std::string(key));
  if (it == j_.end()) Fail<ConfigError>("missing config field '", Field(key), "'");
  return *it;
}

template <typename T>
T JsonReader::Get(std::string_view key) const {
  const nlohmann::json& v = Raw(key);
  bool ok = true;
  if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::int64_t>) {
    ok = v.is_number_integer();
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  } else if constexpr (std::is_same_v<T, double>) {
    ok = v.is_number();
  }
  if (ok) {
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
    }
  }
  Fail<ConfigError>("config field '", Field(key), "' has the wrong type: ", v.dump());
}

template int JsonReader::Get<int>(std::string_view) const;
template std::int64_t JsonReader::Get<std::int64_t>(std::string_view) const;
template std::uint64_t JsonReader::Get<std::uint64_t>(std::string_view) const;
template double JsonReader::Get<double>(std::string_view) const;
template bool JsonReader::Get<bool>(std::string_view) const;
template std::string JsonReader::Get<std::string>(std::string_view) const;
template std::vector<double> JsonReader::Get<std::vector<double>>(std::string_view) const;
template std::vector<std::string> JsonReader::Get<std::vector<std::string>>(std::string_view) const;
template std::vector<std::uint64_t> JsonReader::Get<std::vector<std::uint64_t>>(
    std::string_view) const;
template std::vector<int> JsonReader::Get<std::vector<int>>(std::string_view) const;

JsonReader JsonReader::Child(std::string_view key) const { return JsonReader(Raw(key), Field(key)); }

void JsonReader::Finish(std::initializer_list<std::string_view> known) const {
  for (const auto& item : j_.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      Fail<ConfigError>("unknown config field '", Field(item.key()), "'");
  }
}

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail<IoError>("cannot open '", path.string(), "' for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    Fail<ConfigError>("'", path.string(), "' is not valid JSON: ", e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail<IoError>("cannot open '", path.string(), "' for writing");
  out << j.dump(2) << '\n';
  if (!out) Fail<IoError>("write to '", path.string(), "' failed");
}

}  // namespace lasr
