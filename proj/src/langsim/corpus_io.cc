// langsim/corpus_io.cc

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

#include "lasr/langsim/corpus_io.h"

#include <fstream>
#include <limits>

#include "lasr/base/binary_io.h"
#include "lasr/base/error.h"
#include "lasr/base/json_util.h"

namespace lasr::langsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "lasr-corpus";
constexpr int kManifestVersion = 1;
constexpr const char* kUtteranceFile = "utterances.bin";

json MatrixToJson(const Tensor& t) {
  json rows = json::array();
  for (std::size_t r = 0; r < t.rows(); ++r) rows.push_back(std::vector<double>(t.row(r).begin(), t.row(r).end()));
  return rows;
}

Tensor MatrixFromJson(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    Fail<IoError>("manifest: '", what, "' must be a non-empty matrix");
  const std::size_t rows = j.size(), cols = j[0].size();
  Tensor t = Tensor::Zeros(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) Fail<IoError>("manifest: '", what, "' is ragged");
    for (std::size_t c = 0; c < cols; ++c) t(r, c) = j[r][c].get<double>();
  }
  return t;
}

}  // namespace

void WriteUtterances(std::ostream& os, const std::vector<Utterance>& utts) {
  for (const Utterance& u : utts) {
    binary::WriteI32(os, static_cast<std::int32_t>(u.frames.rows()));
    binary::WriteI32(os, static_cast<std::int32_t>(u.frames.cols()));
    binary::WriteI32(os, u.label);
    binary::WriteI64(os, static_cast<std::int64_t>(u.utterance_id));
    binary::WriteF64s(os, u.frames.data());
  }
}

std::vector<Utterance> ReadUtterances(std::istream& is, std::size_t count) {
  std::vector<Utterance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::int32_t t = binary::ReadI32(is);
    const std::int32_t f = binary::ReadI32(is);
    const std::int32_t label = binary::ReadI32(is);
    const std::int64_t uid = binary::ReadI64(is);
    if (t < 1 || f < 1 || label < kUnlabeled || uid < 0)
      Fail<IoError>("corrupt utterance record ", i, " (T=", t, ", F=", f, ", label=", label, ")");
    Utterance u;
    u.frames = Tensor::Zeros(static_cast<std::size_t>(t), static_cast<std::size_t>(f));
    binary::ReadF64s(is, u.frames.data());
    u.label = label;
    u.utterance_id = static_cast<std::uint64_t>(uid);
    out.push_back(std::move(u));
  }
  if (is.peek() != std::char_traits<char>::eof())
    Fail<IoError>("trailing bytes after ", count, " utterance records");
  return out;
}

json CorpusConfigToJson(const CorpusConfig& c) {
  return json{{"num_languages", c.num_languages},
              {"num_pretrain_languages", c.num_pretrain_languages},
              {"num_states", c.language.num_states},
              {"feature_dim", c.language.feature_dim},
              {"emission_std", c.language.emission_std},
              {"mean_scale", c.language.mean_scale},
              {"min_frames", c.min_frames},
              {"max_frames", c.max_frames},
              {"pretrain_per_language", c.pretrain_per_language},
              {"finetune_per_language", c.finetune_per_language},
              {"dev_per_language", c.dev_per_language},
              {"test_per_language", c.test_per_language},
              {"labeled_fraction", c.labeled_fraction}};
}

CorpusConfig CorpusConfigFromJson(const json& j) {
  JsonReader r(j, "corpus");
  CorpusConfig c;
  c.num_languages = r.Get<int>("num_languages");
  c.num_pretrain_languages = r.Get<int>("num_pretrain_languages");
  c.language.num_states = r.Get<int>("num_states");
  c.language.feature_dim = r.Get<int>("feature_dim");
  c.language.emission_std = r.Get<double>("emission_std");
  c.language.mean_scale = r.Get<double>("mean_scale");
  c.min_frames = r.Get<int>("min_frames");
  c.max_frames = r.Get<int>("max_frames");
  c.pretrain_per_language = r.Get<int>("pretrain_per_language");
  c.finetune_per_language = r.Get<int>("finetune_per_language");
  c.dev_per_language = r.Get<int>("dev_per_language");
  c.test_per_language = r.Get<int>("test_per_language");
  c.labeled_fraction = r.Get<double>("labeled_fraction");
  r.Finish({"num_languages", "num_pretrain_languages", "num_states", "feature_dim",
            "emission_std", "mean_scale", "min_frames", "max_frames", "pretrain_per_language",
            "finetune_per_language", "dev_per_language", "test_per_language",
            "labeled_fraction"});
  c.Validate();
  return c;
}

json ManifestJson(const Corpus& corpus) {
  json langs = json::array();
  for (const LanguageSpec& l : corpus.languages) {
    langs.push_back({{"language_id", l.language_id},
                     {"num_states", l.num_states},
                     {"emission_std", l.emission_std},
                     {"transition", MatrixToJson(l.transition)},
                     {"emission_means", MatrixToJson(l.emission_means)}});
  }
  json splits = json::object();
  for (Split s : kAllSplits) {
    const auto& utts = corpus.split(s);
    splits[std::string(SplitName(s))] = {
        {"path", std::string(SplitName(s)) + "/" + kUtteranceFile},
        {"count", utts.size()},
        {"labeled", CountLabeled(utts)}};
  }
  return json{{"format", kManifestFormat},
              {"version", kManifestVersion},
              {"master_seed", corpus.master_seed},
              {"config", CorpusConfigToJson(corpus.config)},
              {"languages", langs},
              {"splits", splits},
              {"overlap_set", corpus.overlap_set},
              {"nonoverlap_set", corpus.nonoverlap_set}};
}

void WriteCorpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail<IoError>("cannot create corpus directory '", dir.string(), "': ", ec.message());
  for (Split s : kAllSplits) {
    const fs::path split_dir = dir / std::string(SplitName(s));
    fs::create_directories(split_dir, ec);
    if (ec) Fail<IoError>("cannot create '", split_dir.string(), "': ", ec.message());
    std::ofstream out(split_dir / kUtteranceFile, std::ios::binary | std::ios::trunc);
    if (!out) Fail<IoError>("cannot write '", (split_dir / kUtteranceFile).string(), "'");
    WriteUtterances(out, corpus.split(s));
    if (!out) Fail<IoError>("write to '", (split_dir / kUtteranceFile).string(), "' failed");
  }
  WriteJsonFile(dir / "manifest.json", ManifestJson(corpus));
}

Corpus ReadCorpus(const fs::path& dir) {
  const json m = ReadJsonFile(dir / "manifest.json");
  if (m.value("format", "") != kManifestFormat || m.value("version", 0) != kManifestVersion)
    Fail<IoError>("'", (dir / "manifest.json").string(), "' is not a version ", kManifestVersion,
                  " corpus manifest");
  Corpus corpus;
  try {
    corpus.config = CorpusConfigFromJson(m.at("config"));
    corpus.master_seed = m.at("master_seed").get<std::uint64_t>();
    for (const json& l : m.at("languages")) {
      LanguageSpec spec;
      spec.language_id = l.at("language_id").get<int>();
      spec.num_states = l.at("num_states").get<int>();
      spec.emission_std = l.at("emission_std").get<double>();
      spec.transition = MatrixFromJson(l.at("transition"), "transition");
      spec.emission_means = MatrixFromJson(l.at("emission_means"), "emission_means");
      ValidateLanguageSpec(spec);
      corpus.languages.push_back(std::move(spec));
    }
    corpus.overlap_set = m.at("overlap_set").get<std::vector<int>>();
    corpus.nonoverlap_set = m.at("nonoverlap_set").get<std::vector<int>>();
    for (Split s : kAllSplits) {
      const json& entry = m.at("splits").at(std::string(SplitName(s)));
      const fs::path file = dir / entry.at("path").get<std::string>();
      std::ifstream in(file, std::ios::binary);
      if (!in) Fail<IoError>("cannot open '", file.string(), "'");
      corpus.split(s) = ReadUtterances(in, entry.at("count").get<std::size_t>());
    }
  } catch (const json::exception& e) {
    Fail<IoError>("malformed corpus manifest in '", dir.string(), "': ", e.what());
  }
  for (const auto& utts : corpus.splits) {
    for (const Utterance& u : utts) {
      if (u.frames.cols() != static_cast<std::size_t>(corpus.feature_dim()))
        Fail<IoError>("utterance ", u.utterance_id, " has F=", u.frames.cols(), ", manifest says ",
                      corpus.feature_dim());
      if (u.label >= corpus.num_languages())
        Fail<IoError>("utterance ", u.utterance_id, " has unknown label ", u.label);
    }
  }
  return corpus;
}

}  // namespace lasr::langsim
