// langsim/corpus.cc

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

#include "lasr/langsim/corpus.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lasr/base/error.h"

namespace lasr::langsim {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kPretrain: return "pretrain";
    case Split::kFinetuneTrain: return "finetune_train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "unknown";
}

Split ParseSplit(std::string_view name) {
  for (Split s : kAllSplits)
    if (SplitName(s) == name) return s;
  Fail<ConfigError>("unknown split '", std::string(name), "'");
}

void CorpusConfig::Validate() const {
  if (num_languages < 2) Fail<ConfigError>("corpus.num_languages must be >= 2");
  if (num_pretrain_languages < 1) Fail<ConfigError>("corpus.num_pretrain_languages must be >= 1");
  if (num_pretrain_languages > num_languages)
    Fail<ConfigError>("corpus.num_pretrain_languages (", num_pretrain_languages,
                      ") exceeds corpus.num_languages (", num_languages, ")");
  if (min_frames < 1 || max_frames < min_frames)
    Fail<ConfigError>("corpus frame range [", min_frames, ", ", max_frames, "] is invalid");
  if (pretrain_per_language < 0 || finetune_per_language < 0 || dev_per_language < 0 ||
      test_per_language < 0)
    Fail<ConfigError>("corpus per-language counts must be non-negative");
  if (!(labeled_fraction >= 0.0 && labeled_fraction <= 1.0))
    Fail<ConfigError>("corpus.labeled_fraction must lie in [0, 1], got ", labeled_fraction);
  if (language.num_states < 2) Fail<ConfigError>("corpus.num_states must be >= 2");
  if (language.feature_dim < 1) Fail<ConfigError>("corpus.feature_dim must be >= 1");
  if (!(language.emission_std > 0.0)) Fail<ConfigError>("corpus.emission_std must be positive");
}

bool Corpus::is_overlap(int language_id) const {
  return std::find(overlap_set.begin(), overlap_set.end(), language_id) != overlap_set.end();
}

std::uint64_t LanguageSeed(std::uint64_t master_seed) {
  return DeriveSeed(master_seed, {StreamTag("languages")});
}

std::size_t CountLabeled(const std::vector<Utterance>& utts) {
  return static_cast<std::size_t>(
      std::count_if(utts.begin(), utts.end(), [](const Utterance& u) { return u.labeled(); }));
}

Corpus BuildCorpus(const CorpusConfig& config, std::uint64_t master_seed) {
  config.Validate();
  Corpus corpus;
  corpus.config = config;
  corpus.master_seed = master_seed;

  const std::uint64_t lang_seed = LanguageSeed(master_seed);
  for (int id = 0; id < config.num_languages; ++id)
    corpus.languages.push_back(MakeLanguageSpec(id, lang_seed, config.language));
  for (int id = 0; id < config.num_languages; ++id)
    (id < config.num_pretrain_languages ? corpus.overlap_set : corpus.nonoverlap_set).push_back(id);

  std::uint64_t next_id = 0;
  for (Split split : kAllSplits) {
    int per_language = 0;
    int languages = config.num_languages;
    switch (split) {
      case Split::kPretrain:
        per_language = config.pretrain_per_language;
        languages = config.num_pretrain_languages;
        break;
      case Split::kFinetuneTrain: per_language = config.finetune_per_language; break;
      case Split::kDev: per_language = config.dev_per_language; break;
      case Split::kTest: per_language = config.test_per_language; break;
    }
    auto& out = corpus.split(split);
    out.reserve(static_cast<std::size_t>(languages * per_language));
    for (int lang = 0; lang < languages; ++lang) {
      for (int k = 0; k < per_language; ++k) {
        const std::uint64_t uid = next_id++;
        Rng rng = Rng::Derive(master_seed, {StreamTag("utterance"),
                                            static_cast<std::uint64_t>(split), uid});
        const auto frames =
            static_cast<std::size_t>(rng.Integer(config.min_frames, config.max_frames));
        Utterance utt = SampleUtterance(corpus.languages[static_cast<std::size_t>(lang)], frames, rng);
        utt.utterance_id = uid;
        out.push_back(std::move(utt));
      }
    }
  }

  auto& pretrain = corpus.split(Split::kPretrain);
  const auto keep = static_cast<std::size_t>(
      std::llround(config.labeled_fraction * static_cast<double>(pretrain.size())));
  if (keep < pretrain.size()) {
    Rng rng = Rng::Derive(master_seed, {StreamTag("strip-labels")});
    auto order = rng.SampleWithoutReplacement(pretrain.size(), pretrain.size() - keep);
    for (std::size_t i : order) pretrain[i].label = kUnlabeled;
  }
  return corpus;
}

}  // namespace lasr::langsim
