// lasr/langsim/corpus.h

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

#ifndef LASR_LANGSIM_CORPUS_H_
#define LASR_LANGSIM_CORPUS_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "lasr/langsim/language.h"

namespace lasr::langsim {

enum class Split { kPretrain = 0, kFinetuneTrain = 1, kDev = 2, kTest = 3 };

inline constexpr std::array<Split, 4> kAllSplits = {Split::kPretrain, Split::kFinetuneTrain,
                                                    Split::kDev, Split::kTest};

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);

struct CorpusConfig {
  int num_languages = 12;
  int num_pretrain_languages = 8;
  LanguageConfig language;
  int min_frames = 80;
  int max_frames = 120;
  int pretrain_per_language = 200;
  int finetune_per_language = 50;
  int dev_per_language = 15;
  int test_per_language = 35;
  /// Fraction of pretrain utterances that keep their label.
  double labeled_fraction = 1.0;

  void Validate() const;
};

/// Immutable once built. Pretrain utterances come only from languages
/// [0, num_pretrain_languages); the other splits cover every language.
struct Corpus {
  CorpusConfig config;
  std::uint64_t master_seed = 0;
  std::vector<LanguageSpec> languages;
  std::array<std::vector<Utterance>, 4> splits;
  /// Language ids present in pretrain.
  std::vector<int> overlap_set;
  /// Language ids absent from pretrain.
  std::vector<int> nonoverlap_set;

  const std::vector<Utterance>& split(Split s) const { return splits[static_cast<int>(s)]; }
  std::vector<Utterance>& split(Split s) { return splits[static_cast<int>(s)]; }
  int num_languages() const { return static_cast<int>(languages.size()); }
  int feature_dim() const { return config.language.feature_dim; }
  bool is_overlap(int language_id) const;
};

/// Pure function of (config, master_seed). Each utterance draws from its own
/// stream derived from (master_seed, split, utterance_id), so the data does
/// not depend on generation order.
Corpus BuildCorpus(const CorpusConfig& config, std::uint64_t master_seed);

/// Seed from which every language spec of a corpus is drawn.
std::uint64_t LanguageSeed(std::uint64_t master_seed);

/// Number of labeled / unlabeled utterances in the pretrain split.
std::size_t CountLabeled(const std::vector<Utterance>& utts);

}  // namespace lasr::langsim

#endif  // LASR_LANGSIM_CORPUS_H_
