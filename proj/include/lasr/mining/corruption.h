// lasr/mining/corruption.h

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

#ifndef LASR_MINING_CORRUPTION_H_
#define LASR_MINING_CORRUPTION_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lasr/base/rng.h"
#include "lasr/langsim/corpus.h"

namespace lasr::mining {

enum class CorruptionMode { kMissing, kNoisy };

std::string_view CorruptionModeName(CorruptionMode m);
CorruptionMode ParseCorruptionMode(std::string_view name);

/// Which pretrain labels were removed or replaced. Entries are sorted by
/// utterance id; `replacement_labels` is empty in missing mode.
struct CorruptionPlan {
  CorruptionMode mode = CorruptionMode::kMissing;
  double p = 0.0;
  std::vector<std::uint64_t> affected_ids;
  std::vector<int> replacement_labels;
};

/// Affects round(p * labeled pretrain count) labeled pretrain utterances.
/// Missing mode drops their labels; noisy mode replaces each label with one
/// drawn uniformly from the other pretrain languages. Frames and the other
/// splits are untouched.
std::pair<langsim::Corpus, CorruptionPlan> CorruptLabels(const langsim::Corpus& corpus,
                                                         CorruptionMode mode, double p, Rng& rng);

/// Replays a plan on a corpus; throws DomainError if an id is unknown or
/// already unlabeled.
langsim::Corpus ApplyCorruptionPlan(const langsim::Corpus& corpus, const CorruptionPlan& plan);

nlohmann::json CorruptionPlanToJson(const CorruptionPlan& plan);
CorruptionPlan CorruptionPlanFromJson(const nlohmann::json& j);

}  // namespace lasr::mining

#endif  // LASR_MINING_CORRUPTION_H_
