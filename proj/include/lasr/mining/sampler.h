// lasr/mining/sampler.h

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

#ifndef LASR_MINING_SAMPLER_H_
#define LASR_MINING_SAMPLER_H_

#include <cstddef>
#include <vector>

#include "lasr/base/rng.h"
#include "lasr/langsim/language.h"

namespace lasr::mining {

/// P labeled languages with K utterances each, plus label-free fillers.
struct BatchSpec {
  int languages_per_batch = 8;
  int per_language = 4;
  int unlabeled_slots = 0;

  int size() const { return languages_per_batch * per_language + unlabeled_slots; }
  void Validate() const;
};

/// round(P * K * unlabeled_fraction): the batch carries unlabeled utterances
/// in roughly the proportion the corpus has them.
int DefaultUnlabeledSlots(int languages_per_batch, int per_language, double unlabeled_fraction);

/// Draws P x K batches from a fixed utterance list. Indices returned refer
/// to that list.
class PkSampler {
 public:
  /// Throws SamplingError when fewer than P languages have K labeled
  /// utterances.
  PkSampler(const std::vector<langsim::Utterance>& utterances, BatchSpec spec);

  /// Languages without replacement, K utterances per language without
  /// replacement, unlabeled slots from the unlabeled pool (reduced to the
  /// pool size if it is smaller), then shuffled.
  std::vector<std::size_t> Sample(Rng& rng) const;

  const BatchSpec& spec() const { return spec_; }
  /// Languages with at least K labeled utterances, ascending.
  const std::vector<int>& eligible_languages() const { return eligible_; }
  std::size_t unlabeled_pool_size() const { return unlabeled_.size(); }

 private:
  BatchSpec spec_;
  std::vector<int> eligible_;
  std::vector<std::vector<std::size_t>> by_language_;  // aligned with eligible_
  std::vector<std::size_t> unlabeled_;
};

std::vector<std::size_t> SampleBatch(const std::vector<langsim::Utterance>& utterances,
                                     const BatchSpec& spec, Rng& rng);

/// `batch_size` distinct indices drawn uniformly from [0, n), ignoring labels.
std::vector<std::size_t> SampleUniformBatch(std::size_t n, std::size_t batch_size, Rng& rng);

}  // namespace lasr::mining

#endif  // LASR_MINING_SAMPLER_H_
