// mining/sampler.cc

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

#include "lasr/mining/sampler.h"

#include <cmath>
#include <map>

#include "lasr/base/error.h"

namespace lasr::mining {

void BatchSpec::Validate() const {
  if (languages_per_batch < 2)
    Fail<ConfigError>("batch: languages_per_batch must be >= 2, got ", languages_per_batch);
  if (per_language < 2) Fail<ConfigError>("batch: per_language must be >= 2, got ", per_language);
  if (unlabeled_slots < 0)
    Fail<ConfigError>("batch: unlabeled_slots must be >= 0, got ", unlabeled_slots);
}

int DefaultUnlabeledSlots(int languages_per_batch, int per_language, double unlabeled_fraction) {
  if (!(unlabeled_fraction >= 0.0 && unlabeled_fraction <= 1.0))
    Fail<DomainError>("unlabeled fraction must be in [0, 1], got ", unlabeled_fraction);
  return static_cast<int>(
      std::lround(static_cast<double>(languages_per_batch * per_language) * unlabeled_fraction));
}

PkSampler::PkSampler(const std::vector<langsim::Utterance>& utterances, BatchSpec spec)
    : spec_(spec) {
  spec_.Validate();
  std::map<int, std::vector<std::size_t>> pools;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    if (utterances[i].labeled()) pools[utterances[i].label].push_back(i);
    else unlabeled_.push_back(i);
  }
  const std::size_t k = static_cast<std::size_t>(spec_.per_language);
  for (auto& [label, idx] : pools) {
    if (idx.size() < k) continue;
    eligible_.push_back(label);
    by_language_.push_back(std::move(idx));
  }
  if (eligible_.size() < static_cast<std::size_t>(spec_.languages_per_batch))
    Fail<SamplingError>("batch sampler: need ", spec_.languages_per_batch,
                        " languages with >= ", k, " labeled utterances, but only ",
                        eligible_.size(), " of ", pools.size(), " labeled languages qualify (",
                        utterances.size() - unlabeled_.size(), " labeled utterances)");
}

std::vector<std::size_t> PkSampler::Sample(Rng& rng) const {
  std::vector<std::size_t> batch;
  const std::size_t k = static_cast<std::size_t>(spec_.per_language);
  for (std::size_t lang :
       rng.SampleWithoutReplacement(eligible_.size(), static_cast<std::size_t>(spec_.languages_per_batch))) {
    const auto& pool = by_language_[lang];
    for (std::size_t j : rng.SampleWithoutReplacement(pool.size(), k)) batch.push_back(pool[j]);
  }
  const std::size_t slots =
      std::min(static_cast<std::size_t>(spec_.unlabeled_slots), unlabeled_.size());
  for (std::size_t j : rng.SampleWithoutReplacement(unlabeled_.size(), slots))
    batch.push_back(unlabeled_[j]);
  rng.Shuffle(batch);
  return batch;
}

std::vector<std::size_t> SampleBatch(const std::vector<langsim::Utterance>& utterances,
                                     const BatchSpec& spec, Rng& rng) {
  return PkSampler(utterances, spec).Sample(rng);
}

std::vector<std::size_t> SampleUniformBatch(std::size_t n, std::size_t batch_size, Rng& rng) {
  if (batch_size == 0 || batch_size > n)
    Fail<SamplingError>("uniform batch of ", batch_size, " from ", n, " utterances");
  return rng.SampleWithoutReplacement(n, batch_size);
}

}  // namespace lasr::mining
