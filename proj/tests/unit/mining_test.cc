// tests/unit/mining_test.cc

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

#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "lasr/base/error.h"
#include "lasr/mining/corruption.h"
#include "lasr/mining/sampler.h"

using namespace lasr;
using namespace lasr::mining;
using langsim::Split;

namespace {

const langsim::Corpus& DefaultCorpus() {
  static const langsim::Corpus corpus = langsim::BuildCorpus(langsim::CorpusConfig{}, 17);
  return corpus;
}

}  // namespace

TEST_CASE("P x K batches") {
  const auto& pre = DefaultCorpus().split(Split::kPretrain);
  Rng rng(1);
  auto batch = SampleBatch(pre, BatchSpec{8, 4, 0}, rng);
  REQUIRE(batch.size() == 32);
  std::map<int, int> counts;
  std::set<std::uint64_t> ids;
  for (std::size_t i : batch) {
    ++counts[pre[i].label];
    ids.insert(pre[i].utterance_id);
  }
  CHECK(ids.size() == 32);
  CHECK(counts.size() == 8);
  for (auto [label, n] : counts) CHECK(n == 4);

  PkSampler small(pre, BatchSpec{2, 2, 0});
  for (int trial = 0; trial < 50; ++trial) {
    auto b = small.Sample(rng);
    REQUIRE(b.size() == 4);
    for (std::size_t a : b) {
      int pos = 0, neg = 0;
      for (std::size_t o : b)
        if (o != a) (pre[o].label == pre[a].label ? pos : neg)++;
      CHECK(pos >= 1);
      CHECK(neg >= 2);
    }
  }
}

TEST_CASE("language selection is uniform") {
  const auto& pre = DefaultCorpus().split(Split::kPretrain);
  PkSampler sampler(pre, BatchSpec{3, 4, 0});
  std::map<int, double> counts;
  const int draws = 1000;
  for (int s = 0; s < draws; ++s) {
    Rng rng = Rng::Derive(5, {static_cast<std::uint64_t>(s)});
    std::set<int> langs;
    for (std::size_t i : sampler.Sample(rng)) langs.insert(pre[i].label);
    for (int l : langs) counts[l] += 1.0;
  }
  const double p = 3.0 / 8.0;
  const double mean = draws * p, se = std::sqrt(draws * p * (1.0 - p));
  REQUIRE(counts.size() == 8);
  for (auto [label, n] : counts) CHECK(std::abs(n - mean) <= 3.0 * se);
}

TEST_CASE("unlabeled slots and sampler errors") {
  auto corpus_cfg = langsim::CorpusConfig{};
  corpus_cfg.labeled_fraction = 0.25;
  langsim::Corpus c = langsim::BuildCorpus(corpus_cfg, 3);
  const auto& pre = c.split(Split::kPretrain);
  CHECK(DefaultUnlabeledSlots(8, 4, 0.75) == 24);
  CHECK(DefaultUnlabeledSlots(8, 4, 0.0) == 0);
  Rng rng(2);
  auto batch = SampleBatch(pre, BatchSpec{8, 4, 24}, rng);
  CHECK(batch.size() == 56);
  int unlabeled = 0;
  for (std::size_t i : batch) unlabeled += !pre[i].labeled();
  CHECK(unlabeled == 24);

  // Only two utterances in the pool: slots shrink to fit.
  std::vector<langsim::Utterance> tiny;
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) tiny.push_back(pre[0]), tiny.back().label = l;
  for (int k = 0; k < 2; ++k) tiny.push_back(pre[0]), tiny.back().label = langsim::kUnlabeled;
  CHECK(SampleBatch(tiny, BatchSpec{2, 2, 5}, rng).size() == 6);

  try {
    SampleBatch(tiny, BatchSpec{3, 2, 0}, rng);
    FAIL("expected a sampling error");
  } catch (const SamplingError& e) {
    CHECK(std::string(e.what()).find("only 2 of 2") != std::string::npos);
  }
  CHECK_THROWS_AS(BatchSpec({8, 1, 0}).Validate(), ConfigError);
}

TEST_CASE("uniform batches") {
  Rng rng(4);
  auto b = SampleUniformBatch(100, 32, rng);
  CHECK(std::set<std::size_t>(b.begin(), b.end()).size() == 32);
  CHECK_THROWS_AS(SampleUniformBatch(10, 11, rng), SamplingError);
}

TEST_CASE("missing labels") {
  const langsim::Corpus& c = DefaultCorpus();
  Rng rng(9);
  auto [same, empty] = CorruptLabels(c, CorruptionMode::kMissing, 0.0, rng);
  CHECK(empty.affected_ids.empty());
  CHECK(langsim::CountLabeled(same.split(Split::kPretrain)) == 1600);

  auto [none, all] = CorruptLabels(c, CorruptionMode::kMissing, 1.0, rng);
  CHECK(langsim::CountLabeled(none.split(Split::kPretrain)) == 0);

  auto [most, plan] = CorruptLabels(c, CorruptionMode::kMissing, 0.75, rng);
  CHECK(plan.affected_ids.size() == 1200);
  CHECK(langsim::CountLabeled(most.split(Split::kPretrain)) == 400);
  CHECK(std::is_sorted(plan.affected_ids.begin(), plan.affected_ids.end()));
  for (std::size_t i = 0; i < c.split(Split::kPretrain).size(); ++i)
    CHECK(most.split(Split::kPretrain)[i].frames.Identical(c.split(Split::kPretrain)[i].frames));
  for (Split s : {Split::kFinetuneTrain, Split::kDev, Split::kTest})
    for (std::size_t i = 0; i < c.split(s).size(); ++i)
      CHECK(most.split(s)[i].label == c.split(s)[i].label);

  langsim::Corpus replay = ApplyCorruptionPlan(c, plan);
  for (std::size_t i = 0; i < c.split(Split::kPretrain).size(); ++i)
    CHECK(replay.split(Split::kPretrain)[i].label == most.split(Split::kPretrain)[i].label);
  CHECK_THROWS_AS(ApplyCorruptionPlan(most, plan), DomainError);
  CHECK_THROWS_AS(CorruptLabels(c, CorruptionMode::kMissing, 1.5, rng), DomainError);
}

TEST_CASE("noisy labels") {
  const langsim::Corpus& c = DefaultCorpus();
  Rng rng(10);
  auto [noisy, plan] = CorruptLabels(c, CorruptionMode::kNoisy, 0.5, rng);
  CHECK(plan.affected_ids.size() == 800);
  REQUIRE(plan.replacement_labels.size() == 800);
  std::map<std::uint64_t, int> truth;
  for (const auto& u : c.split(Split::kPretrain)) truth[u.utterance_id] = u.label;
  std::set<int> used;
  for (std::size_t k = 0; k < plan.affected_ids.size(); ++k) {
    CHECK(plan.replacement_labels[k] != truth[plan.affected_ids[k]]);
    CHECK(c.is_overlap(plan.replacement_labels[k]));
    used.insert(plan.replacement_labels[k]);
  }
  CHECK(used.size() == 8);
  CHECK(langsim::CountLabeled(noisy.split(Split::kPretrain)) == 1600);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < 1600; ++i)
    changed += noisy.split(Split::kPretrain)[i].label != c.split(Split::kPretrain)[i].label;
  CHECK(changed == 800);

  CorruptionPlan back = CorruptionPlanFromJson(CorruptionPlanToJson(plan));
  CHECK(back.affected_ids == plan.affected_ids);
  CHECK(back.replacement_labels == plan.replacement_labels);
  CHECK(back.mode == CorruptionMode::kNoisy);
  langsim::Corpus replay = ApplyCorruptionPlan(c, back);
  for (std::size_t i = 0; i < 1600; ++i)
    CHECK(replay.split(Split::kPretrain)[i].label == noisy.split(Split::kPretrain)[i].label);
}
