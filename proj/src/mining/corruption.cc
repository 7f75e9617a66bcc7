// mining/corruption.cc

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

#include "lasr/mining/corruption.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lasr/base/error.h"
#include "lasr/base/json_util.h"

namespace lasr::mining {

using langsim::Corpus;
using langsim::Split;

std::string_view CorruptionModeName(CorruptionMode m) {
  return m == CorruptionMode::kMissing ? "missing" : "noisy";
}

CorruptionMode ParseCorruptionMode(std::string_view name) {
  if (name == "missing") return CorruptionMode::kMissing;
  if (name == "noisy") return CorruptionMode::kNoisy;
  Fail<ConfigError>("unknown corruption mode '", name, "' (expected missing or noisy)");
}

std::pair<Corpus, CorruptionPlan> CorruptLabels(const Corpus& corpus, CorruptionMode mode, double p,
                                                Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) Fail<DomainError>("corruption fraction must be in [0, 1], got ", p);
  const auto& pretrain = corpus.split(Split::kPretrain);
  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < pretrain.size(); ++i)
    if (pretrain[i].labeled()) labeled.push_back(i);
  const std::size_t count =
      static_cast<std::size_t>(std::llround(p * static_cast<double>(labeled.size())));

  CorruptionPlan plan;
  plan.mode = mode;
  plan.p = p;
  std::vector<std::size_t> chosen;
  for (std::size_t j : rng.SampleWithoutReplacement(labeled.size(), count))
    chosen.push_back(labeled[j]);
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    return pretrain[a].utterance_id < pretrain[b].utterance_id;
  });
  std::vector<int> languages = corpus.overlap_set;
  std::sort(languages.begin(), languages.end());
  if (mode == CorruptionMode::kNoisy && count > 0 && languages.size() < 2)
    Fail<DomainError>("noisy labels need at least two pretrain languages");
  for (std::size_t i : chosen) {
    plan.affected_ids.push_back(pretrain[i].utterance_id);
    if (mode == CorruptionMode::kNoisy) {
      // Uniform over the pretrain languages other than the true one.
      std::vector<int> others;
      for (int l : languages)
        if (l != pretrain[i].label) others.push_back(l);
      const int replacement = others[rng.Index(others.size())];
      plan.replacement_labels.push_back(replacement);
    }
  }
  return {ApplyCorruptionPlan(corpus, plan), plan};
}

Corpus ApplyCorruptionPlan(const Corpus& corpus, const CorruptionPlan& plan) {
  if (plan.mode == CorruptionMode::kNoisy && plan.replacement_labels.size() != plan.affected_ids.size())
    Fail<DomainError>("corruption plan: ", plan.affected_ids.size(), " ids but ",
                      plan.replacement_labels.size(), " replacement labels");
  Corpus out = corpus;
  auto& pretrain = out.split(Split::kPretrain);
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < pretrain.size(); ++i) index[pretrain[i].utterance_id] = i;
  for (std::size_t k = 0; k < plan.affected_ids.size(); ++k) {
    auto it = index.find(plan.affected_ids[k]);
    if (it == index.end())
      Fail<DomainError>("corruption plan: utterance ", plan.affected_ids[k], " is not in pretrain");
    langsim::Utterance& u = pretrain[it->second];
    if (!u.labeled())
      Fail<DomainError>("corruption plan: utterance ", plan.affected_ids[k], " is already unlabeled");
    if (plan.mode == CorruptionMode::kMissing) {
      u.label = langsim::kUnlabeled;
    } else {
      const int replacement = plan.replacement_labels[k];
      if (replacement == u.label || !corpus.is_overlap(replacement))
        Fail<DomainError>("corruption plan: invalid replacement ", replacement, " for utterance ",
                          u.utterance_id);
      u.label = replacement;
    }
  }
  return out;
}

nlohmann::json CorruptionPlanToJson(const CorruptionPlan& plan) {
  nlohmann::json j;
  j["mode"] = std::string(CorruptionModeName(plan.mode));
  j["p"] = plan.p;
  j["affected_ids"] = plan.affected_ids;
  j["replacement_labels"] = plan.replacement_labels;
  return j;
}

CorruptionPlan CorruptionPlanFromJson(const nlohmann::json& j) {
  JsonReader r(j, "corruption_plan");
  CorruptionPlan plan;
  plan.mode = ParseCorruptionMode(r.Get<std::string>("mode"));
  plan.p = r.Get<double>("p");
  plan.affected_ids = r.Get<std::vector<std::uint64_t>>("affected_ids");
  plan.replacement_labels = r.Get<std::vector<int>>("replacement_labels");
  r.Finish({"mode", "p", "affected_ids", "replacement_labels"});
  return plan;
}

}  // namespace lasr::mining
