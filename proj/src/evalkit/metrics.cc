// evalkit/metrics.cc

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

#include "lasr/evalkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lasr/base/error.h"

namespace lasr::evalkit {

namespace {

void RequireTrials(const std::vector<ScoredTrial>& trials, const char* what) {
  if (trials.empty()) Fail<DomainError>(what, ": no trials");
}

}  // namespace

void ValidateTrials(const std::vector<ScoredTrial>& trials) {
  for (const ScoredTrial& t : trials) {
    if (t.scores.empty()) Fail<DomainError>("trial ", t.utterance_id, " has no scores");
    if (t.true_label < 0 || static_cast<std::size_t>(t.true_label) >= t.scores.size())
      Fail<DomainError>("trial ", t.utterance_id, " has label ", t.true_label, " outside [0, ",
                        t.scores.size(), ")");
    double sum = 0.0;
    for (double s : t.scores) {
      if (!(s >= 0.0 && s <= 1.0)) Fail<DomainError>("trial ", t.utterance_id, " has score ", s);
      sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      Fail<DomainError>("trial ", t.utterance_id, " scores sum to ", sum);
    if (t.scores.size() != trials.front().scores.size())
      Fail<DomainError>("trials disagree on the number of classes");
  }
}

std::size_t Argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

double Accuracy(const std::vector<ScoredTrial>& trials) {
  RequireTrials(trials, "accuracy");
  std::size_t correct = 0;
  for (const ScoredTrial& t : trials)
    correct += Argmax(t.scores) == static_cast<std::size_t>(t.true_label);
  return static_cast<double>(correct) / static_cast<double>(trials.size());
}

std::vector<ClassStats> PerClassStats(const std::vector<ScoredTrial>& trials) {
  std::map<int, ClassStats> by_class;
  for (const ScoredTrial& t : trials) {
    const int pred = static_cast<int>(Argmax(t.scores));
    ClassStats& truth = by_class[t.true_label];
    truth.label = t.true_label;
    ++truth.support;
    ClassStats& p = by_class[pred];
    p.label = pred;
    ++p.predicted;
    if (pred == t.true_label) ++p.true_positives;
  }
  std::vector<ClassStats> out;
  for (auto& [label, s] : by_class) {
    if (s.predicted > 0) s.precision = static_cast<double>(s.true_positives) / static_cast<double>(s.predicted);
    if (s.support > 0) s.recall = static_cast<double>(s.true_positives) / static_cast<double>(s.support);
    if (s.true_positives > 0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    out.push_back(s);
  }
  return out;
}

double MacroF1(const std::vector<ScoredTrial>& trials) {
  RequireTrials(trials, "macro-F1");
  double sum = 0.0;
  std::size_t classes = 0;
  for (const ClassStats& s : PerClassStats(trials)) {
    if (s.support == 0) continue;
    sum += s.f1;
    ++classes;
  }
  return sum / static_cast<double>(classes);
}

double Eer(const std::vector<ScoredTrial>& trials) {
  RequireTrials(trials, "EER");
  std::vector<double> targets, nontargets;
  for (const ScoredTrial& t : trials)
    for (std::size_t c = 0; c < t.scores.size(); ++c)
      (c == static_cast<std::size_t>(t.true_label) ? targets : nontargets).push_back(t.scores[c]);
  return EerFromScores(std::move(targets), std::move(nontargets));
}

double EerFromScores(std::vector<double> target_scores, std::vector<double> nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty())
    Fail<DomainError>("EER: need at least one target and one non-target trial (got ",
                      target_scores.size(), " and ", nontarget_scores.size(), ")");
  std::sort(target_scores.begin(), target_scores.end());
  std::sort(nontarget_scores.begin(), nontarget_scores.end());
  const double nt = static_cast<double>(target_scores.size());
  const double nn = static_cast<double>(nontarget_scores.size());

  std::vector<double> thresholds;
  std::merge(target_scores.begin(), target_scores.end(), nontarget_scores.begin(),
             nontarget_scores.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  // Operating points in increasing threshold order: FAR falls, FRR rises.
  std::vector<double> far(thresholds.size()), frr(thresholds.size());
  std::size_t t_below = 0, n_below = 0;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    while (t_below < target_scores.size() && target_scores[t_below] < thresholds[k]) ++t_below;
    while (n_below < nontarget_scores.size() && nontarget_scores[n_below] < thresholds[k]) ++n_below;
    far[k] = static_cast<double>(nontarget_scores.size() - n_below) / nn;
    frr[k] = static_cast<double>(t_below) / nt;
  }
  for (std::size_t k = 0; k + 1 < thresholds.size(); ++k) {
    const double d1 = far[k] - frr[k];
    if (d1 == 0.0) return far[k];
    const double d2 = far[k + 1] - frr[k + 1];
    if (d1 > 0.0 && d2 <= 0.0) {
      const double a = d1 / (d1 - d2);
      return far[k] + a * (far[k + 1] - far[k]);
    }
  }
  // At +inf FAR = 0 and FRR = 1, and at the lowest score FAR = 1, so the
  // curves always cross.
  Fail<NumericError>("EER: operating points never cross");
}

}  // namespace lasr::evalkit
