// lasr/evalkit/metrics.h

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

#ifndef LASR_EVALKIT_METRICS_H_
#define LASR_EVALKIT_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace lasr::evalkit {

/// One evaluated utterance: posteriors over all L classes.
struct ScoredTrial {
  std::uint64_t utterance_id = 0;
  int true_label = 0;
  std::vector<double> scores;
};

/// Checks that scores lie in [0, 1] and sum to 1 within 1e-6, and that the
/// label indexes a class; throws DomainError.
void ValidateTrials(const std::vector<ScoredTrial>& trials);

/// Index of the largest score, ties to the lowest index.
std::size_t Argmax(std::span<const double> scores);

double Accuracy(const std::vector<ScoredTrial>& trials);

struct ClassStats {
  int label = 0;
  std::size_t support = 0;  // trials whose true label is this class
  std::size_t predicted = 0;
  std::size_t true_positives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Statistics for every class with at least one true or predicted trial.
std::vector<ClassStats> PerClassStats(const std::vector<ScoredTrial>& trials);

/// Unweighted mean F1 over the classes that have at least one true trial.
double MacroF1(const std::vector<ScoredTrial>& trials);

/// Pooled one-vs-rest EER: every (trial, class) pair is a detection trial
/// scored by that class's posterior.
double Eer(const std::vector<ScoredTrial>& trials);

/// EER from explicit target / non-target scores. The false-accept rate at
/// threshold t counts non-targets scoring >= t, the false-reject rate counts
/// targets scoring < t. Thresholds are every distinct score plus +inf; the
/// crossing is linearly interpolated between adjacent operating points.
double EerFromScores(std::vector<double> target_scores, std::vector<double> nontarget_scores);

}  // namespace lasr::evalkit

#endif  // LASR_EVALKIT_METRICS_H_
