// lasr/objectives/supervised.h

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

#ifndef LASR_OBJECTIVES_SUPERVISED_H_
#define LASR_OBJECTIVES_SUPERVISED_H_

#include <span>
#include <string_view>
#include <vector>

#include "lasr/base/rng.h"
#include "lasr/diffkit/tape.h"

namespace lasr::objectives {

using diffkit::Tensor;
using diffkit::Var;

/// Language id carried by unlabeled utterances. Such utterances are never
/// anchors, positives or negatives.
inline constexpr int kUnlabeled = -1;

/// arccos(clamp(cos(a, b))) / pi, in [0, 1]. Zero-norm inputs throw
/// DomainError.
double AngularDistance(std::span<const double> a, std::span<const double> b);

/// B x B matrix of angular distances between the rows of `embeddings`.
/// The diagonal is close to, not exactly, zero because of the arccos clamp.
Var AngularDistanceMatrix(Var embeddings);

/// Pooled embeddings with their labels and cached pairwise distances. The
/// cached matrix is exactly symmetric with a zero diagonal.
struct EmbeddingBatch {
  Tensor embeddings;  // B x D
  std::vector<int> labels;
  Tensor distance_matrix;  // B x B
};

EmbeddingBatch MakeEmbeddingBatch(Tensor embeddings, std::vector<int> labels);

struct SupervisedResult {
  /// Mean contribution over the anchors used.
  Var loss;
  /// One contribution per used anchor, |anchors| x 1.
  Var per_anchor;
  std::vector<std::size_t> anchors;
  /// Labeled rows lacking a positive or a negative.
  std::size_t skipped = 0;
};

// Each loss takes a B x B distance matrix and the row labels. Anchors are
// labeled rows with at least one positive (same label, other row) and one
// negative (different label). With no usable anchor at all the batch cannot
// be mined, which is a SamplingError.

/// Random positive per anchor, then the closest negative farther than it; if
/// none is farther, the closest negative overall. Positives are drawn with
/// rng.Index over the positive rows in ascending order, anchor by anchor.
SupervisedResult SemiHardTripletLoss(Var distances, const std::vector<int>& labels, double gamma,
                                     Rng& rng);

/// Farthest positive and closest negative per anchor.
SupervisedResult HardTripletLoss(Var distances, const std::vector<int>& labels, double gamma);

/// 1 - sigmoid(max positive distance) + sigmoid(min negative distance). With
/// `similarity_variant`, each distance d inside the sigmoid becomes 1 - d.
SupervisedResult Ge2eLoss(Var distances, const std::vector<int>& labels, bool similarity_variant);

enum class SupervisedChoice { kNone, kSemiHard, kHard, kGe2e };

std::string_view SupervisedChoiceName(SupervisedChoice c);
SupervisedChoice ParseSupervisedChoice(std::string_view name);

struct SupervisedConfig {
  double gamma = 0.2;
  bool ge2e_similarity_variant = false;
};

/// Angular distances of the embeddings followed by the chosen loss. `rng` is
/// only consumed by the semi-hard variant. kNone is a ConfigError.
SupervisedResult SupervisedLoss(SupervisedChoice choice, Var embeddings,
                                const std::vector<int>& labels, const SupervisedConfig& config,
                                Rng& rng);

}  // namespace lasr::objectives

#endif  // LASR_OBJECTIVES_SUPERVISED_H_
