// objectives/supervised.cc

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

#include "lasr/objectives/supervised.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lasr/base/error.h"

namespace lasr::objectives {

using namespace diffkit;

double AngularDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    Fail<ShapeError>("angular distance: lengths differ (", a.size(), " vs ", b.size(), ")");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) Fail<DomainError>("angular distance: zero-norm input");
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  c = std::clamp(c, -1.0 + kArccosClamp, 1.0 - kArccosClamp);
  return std::acos(c) / std::numbers::pi;
}

Var AngularDistanceMatrix(Var embeddings) {
  Var u = RowNormalize(embeddings);
  return Scale(ClampedArccos(MatMul(u, Transpose(u))), 1.0 / std::numbers::pi);
}

EmbeddingBatch MakeEmbeddingBatch(Tensor embeddings, std::vector<int> labels) {
  const std::size_t b = embeddings.rows();
  if (labels.size() != b)
    Fail<ShapeError>("embedding batch: ", b, " embeddings but ", labels.size(), " labels");
  for (int l : labels)
    if (l < 0 && l != kUnlabeled) Fail<DomainError>("embedding batch: invalid label ", l);
  EmbeddingBatch batch;
  batch.distance_matrix = Tensor::Zeros(b, b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = i + 1; j < b; ++j) {
      const double d = AngularDistance(embeddings.row(i), embeddings.row(j));
      batch.distance_matrix(i, j) = d;
      batch.distance_matrix(j, i) = d;
    }
  batch.embeddings = std::move(embeddings);
  batch.labels = std::move(labels);
  return batch;
}

namespace {

// Anchor rows and their positive / negative masks (anchors x B).
struct Mining {
  std::vector<std::size_t> anchors;
  std::vector<std::uint8_t> positive;
  std::vector<std::uint8_t> negative;
  std::size_t skipped = 0;
};

Mining FindAnchors(std::size_t b, const std::vector<int>& labels) {
  if (labels.size() != b)
    Fail<ShapeError>("supervised loss: ", b, " rows but ", labels.size(), " labels");
  Mining m;
  for (std::size_t i = 0; i < b; ++i) {
    if (labels[i] == kUnlabeled) continue;
    bool has_pos = false, has_neg = false;
    for (std::size_t j = 0; j < b; ++j) {
      if (j == i || labels[j] == kUnlabeled) continue;
      (labels[j] == labels[i] ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
      ++m.skipped;
      continue;
    }
    m.anchors.push_back(i);
    for (std::size_t j = 0; j < b; ++j) {
      const bool valid = j != i && labels[j] != kUnlabeled;
      m.positive.push_back(valid && labels[j] == labels[i]);
      m.negative.push_back(valid && labels[j] != labels[i]);
    }
  }
  if (m.anchors.empty())
    Fail<SamplingError>("supervised loss: none of the ", m.skipped, " labeled rows in a batch of ", b,
                        " has both a positive and a negative; the batch sampler must provide "
                        ">= 2 labeled languages with >= 2 utterances each");
  return m;
}

void CheckDistances(Var d) {
  if (d.value().rows() != d.value().cols())
    Fail<ShapeError>("supervised loss: distance matrix must be square, got ",
                     ShapeString(d.value().shape()));
}

SupervisedResult Finish(Var per_anchor, Mining& m) {
  SupervisedResult r;
  r.per_anchor = per_anchor;
  r.loss = Scale(Sum(per_anchor), 1.0 / static_cast<double>(m.anchors.size()));
  r.anchors = std::move(m.anchors);
  r.skipped = m.skipped;
  return r;
}

}  // namespace

SupervisedResult HardTripletLoss(Var distances, const std::vector<int>& labels, double gamma) {
  if (!(gamma >= 0.0)) Fail<DomainError>("hard triplet loss: gamma must be >= 0, got ", gamma);
  CheckDistances(distances);
  Mining m = FindAnchors(distances.value().rows(), labels);
  Var rows = GatherRows(distances, m.anchors);
  Var far_pos = RowMax(rows, m.positive);
  Var near_neg = RowMin(rows, m.negative);
  return Finish(Hinge(Sub(far_pos, near_neg), gamma), m);
}

SupervisedResult Ge2eLoss(Var distances, const std::vector<int>& labels, bool similarity_variant) {
  CheckDistances(distances);
  Mining m = FindAnchors(distances.value().rows(), labels);
  Var rows = GatherRows(distances, m.anchors);
  Var far_pos = RowMax(rows, m.positive);
  Var near_neg = RowMin(rows, m.negative);
  if (similarity_variant) {
    far_pos = AddScalar(Scale(far_pos, -1.0), 1.0);
    near_neg = AddScalar(Scale(near_neg, -1.0), 1.0);
  }
  Var per = AddScalar(Sub(Sigmoid(near_neg), Sigmoid(far_pos)), 1.0);
  return Finish(per, m);
}

SupervisedResult SemiHardTripletLoss(Var distances, const std::vector<int>& labels, double gamma,
                                     Rng& rng) {
  if (!(gamma >= 0.0)) Fail<DomainError>("semi-hard triplet loss: gamma must be >= 0, got ", gamma);
  CheckDistances(distances);
  const Tensor& d = distances.value();
  const std::size_t b = d.rows();
  Mining m = FindAnchors(b, labels);
  std::vector<std::size_t> pos_cols, neg_cols;
  for (std::size_t a = 0; a < m.anchors.size(); ++a) {
    const std::size_t i = m.anchors[a];
    std::vector<std::size_t> positives;
    for (std::size_t j = 0; j < b; ++j)
      if (m.positive[a * b + j]) positives.push_back(j);
    const std::size_t p = positives[rng.Index(positives.size())];
    std::size_t semi = b, hardest = b;
    for (std::size_t j = 0; j < b; ++j) {
      if (!m.negative[a * b + j]) continue;
      if (hardest == b || d(i, j) < d(i, hardest)) hardest = j;
      if (d(i, j) > d(i, p) && (semi == b || d(i, j) < d(i, semi))) semi = j;
    }
    pos_cols.push_back(p);
    neg_cols.push_back(semi != b ? semi : hardest);
  }
  const std::size_t n = m.anchors.size();
  Var dp = Pick(distances, m.anchors, pos_cols, n, 1);
  Var dn = Pick(distances, m.anchors, neg_cols, n, 1);
  return Finish(Hinge(Sub(dp, dn), gamma), m);
}

std::string_view SupervisedChoiceName(SupervisedChoice c) {
  switch (c) {
    case SupervisedChoice::kNone: return "none";
    case SupervisedChoice::kSemiHard: return "semi_hard";
    case SupervisedChoice::kHard: return "hard";
    case SupervisedChoice::kGe2e: return "ge2e";
  }
  return "?";
}

SupervisedChoice ParseSupervisedChoice(std::string_view name) {
  for (auto c : {SupervisedChoice::kNone, SupervisedChoice::kSemiHard, SupervisedChoice::kHard,
                 SupervisedChoice::kGe2e})
    if (SupervisedChoiceName(c) == name) return c;
  Fail<ConfigError>("unknown supervised loss '", name, "' (expected none, semi_hard, hard or ge2e)");
}

SupervisedResult SupervisedLoss(SupervisedChoice choice, Var embeddings,
                                const std::vector<int>& labels, const SupervisedConfig& config,
                                Rng& rng) {
  switch (choice) {
    case SupervisedChoice::kSemiHard:
      return SemiHardTripletLoss(AngularDistanceMatrix(embeddings), labels, config.gamma, rng);
    case SupervisedChoice::kHard:
      return HardTripletLoss(AngularDistanceMatrix(embeddings), labels, config.gamma);
    case SupervisedChoice::kGe2e:
      return Ge2eLoss(AngularDistanceMatrix(embeddings), labels, config.ge2e_similarity_variant);
    case SupervisedChoice::kNone:
      break;
  }
  Fail<ConfigError>("supervised loss requested with choice 'none'");
}

}  // namespace lasr::objectives
