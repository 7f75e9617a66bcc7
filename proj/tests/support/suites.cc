// tests/support/suites.cc

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

#include "suites.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "lasr/diffkit/evaluate.h"
#include "lasr/encoder/encoder.h"
#include "lasr/encoder/quantizer.h"
#include "lasr/evalkit/metrics.h"
#include "lasr/objectives/lasr.h"
#include "lasr/objectives/ssl.h"
#include "lasr/objectives/supervised.h"
#include "oracles.h"

namespace lasr::suites {

using diffkit::Graph;
using diffkit::Tape;
using diffkit::Tensor;
using diffkit::TensorMap;
using diffkit::Var;
using diffkit::VarMap;
namespace obj = lasr::objectives;
namespace enc = lasr::encoder;

void Outcome::Record(const std::string& name, double err) {
  ++cases;
  if (err > worst || std::isnan(err)) {
    worst = std::isnan(err) ? INFINITY : err;
    worst_case = name;
  }
}

namespace {

constexpr double kFdEps = 1e-6;
// Minimum separation between competing distances, and between a hinge
// argument and its kink, for a case to count as away from kinks.
constexpr double kKinkGap = 1e-4;
constexpr double kGamma = 0.2;

Tensor Random(Rng& rng, std::size_t r, std::size_t c) {
  Tensor t = Tensor::Zeros(r, c);
  for (double& x : t.data()) x = rng.Normal();
  return t;
}

void Summarize(Outcome& out, const std::string& family, std::size_t n, double worst) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s: %zu cases, worst %.3g", family.c_str(), n, worst);
  out.details.push_back(buf);
}

// True when no selection, semi-hard threshold or hinge is within kKinkGap
// of switching for any anchor.
bool AwayFromKinks(const Tensor& emb, const std::vector<int>& labels) {
  const std::size_t b = labels.size();
  for (std::size_t i = 0; i < b; ++i) {
    if (labels[i] < 0) continue;
    std::vector<double> pos, neg;
    for (std::size_t j = 0; j < b; ++j) {
      if (j == i || labels[j] < 0) continue;
      (labels[j] == labels[i] ? pos : neg).push_back(oracle::Distance(emb, i, j));
    }
    std::vector<double> all = pos;
    all.insert(all.end(), neg.begin(), neg.end());
    std::sort(all.begin(), all.end());
    for (std::size_t k = 1; k < all.size(); ++k)
      if (all[k] - all[k - 1] < kKinkGap) return false;
    for (double p : pos)
      for (double n : neg)
        if (std::abs(kGamma + p - n) < kKinkGap) return false;
  }
  return true;
}

std::vector<int> PairedLabels(std::size_t classes, std::size_t per_class) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < classes; ++c)
    for (std::size_t k = 0; k < per_class; ++k) labels.push_back(static_cast<int>(c));
  return labels;
}

enc::EncoderConfig TinyEncoder(std::uint64_t seed) {
  enc::EncoderConfig c;
  c.feature_dim = 3;
  c.context = 1;
  c.hidden_dim = 4;
  c.embed_dim = 3;
  c.num_hidden_layers = 2;
  c.codebook_size = 5;
  c.code_dim = 2;
  c.num_languages = 3;
  c.quantizer_seed = seed;
  return c;
}

enc::BoundParams FromVarMap(const enc::EncoderParams& p, const VarMap& v) {
  enc::BoundParams b;
  b.params = &p;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) b.vars.push_back(v.at(p.name(i)));
  return b;
}

std::set<std::string> AddParams(const enc::EncoderParams& p, TensorMap& inputs) {
  std::set<std::string> wrt;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    inputs[p.name(i)] = p.block(i);
    wrt.insert(p.name(i));
  }
  return wrt;
}

double GradError(const Graph& g, const TensorMap& inputs, const std::set<std::string>& wrt) {
  auto analytic = diffkit::EvaluateWithGradients(g, inputs, wrt);
  auto numeric = diffkit::FiniteDifferenceGradient(g, inputs, wrt, kFdEps);
  double worst = 0.0;
  for (const auto& name : wrt)
    worst = std::max(worst, diffkit::RelativeError(analytic.grads.at(name), numeric.at(name)));
  return worst;
}

// Two or three utterances of a few frames with a fixed mask, concatenated.
struct TinyUtterances {
  Tensor frames;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> masked;  // global rows
  std::vector<std::size_t> groups;  // masked rows per utterance, as offsets
};

TinyUtterances MakeTinyUtterances(Rng& rng, std::size_t count) {
  TinyUtterances u;
  u.offsets = {0};
  u.groups = {0};
  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < count; ++i) lengths.push_back(5 + rng.Index(3));
  for (std::size_t len : lengths) u.offsets.push_back(u.offsets.back() + len);
  u.frames = Random(rng, u.offsets.back(), 3);
  for (std::size_t i = 0; i < count; ++i) {
    enc::MaskPlan plan = enc::PlanMask(lengths[i], 0.4, 2, rng);
    for (std::size_t t : plan.masked_positions) u.masked.push_back(u.offsets[i] + t);
    u.groups.push_back(u.masked.size());
  }
  return u;
}

}  // namespace

Outcome GradientSuite(std::size_t cases) {
  Outcome out;

  // Supervised losses on raw embeddings.
  struct Family {
    std::string name;
    std::function<Var(Var, const std::vector<int>&)> loss;
  };
  const std::vector<Family> supervised = {
      {"hard", [](Var e, const std::vector<int>& l) {
         return obj::HardTripletLoss(obj::AngularDistanceMatrix(e), l, kGamma).loss;
       }},
      {"semi_hard", [](Var e, const std::vector<int>& l) {
         Rng rng(77);
         return obj::SemiHardTripletLoss(obj::AngularDistanceMatrix(e), l, kGamma, rng).loss;
       }},
      {"ge2e", [](Var e, const std::vector<int>& l) {
         return obj::Ge2eLoss(obj::AngularDistanceMatrix(e), l, false).loss;
       }},
      {"ge2e_similarity", [](Var e, const std::vector<int>& l) {
         return obj::Ge2eLoss(obj::AngularDistanceMatrix(e), l, true).loss;
       }},
  };
  for (const Family& fam : supervised) {
    double worst = 0.0;
    std::size_t accepted = 0;
    for (std::uint64_t seed = 0; accepted < cases; ++seed) {
      Rng rng(DeriveSeed(seed, {StreamTag(fam.name)}));
      std::vector<int> labels = PairedLabels(4, 2);
      labels.push_back(obj::kUnlabeled);
      Tensor emb = Random(rng, labels.size(), 4);
      if (!AwayFromKinks(emb, labels)) continue;
      ++accepted;
      Graph g = [&](Tape&, const VarMap& v) { return fam.loss(v.at("emb"), labels); };
      const double err = GradError(g, {{"emb", emb}}, {"emb"});
      out.Record(fam.name + " seed " + std::to_string(seed), err);
      worst = std::max(worst, err);
    }
    Summarize(out, fam.name, cases, worst);
  }

  // The encoder itself: a random projection of every frame embedding.
  {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < cases; ++seed) {
      Rng rng(DeriveSeed(seed, {StreamTag("encoder")}));
      enc::EncoderParams p = enc::InitEncoderParams(TinyEncoder(seed), rng);
      TinyUtterances u = MakeTinyUtterances(rng, 2);
      TensorMap inputs;
      std::set<std::string> wrt = AddParams(p, inputs);
      inputs["frames"] = u.frames;
      inputs["proj"] = Random(rng, u.frames.rows(), 3);
      wrt.insert("frames");
      Graph g = [&](Tape&, const VarMap& v) {
        Var z = enc::EncodeFrames(FromVarMap(p, v), v.at("frames"), u.offsets, u.masked);
        return diffkit::Sum(diffkit::Mul(z, v.at("proj")));
      };
      const double err = GradError(g, inputs, wrt);
      out.Record("encoder seed " + std::to_string(seed), err);
      worst = std::max(worst, err);
    }
    Summarize(out, "encoder", cases, worst);
  }

  // MLM through the encoder and the prediction head.
  {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < cases; ++seed) {
      Rng rng(DeriveSeed(seed, {StreamTag("mlm")}));
      enc::EncoderParams p = enc::InitEncoderParams(TinyEncoder(seed), rng);
      TinyUtterances u = MakeTinyUtterances(rng, 2);
      enc::RandomQuantizer q = enc::MakeRandomQuantizer(3, 2, 5, seed);
      std::vector<std::size_t> codes = enc::QuantizeTargets(q, u.frames), targets;
      for (std::size_t r : u.masked) targets.push_back(codes[r]);
      TensorMap inputs;
      std::set<std::string> wrt = AddParams(p, inputs);
      Graph g = [&](Tape& tape, const VarMap& v) {
        enc::BoundParams b = FromVarMap(p, v);
        Var z = enc::EncodeFrames(b, tape.Constant(u.frames), u.offsets, u.masked);
        return obj::MlmLoss(enc::MlmLogits(b, diffkit::GatherRows(z, u.masked)), targets);
      };
      const double err = GradError(g, inputs, wrt);
      out.Record("mlm seed " + std::to_string(seed), err);
      worst = std::max(worst, err);
    }
    Summarize(out, "mlm", cases, worst);
  }

  // Contrastive: masked-pass context against unmasked-pass latents.
  {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < cases; ++seed) {
      Rng rng(DeriveSeed(seed, {StreamTag("contrastive")}));
      enc::EncoderParams p = enc::InitEncoderParams(TinyEncoder(seed), rng);
      TinyUtterances u = MakeTinyUtterances(rng, 2);
      TensorMap inputs;
      std::set<std::string> wrt = AddParams(p, inputs);
      Graph g = [&](Tape& tape, const VarMap& v) {
        enc::BoundParams b = FromVarMap(p, v);
        Var x = tape.Constant(u.frames);
        Var zm = enc::EncodeFrames(b, x, u.offsets, u.masked);
        Var zc = enc::EncodeFrames(b, x, u.offsets);
        Var context = enc::ContrastiveContext(b, diffkit::GatherRows(zm, u.masked));
        Var latents = diffkit::GatherRows(zc, u.masked);
        Rng draw(seed);
        return obj::ContrastiveLoss(context, latents, u.groups, 2, 0.5, draw).loss;
      };
      const double err = GradError(g, inputs, wrt);
      out.Record("contrastive seed " + std::to_string(seed), err);
      worst = std::max(worst, err);
    }
    Summarize(out, "contrastive", cases, worst);
  }

  // The combined objective: MLM plus lambda times the hard triplet loss on
  // pooled unmasked embeddings.
  {
    double worst = 0.0;
    std::size_t accepted = 0;
    for (std::uint64_t seed = 0; accepted < cases; ++seed) {
      Rng rng(DeriveSeed(seed, {StreamTag("lasr")}));
      enc::EncoderParams p = enc::InitEncoderParams(TinyEncoder(seed), rng);
      TinyUtterances u = MakeTinyUtterances(rng, 4);
      const std::vector<int> labels = {0, 1, 0, 1};
      std::vector<Tensor> utts;
      for (std::size_t i = 0; i < 4; ++i) {
        Tensor t = Tensor::Zeros(u.offsets[i + 1] - u.offsets[i], 3);
        std::copy(u.frames.ptr() + u.offsets[i] * 3, u.frames.ptr() + u.offsets[i + 1] * 3, t.ptr());
        utts.push_back(std::move(t));
      }
      Tensor pooled = enc::EmbedUtterances(p, {&utts[0], &utts[1], &utts[2], &utts[3]});
      if (!AwayFromKinks(pooled, labels)) continue;
      ++accepted;
      enc::RandomQuantizer q = enc::MakeRandomQuantizer(3, 2, 5, seed);
      std::vector<std::size_t> codes = enc::QuantizeTargets(q, u.frames), targets;
      for (std::size_t r : u.masked) targets.push_back(codes[r]);
      TensorMap inputs;
      std::set<std::string> wrt = AddParams(p, inputs);
      Graph g = [&](Tape& tape, const VarMap& v) {
        enc::BoundParams b = FromVarMap(p, v);
        Var x = tape.Constant(u.frames);
        Var zm = enc::EncodeFrames(b, x, u.offsets, u.masked);
        Var ssl = obj::MlmLoss(enc::MlmLogits(b, diffkit::GatherRows(zm, u.masked)), targets);
        Var h = enc::PoolFrames(enc::EncodeFrames(b, x, u.offsets), u.offsets);
        Var sup = obj::HardTripletLoss(obj::AngularDistanceMatrix(h), labels, kGamma).loss;
        return obj::LasrTotal(ssl, sup, 16.0);
      };
      const double err = GradError(g, inputs, wrt);
      out.Record("lasr seed " + std::to_string(seed), err);
      worst = std::max(worst, err);
    }
    Summarize(out, "lasr_total", cases, worst);
  }
  return out;
}

Outcome SupervisedOracleSuite(std::size_t batches) {
  Outcome out;
  auto labels_for = [](std::uint64_t seed, std::size_t classes, std::size_t per_class) {
    std::vector<int> labels = PairedLabels(classes, per_class);
    if (seed % 5 == 0) {
      labels[1] = obj::kUnlabeled;
      labels[labels.size() - 2] = obj::kUnlabeled;
    }
    return labels;
  };
  double w_hard = 0.0, w_semi = 0.0, w_ge2e = 0.0, w_sim = 0.0;
  for (std::uint64_t seed = 0; seed < batches; ++seed) {
    Rng rng(DeriveSeed(seed, {StreamTag("supervised-oracle")}));
    {
      std::vector<int> labels = labels_for(seed, 8, 4);  // B = 32
      Tensor emb = Random(rng, labels.size(), 8);
      Tape tape;
      const double got = obj::HardTripletLoss(obj::AngularDistanceMatrix(tape.Constant(emb)), labels,
                                              kGamma).loss.value().item();
      const double err = std::abs(got - oracle::HardTriplet(emb, labels, kGamma));
      out.Record("hard seed " + std::to_string(seed), err);
      w_hard = std::max(w_hard, err);
    }
    {
      std::vector<int> labels = labels_for(seed, 4, 4);  // B = 16
      Tensor emb = Random(rng, labels.size(), 8);
      Tape tape;
      Rng draw(seed);
      const double got = obj::SemiHardTripletLoss(obj::AngularDistanceMatrix(tape.Constant(emb)),
                                                  labels, kGamma, draw).loss.value().item();
      const double err = std::abs(got - oracle::SemiHardTriplet(emb, labels, kGamma, Rng(seed)));
      out.Record("semi_hard seed " + std::to_string(seed), err);
      w_semi = std::max(w_semi, err);
    }
    for (bool variant : {false, true}) {
      std::vector<int> labels = labels_for(seed, 4, 4);
      Tensor emb = Random(rng, labels.size(), 8);
      Tape tape;
      const double got =
          obj::Ge2eLoss(obj::AngularDistanceMatrix(tape.Constant(emb)), labels, variant).loss.value().item();
      const double err = std::abs(got - oracle::Ge2e(emb, labels, variant));
      out.Record(std::string(variant ? "ge2e_similarity" : "ge2e") + " seed " + std::to_string(seed), err);
      (variant ? w_sim : w_ge2e) = std::max(variant ? w_sim : w_ge2e, err);
    }
  }
  Summarize(out, "hard", batches, w_hard);
  Summarize(out, "semi_hard", batches, w_semi);
  Summarize(out, "ge2e", batches, w_ge2e);
  Summarize(out, "ge2e_similarity", batches, w_sim);
  return out;
}

Outcome EerOracleSuite(std::size_t cases) {
  Outcome out;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < cases; ++seed) {
    Rng rng(DeriveSeed(seed, {StreamTag("eer-oracle")}));
    std::vector<double> targets, nontargets;
    double err = 0.0;
    if (seed % 2 == 0) {
      // 50 utterances x 4 classes = 200 pooled trials from softmax posteriors.
      std::vector<evalkit::ScoredTrial> trials;
      for (std::uint64_t u = 0; u < 50; ++u) {
        evalkit::ScoredTrial t;
        t.utterance_id = u;
        t.true_label = static_cast<int>(rng.Index(4));
        double z = 0.0;
        for (int c = 0; c < 4; ++c) {
          const double s = std::exp(rng.Normal() + (c == t.true_label ? 1.0 : 0.0));
          t.scores.push_back(s);
          z += s;
        }
        for (double& s : t.scores) s /= z;
        for (int c = 0; c < 4; ++c) (c == t.true_label ? targets : nontargets).push_back(t.scores[c]);
        trials.push_back(std::move(t));
      }
      err = std::abs(evalkit::Eer(trials) - oracle::Eer(targets, nontargets));
    } else {
      // Coarse scores with many ties.
      for (int i = 0; i < 60; ++i) targets.push_back(std::round(20.0 * (0.6 + 0.25 * rng.Normal())) / 20.0);
      for (int i = 0; i < 140; ++i) nontargets.push_back(std::round(20.0 * (0.4 + 0.25 * rng.Normal())) / 20.0);
      err = std::abs(evalkit::EerFromScores(targets, nontargets) - oracle::Eer(targets, nontargets));
    }
    out.Record("eer seed " + std::to_string(seed), err);
    worst = std::max(worst, err);
  }
  Summarize(out, "eer", cases, worst);
  return out;
}

Outcome QuantizerOracleSuite(std::size_t cases) {
  Outcome out;
  double mismatches_total = 0.0;
  for (std::uint64_t seed = 0; seed < cases; ++seed) {
    enc::RandomQuantizer q = enc::MakeRandomQuantizer(20, 16, 64, seed);
    Rng rng(DeriveSeed(seed, {StreamTag("quantizer-oracle")}));
    Tensor frames = Random(rng, 50, 20);
    std::vector<std::size_t> codes = enc::QuantizeTargets(q, frames);
    double mismatches = 0.0;
    for (std::size_t t = 0; t < 50; ++t) {
      std::vector<double> p(16, 0.0);
      double norm = 0.0;
      for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t k = 0; k < 20; ++k) p[i] += q.projection(i, k) * frames(t, k);
        norm += p[i] * p[i];
      }
      for (double& x : p) x /= std::sqrt(norm);
      // All-pairs scan: distance to every codebook row, then the first minimum.
      std::vector<double> dist(64, 0.0);
      for (std::size_t v = 0; v < 64; ++v)
        for (std::size_t i = 0; i < 16; ++i)
          dist[v] += (p[i] - q.codebook(v, i)) * (p[i] - q.codebook(v, i));
      const std::size_t best =
          static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
      mismatches += codes[t] != best;
    }
    out.Record("quantizer seed " + std::to_string(seed), mismatches);
    mismatches_total += mismatches;
  }
  Summarize(out, "quantizer mismatches", cases, mismatches_total);
  return out;
}

}  // namespace lasr::suites
