// encoder/encoder.cc

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

#include "lasr/encoder/encoder.h"

#include <algorithm>
#include <cmath>

#include "lasr/base/error.h"

namespace lasr::encoder {

void EncoderConfig::Validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) Fail<ConfigError>("encoder.", name, " must be >= 1, got ", v);
  };
  positive(feature_dim, "feature_dim");
  positive(hidden_dim, "hidden_dim");
  positive(embed_dim, "embed_dim");
  positive(codebook_size, "codebook_size");
  positive(code_dim, "code_dim");
  positive(num_languages, "num_languages");
  if (context < 0) Fail<ConfigError>("encoder.context must be >= 0, got ", context);
  if (num_hidden_layers < 0)
    Fail<ConfigError>("encoder.num_hidden_layers must be >= 0, got ", num_hidden_layers);
}

EncoderParams::EncoderParams(const EncoderConfig& config) : config_(config) {
  config_.Validate();
  const std::size_t in = static_cast<std::size_t>(config.input_dim());
  const std::size_t h = static_cast<std::size_t>(config.hidden_dim);
  const std::size_t d = static_cast<std::size_t>(config.embed_dim);
  const std::size_t f = static_cast<std::size_t>(config.feature_dim);
  const std::size_t v = static_cast<std::size_t>(config.codebook_size);
  const std::size_t l = static_cast<std::size_t>(config.num_languages);
  auto add = [&](std::string name, std::size_t r, std::size_t c) {
    names_.push_back(std::move(name));
    blocks_.push_back(Tensor::Zeros(r, c));
  };
  for (std::size_t i = 0; i < num_layers(); ++i) {
    const std::size_t fan_in = i == 0 ? in : h;
    const std::size_t fan_out = i + 1 == num_layers() ? d : h;
    add("layer" + std::to_string(i) + ".weight", fan_in, fan_out);
    add("layer" + std::to_string(i) + ".bias", 1, fan_out);
  }
  add("mask_embedding", 1, f);
  add("mlm_head.weight", d, v);
  add("mlm_head.bias", 1, v);
  add("contrastive_head.weight", d, d);
  add("classifier.weight", d, l);
  add("classifier.bias", 1, l);
}

std::size_t EncoderParams::IndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  Fail<ConfigError>("no parameter block named '", name, "'");
}

bool EncoderParams::Identical(const EncoderParams& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (names_[i] != other.names_[i] || !blocks_[i].Identical(other.blocks_[i])) return false;
  return true;
}

namespace {

void FillNormal(Tensor& t, double stddev, Rng& rng) {
  for (double& x : t.data()) x = stddev * rng.Normal();
}

}  // namespace

EncoderParams InitEncoderParams(const EncoderConfig& config, Rng& rng) {
  EncoderParams p(config);
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    Tensor& t = p.block(i);
    if (t.rows() == 1) continue;  // biases and the mask embedding
    FillNormal(t, 1.0 / std::sqrt(static_cast<double>(t.rows())), rng);
  }
  FillNormal(p.block(p.mask_embedding()), 0.1, rng);
  return p;
}

void ResetClassifier(EncoderParams& params, Rng& rng) {
  Tensor& w = params.block(params.classifier_weight());
  FillNormal(w, 1.0 / std::sqrt(static_cast<double>(w.rows())), rng);
  params.block(params.classifier_bias()).Fill(0.0);
}

BoundParams Bind(Tape& tape, const EncoderParams& params, Trainable trainable) {
  BoundParams b;
  b.params = &params;
  b.vars.reserve(params.num_blocks());
  for (std::size_t i = 0; i < params.num_blocks(); ++i) {
    const bool train = trainable == Trainable::kAll ||
                       (trainable == Trainable::kClassifierOnly && params.is_classifier(i));
    b.vars.push_back(train ? tape.Input(params.block(i)) : tape.Constant(params.block(i)));
  }
  return b;
}

std::vector<Tensor> CollectGradients(const Tape& tape, const BoundParams& bound) {
  std::vector<Tensor> grads;
  grads.reserve(bound.vars.size());
  for (Var v : bound.vars) grads.push_back(tape.grad(v));
  return grads;
}

MaskPlan PlanMask(std::size_t num_frames, double mask_rate, std::size_t span_length, Rng& rng) {
  if (!(mask_rate > 0.0 && mask_rate < 1.0))
    Fail<DomainError>("PlanMask: mask_rate must be in (0, 1), got ", mask_rate);
  if (span_length < 1 || span_length > num_frames)
    Fail<DomainError>("PlanMask: span_length must be in [1, T=", num_frames, "], got ",
                      span_length);
  const double target = mask_rate * static_cast<double>(num_frames);
  const std::size_t num_starts = num_frames - span_length + 1;
  std::vector<std::size_t> starts(num_starts);
  for (std::size_t i = 0; i < num_starts; ++i) starts[i] = i;
  std::vector<std::uint8_t> covered(num_frames, 0);
  std::size_t count = 0;
  // Incremental Fisher-Yates: draw one start at a time until the target is met.
  for (std::size_t drawn = 0; drawn < num_starts; ++drawn) {
    const std::size_t j = drawn + rng.Index(num_starts - drawn);
    std::swap(starts[drawn], starts[j]);
    for (std::size_t t = starts[drawn]; t < starts[drawn] + span_length; ++t) {
      count += covered[t] == 0;
      covered[t] = 1;
    }
    if (static_cast<double>(count) >= target) break;
  }
  MaskPlan plan;
  plan.span_length = span_length;
  plan.mask_rate = mask_rate;
  for (std::size_t t = 0; t < num_frames; ++t)
    if (covered[t]) plan.masked_positions.push_back(t);
  return plan;
}

FrameBatch MakeFrameBatch(const std::vector<const Tensor*>& utterances) {
  if (utterances.empty()) Fail<DomainError>("MakeFrameBatch: no utterances");
  const std::size_t f = utterances[0]->cols();
  FrameBatch batch;
  batch.offsets.push_back(0);
  for (const Tensor* u : utterances) {
    if (u->cols() != f)
      Fail<ShapeError>("MakeFrameBatch: feature dims differ (", f, " vs ", u->cols(), ")");
    if (u->rows() == 0) Fail<DomainError>("MakeFrameBatch: empty utterance");
    batch.offsets.push_back(batch.offsets.back() + u->rows());
  }
  batch.frames = Tensor::Zeros(batch.offsets.back(), f);
  for (std::size_t i = 0; i < utterances.size(); ++i)
    std::copy(utterances[i]->data().begin(), utterances[i]->data().end(),
              batch.frames.ptr() + batch.offsets[i] * f);
  return batch;
}

Var EncodeFrames(const BoundParams& p, Var frames, const std::vector<std::size_t>& offsets,
                 const std::vector<std::size_t>& masked_rows) {
  const EncoderConfig& cfg = p.params->config();
  if (frames.value().cols() != static_cast<std::size_t>(cfg.feature_dim))
    Fail<ShapeError>("encode: frames have ", frames.value().cols(),
                     " features but the encoder expects ", cfg.feature_dim);
  Var x = frames;
  if (!masked_rows.empty()) x = diffkit::MaskReplace(x, p[p.params->mask_embedding()], masked_rows);
  Var h = diffkit::ContextStack(x, offsets, static_cast<std::size_t>(cfg.context));
  const std::size_t layers = p.params->num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    h = diffkit::AddRow(diffkit::MatMul(h, p[EncoderParams::LayerWeight(l)]),
                        p[EncoderParams::LayerBias(l)]);
    if (l + 1 < layers) h = diffkit::Tanh(h);
  }
  return h;
}

Var PoolFrames(Var z, const std::vector<std::size_t>& offsets) {
  return diffkit::SegmentMean(z, offsets);
}

Var MlmLogits(const BoundParams& p, Var z) {
  return diffkit::AddRow(diffkit::MatMul(z, p[p.params->mlm_weight()]), p[p.params->mlm_bias()]);
}

Var ContrastiveContext(const BoundParams& p, Var z) {
  return diffkit::MatMul(z, p[p.params->contrastive_weight()]);
}

Var ClassifierLogits(const BoundParams& p, Var pooled) {
  return diffkit::AddRow(diffkit::MatMul(pooled, p[p.params->classifier_weight()]),
                         p[p.params->classifier_bias()]);
}

Tensor Encode(const EncoderParams& params, const Tensor& frames, const MaskPlan* plan) {
  if (frames.rows() == 0) Fail<DomainError>("encode: empty utterance");
  Tape tape;
  BoundParams b = Bind(tape, params, Trainable::kNone);
  std::vector<std::size_t> offsets = {0, frames.rows()};
  std::vector<std::size_t> masked;
  if (plan != nullptr) {
    for (std::size_t t : plan->masked_positions)
      if (t >= frames.rows()) Fail<DomainError>("encode: mask position ", t, " outside T=", frames.rows());
    masked = plan->masked_positions;
  }
  return EncodeFrames(b, tape.Constant(frames), offsets, masked).value();
}

Tensor Pool(const Tensor& z) {
  if (z.rows() == 0 || z.size() == 0) Fail<DomainError>("pool: empty sequence");
  Tape tape;
  return PoolFrames(tape.Constant(z), {0, z.rows()}).value();
}

Tensor EmbedUtterances(const EncoderParams& params, const std::vector<const Tensor*>& utterances) {
  FrameBatch batch = MakeFrameBatch(utterances);
  Tape tape;
  BoundParams b = Bind(tape, params, Trainable::kNone);
  Var z = EncodeFrames(b, tape.Constant(std::move(batch.frames)), batch.offsets);
  return PoolFrames(z, batch.offsets).value();
}

}  // namespace lasr::encoder
