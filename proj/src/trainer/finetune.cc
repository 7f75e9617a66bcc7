// trainer/finetune.cc

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

#include "lasr/trainer/finetune.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lasr/base/error.h"
#include "lasr/base/rng.h"
#include "lasr/mining/sampler.h"
#include "lasr/trainer/optimizer.h"

namespace lasr::trainer {

using diffkit::Tape;
using diffkit::Tensor;
using diffkit::Var;

namespace {

constexpr std::size_t kEmbedChunk = 64;

void CheckLabels(const std::vector<langsim::Utterance>& utts, int num_classes) {
  for (const langsim::Utterance& u : utts)
    if (u.label < 0 || u.label >= num_classes)
      Fail<DomainError>("finetune: utterance ", u.utterance_id, " has label ", u.label,
                        " outside [0, ", num_classes, ")");
}

}  // namespace

std::string_view FinetuneModeName(FinetuneMode m) {
  return m == FinetuneMode::kFull ? "full" : "head_only";
}

FinetuneMode ParseFinetuneMode(std::string_view name) {
  if (name == "head_only") return FinetuneMode::kHeadOnly;
  if (name == "full") return FinetuneMode::kFull;
  Fail<ConfigError>("unknown finetune mode '", name, "' (expected head_only or full)");
}

void FinetuneConfig::Validate() const {
  if (steps < 0) Fail<ConfigError>("finetune.steps must be >= 0, got ", steps);
  if (batch_size < 1) Fail<ConfigError>("finetune.batch_size must be >= 1, got ", batch_size);
  if (steps > 0 && (warmup_steps < 1 || warmup_steps >= steps))
    Fail<ConfigError>("finetune.warmup_steps must be in [1, steps), got ", warmup_steps);
  if (!(peak_lr > 0.0)) Fail<ConfigError>("finetune.peak_lr must be > 0, got ", peak_lr);
  if (!(clip_norm > 0.0)) Fail<ConfigError>("finetune.clip_norm must be > 0, got ", clip_norm);
}

std::string FinetuneLogHeader() { return "step,lr,loss,batch_accuracy"; }

std::string FinetuneLogRow(const FinetuneRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g", r.step, r.lr, r.loss, r.batch_accuracy);
  return buf;
}

Tensor EmbedAll(const encoder::EncoderParams& params,
                const std::vector<langsim::Utterance>& utterances) {
  if (utterances.empty()) Fail<DomainError>("embed: no utterances");
  const std::size_t d = static_cast<std::size_t>(params.config().embed_dim);
  Tensor out = Tensor::Zeros(utterances.size(), d);
  for (std::size_t begin = 0; begin < utterances.size(); begin += kEmbedChunk) {
    const std::size_t end = std::min(utterances.size(), begin + kEmbedChunk);
    std::vector<const Tensor*> frames;
    for (std::size_t i = begin; i < end; ++i) frames.push_back(&utterances[i].frames);
    Tensor e = encoder::EmbedUtterances(params, frames);
    std::copy(e.data().begin(), e.data().end(), out.data().begin() + begin * d);
  }
  return out;
}

FinetuneResult Finetune(const encoder::EncoderParams& pretrained,
                        const std::vector<langsim::Utterance>& train, const FinetuneConfig& config) {
  config.Validate();
  if (train.empty()) Fail<ConfigError>("finetune: no training utterances");
  const int num_classes = pretrained.config().num_languages;
  CheckLabels(train, num_classes);
  const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size),
                                                  train.size());

  FinetuneResult result{pretrained, {}};
  encoder::EncoderParams& params = result.params;
  Rng head_rng = Rng::Derive(config.seed, {StreamTag("classifier")});
  encoder::ResetClassifier(params, head_rng);
  AdamState adam = MakeAdamState(params);
  const bool head_only = config.mode == FinetuneMode::kHeadOnly;
  std::vector<bool> update(params.num_blocks());
  for (std::size_t i = 0; i < params.num_blocks(); ++i) update[i] = !head_only || params.is_classifier(i);

  // The frozen encoder makes the pooled embeddings constant, so head-only
  // training computes them once.
  Tensor cached;
  if (head_only && config.steps > 0) cached = EmbedAll(params, train);

  for (int step = 1; step <= config.steps; ++step) {
    const std::uint64_t s = static_cast<std::uint64_t>(step);
    Rng batch_rng = Rng::Derive(config.seed, {StreamTag("finetune-batch"), s});
    std::vector<std::size_t> idx = mining::SampleUniformBatch(train.size(), batch, batch_rng);
    std::vector<std::size_t> targets;
    for (std::size_t i : idx) targets.push_back(static_cast<std::size_t>(train[i].label));

    Tape tape;
    encoder::BoundParams b = encoder::Bind(
        tape, params, head_only ? encoder::Trainable::kClassifierOnly : encoder::Trainable::kAll);
    Var pooled;
    if (head_only) {
      pooled = diffkit::GatherRows(tape.Constant(cached), idx);
    } else {
      std::vector<const Tensor*> frames;
      for (std::size_t i : idx) frames.push_back(&train[i].frames);
      encoder::FrameBatch fb = encoder::MakeFrameBatch(frames);
      Var z = encoder::EncodeFrames(b, tape.Constant(std::move(fb.frames)), fb.offsets);
      pooled = encoder::PoolFrames(z, fb.offsets);
    }
    Var logits = encoder::ClassifierLogits(b, pooled);
    Var loss = diffkit::SoftmaxCrossEntropy(logits, targets);

    FinetuneRecord rec;
    rec.step = step;
    rec.loss = loss.value().item();
    std::size_t correct = 0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      std::span<const double> row = logits.value().row(r);
      const auto best = std::max_element(row.begin(), row.end()) - row.begin();
      correct += static_cast<std::size_t>(best) == targets[r];
    }
    rec.batch_accuracy = static_cast<double>(correct) / static_cast<double>(idx.size());

    tape.Backward(loss);
    std::vector<Tensor> grads = encoder::CollectGradients(tape, b);
    ClipGlobalNorm(grads, config.clip_norm);
    rec.lr = LrSchedule(s, static_cast<std::uint64_t>(config.warmup_steps), config.peak_lr);
    try {
      AdamStep(params, grads, adam, rec.lr, update);
    } catch (const NumericError& e) {
      Fail<NumericError>("finetune: ", e.what());
    }
    result.log.push_back(rec);
  }
  return result;
}

FinetuneResult Finetune(const encoder::EncoderParams& pretrained, const langsim::Corpus& corpus,
                        const FinetuneConfig& config) {
  const encoder::EncoderConfig& ec = pretrained.config();
  if (ec.feature_dim != corpus.feature_dim())
    Fail<ShapeError>("finetune: checkpoint expects F=", ec.feature_dim, " but the corpus has F=",
                     corpus.feature_dim());
  if (ec.num_languages != corpus.num_languages())
    Fail<ShapeError>("finetune: checkpoint classifies ", ec.num_languages,
                     " languages but the corpus has ", corpus.num_languages());
  return Finetune(pretrained, corpus.split(langsim::Split::kFinetuneTrain), config);
}

std::vector<evalkit::ScoredTrial> ScoreUtterances(const encoder::EncoderParams& params,
                                                  const std::vector<langsim::Utterance>& utterances) {
  const Tensor emb = EmbedAll(params, utterances);
  Tape tape;
  encoder::BoundParams b = encoder::Bind(tape, params, encoder::Trainable::kNone);
  const Tensor& logits = encoder::ClassifierLogits(b, tape.Constant(emb)).value();

  std::vector<evalkit::ScoredTrial> trials;
  trials.reserve(utterances.size());
  for (std::size_t r = 0; r < utterances.size(); ++r) {
    std::span<const double> row = logits.row(r);
    const double top = *std::max_element(row.begin(), row.end());
    evalkit::ScoredTrial t{utterances[r].utterance_id, utterances[r].label, {}};
    double total = 0.0;
    for (double v : row) total += t.scores.emplace_back(std::exp(v - top));
    for (double& v : t.scores) v /= total;
    trials.push_back(std::move(t));
  }
  return trials;
}

}  // namespace lasr::trainer
