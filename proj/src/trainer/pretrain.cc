// trainer/pretrain.cc

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

#include "lasr/trainer/pretrain.h"

#include <cstdio>
#include <fstream>

#include "lasr/base/error.h"
#include "lasr/encoder/checkpoint.h"

namespace lasr::trainer {

using diffkit::Tape;
using diffkit::Var;
using objectives::SslChoice;
using objectives::SupervisedChoice;

void TrainConfig::Validate() const {
  if (total_steps < 1) Fail<ConfigError>("train.total_steps must be >= 1, got ", total_steps);
  if (warmup_steps < 1 || warmup_steps >= total_steps)
    Fail<ConfigError>("train.warmup_steps must be in [1, total_steps), got ", warmup_steps);
  if (ssl_only_steps < 0 || ssl_only_steps > total_steps)
    Fail<ConfigError>("train.ssl_only_steps must be in [0, total_steps], got ", ssl_only_steps);
  if (!(peak_lr > 0.0)) Fail<ConfigError>("train.peak_lr must be > 0, got ", peak_lr);
  if (!(lambda >= 0.0)) Fail<ConfigError>("train.lambda must be >= 0, got ", lambda);
  if (!(clip_norm > 0.0)) Fail<ConfigError>("train.clip_norm must be > 0, got ", clip_norm);
  if (ssl_batch_size < 1) Fail<ConfigError>("train.ssl_batch_size must be >= 1");
  if (checkpoint_every < 0) Fail<ConfigError>("train.checkpoint_every must be >= 0");
  if (ssl == SslChoice::kNone && supervised_loss == SupervisedChoice::kNone)
    Fail<ConfigError>("train: ssl and supervised_loss cannot both be 'none'");
  if (ssl == SslChoice::kNone && !(lambda > 0.0))
    Fail<ConfigError>("train: without an SSL objective lambda must be > 0");
  if (supervised.gamma < 0.0) Fail<ConfigError>("train.gamma must be >= 0");
  if (!(ssl_config.mask_rate > 0.0 && ssl_config.mask_rate < 1.0))
    Fail<ConfigError>("train.mask_rate must be in (0, 1)");
  if (ssl_config.span_length < 1) Fail<ConfigError>("train.span_length must be >= 1");
  if (ssl_config.num_distractors < 1) Fail<ConfigError>("train.num_distractors must be >= 1");
  if (!(ssl_config.temperature > 0.0)) Fail<ConfigError>("train.temperature must be > 0");
  if (batch.languages_per_batch < 2 || batch.per_language < 2)
    Fail<ConfigError>("train.batch needs >= 2 languages with >= 2 utterances each");
}

bool TrainConfig::IsSupervisedStep(int step) const {
  if (supervised_loss == SupervisedChoice::kNone || !(lambda > 0.0)) return false;
  return ssl == SslChoice::kNone || step > ssl_only_steps;
}

std::string TrainingLogHeader() {
  return "step,lr,ssl_loss,supervised_loss,total,anchors_used,skipped_anchors";
}

std::string TrainingLogRow(const StepRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g,%zu,%zu", r.step, r.lr, r.losses.ssl_loss,
                r.losses.supervised_loss, r.losses.total, r.losses.anchors_used,
                r.losses.anchors_skipped);
  return buf;
}

TrainingState InitTrainingState(const encoder::EncoderConfig& encoder_config,
                                const TrainConfig& config) {
  encoder::EncoderConfig cfg = encoder_config;
  cfg.quantizer_seed = DeriveSeed(config.seed, {StreamTag("quantizer")});
  Rng rng = Rng::Derive(config.seed, {StreamTag("init")});
  TrainingState s{encoder::InitEncoderParams(cfg, rng), {}};
  s.adam = MakeAdamState(s.params);
  return s;
}

Pretrainer::Pretrainer(const langsim::Corpus& corpus, TrainConfig config, TrainingState state)
    : pretrain_(corpus.split(langsim::Split::kPretrain)),
      config_(std::move(config)),
      state_(std::move(state)) {
  config_.Validate();
  const encoder::EncoderConfig& ec = state_.params.config();
  if (ec.feature_dim != corpus.feature_dim())
    Fail<ShapeError>("pretrain: encoder expects F=", ec.feature_dim, " but the corpus has F=",
                     corpus.feature_dim());
  if (pretrain_.empty()) Fail<ConfigError>("pretrain: the pretrain split is empty");
  if (config_.ssl_batch_size > static_cast<int>(pretrain_.size()))
    Fail<ConfigError>("pretrain: ssl_batch_size ", config_.ssl_batch_size, " exceeds the ",
                      pretrain_.size(), " pretrain utterances");
  quantizer_ = encoder::MakeRandomQuantizer(ec.feature_dim, ec.code_dim, ec.codebook_size,
                                            ec.quantizer_seed);
  if (config_.ssl == SslChoice::kMlm)
    for (const langsim::Utterance& u : pretrain_)
      codes_.push_back(encoder::QuantizeTargets(quantizer_, u.frames));

  bool any_supervised = false;
  for (int s = steps_done() + 1; s <= config_.total_steps && !any_supervised; ++s)
    any_supervised = config_.IsSupervisedStep(s);
  if (any_supervised) {
    mining::BatchSpec spec = config_.batch;
    if (spec.unlabeled_slots < 0) {
      const double unlabeled = static_cast<double>(pretrain_.size() - langsim::CountLabeled(pretrain_)) /
                               static_cast<double>(pretrain_.size());
      spec.unlabeled_slots =
          mining::DefaultUnlabeledSlots(spec.languages_per_batch, spec.per_language, unlabeled);
    }
    sampler_.emplace(pretrain_, spec);
  }
}

StepRecord Pretrainer::Step() {
  const int step = steps_done() + 1;
  if (step > config_.total_steps)
    Fail<ConfigError>("pretrain: step ", step, " is past total_steps ", config_.total_steps);
  const std::uint64_t s = static_cast<std::uint64_t>(step);
  const bool supervised = config_.IsSupervisedStep(step);
  const bool use_ssl = config_.ssl != SslChoice::kNone;

  Rng batch_rng = Rng::Derive(config_.seed, {StreamTag("batch"), s});
  std::vector<std::size_t> idx =
      supervised ? sampler_->Sample(batch_rng)
                 : mining::SampleUniformBatch(pretrain_.size(),
                                              static_cast<std::size_t>(config_.ssl_batch_size),
                                              batch_rng);
  std::vector<const Tensor*> frames;
  for (std::size_t i : idx) frames.push_back(&pretrain_[i].frames);
  encoder::FrameBatch fb = encoder::MakeFrameBatch(frames);

  Tape tape;
  encoder::BoundParams b = encoder::Bind(tape, state_.params);
  Var x = tape.Constant(std::move(fb.frames));
  StepRecord rec;
  rec.step = step;
  objectives::LossBundle& lb = rec.losses;
  lb.lambda = supervised ? config_.lambda : 0.0;

  Var ssl_loss, sup_loss, clean;
  if (use_ssl) {
    const objectives::SslConfig& sc = config_.ssl_config;
    Rng mask_rng = Rng::Derive(config_.seed, {StreamTag("mask"), s});
    std::vector<std::size_t> masked, groups = {0}, targets;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const std::size_t t_len = pretrain_[idx[i]].num_frames();
      const std::size_t span = std::min<std::size_t>(static_cast<std::size_t>(sc.span_length), t_len);
      encoder::MaskPlan plan = encoder::PlanMask(t_len, sc.mask_rate, span, mask_rng);
      for (std::size_t t : plan.masked_positions) {
        masked.push_back(fb.offsets[i] + t);
        if (config_.ssl == SslChoice::kMlm) targets.push_back(codes_[idx[i]][t]);
      }
      groups.push_back(masked.size());
    }
    Var zm = encoder::EncodeFrames(b, x, fb.offsets, masked);
    Var zm_rows = diffkit::GatherRows(zm, masked);
    if (config_.ssl == SslChoice::kMlm) {
      ssl_loss = objectives::MlmLoss(encoder::MlmLogits(b, zm_rows), targets);
      lb.positions_used = masked.size();
    } else {
      clean = encoder::EncodeFrames(b, x, fb.offsets);
      Rng draw = Rng::Derive(config_.seed, {StreamTag("distractors"), s});
      objectives::ContrastiveResult cr = objectives::ContrastiveLoss(
          encoder::ContrastiveContext(b, zm_rows), diffkit::GatherRows(clean, masked), groups,
          static_cast<std::size_t>(sc.num_distractors), sc.temperature, draw);
      ssl_loss = cr.loss;
      lb.positions_used = cr.positions_used;
      lb.positions_skipped = cr.positions_skipped;
    }
    lb.ssl_loss = ssl_loss.value().item();
  }
  if (supervised) {
    if (!clean.valid()) clean = encoder::EncodeFrames(b, x, fb.offsets);
    Var h = encoder::PoolFrames(clean, fb.offsets);
    std::vector<int> labels;
    for (std::size_t i : idx) labels.push_back(pretrain_[i].label);
    Rng mine = Rng::Derive(config_.seed, {StreamTag("mining"), s});
    objectives::SupervisedResult sr;
    try {
      sr = objectives::SupervisedLoss(config_.supervised_loss, h, labels, config_.supervised, mine);
    } catch (const SamplingError& e) {
      Fail<SamplingError>("pretrain step ", step, ": ", e.what());
    }
    sup_loss = sr.loss;
    lb.supervised_loss = sup_loss.value().item();
    lb.anchors_used = sr.anchors.size();
    lb.anchors_skipped = sr.skipped;
  }
  Var total;
  if (use_ssl && supervised) total = objectives::LasrTotal(ssl_loss, sup_loss, config_.lambda);
  else if (use_ssl) total = ssl_loss;
  else total = sup_loss;
  lb.total = total.value().item();

  tape.Backward(total);
  std::vector<Tensor> grads = encoder::CollectGradients(tape, b);
  ClipGlobalNorm(grads, config_.clip_norm);
  rec.lr = LrSchedule(s, static_cast<std::uint64_t>(config_.warmup_steps), config_.peak_lr);
  try {
    AdamStep(state_.params, grads, state_.adam, rec.lr);
  } catch (const NumericError& e) {
    Fail<NumericError>("pretrain: ", e.what());
  }
  return rec;
}

void Pretrainer::RunUntil(int last_step, const std::function<void(const StepRecord&)>& on_step) {
  const int stop = std::min(last_step, config_.total_steps);
  while (steps_done() < stop) {
    StepRecord r = Step();
    if (on_step) on_step(r);
  }
}

void SaveTrainingState(const std::filesystem::path& path, const TrainingState& state) {
  encoder::OptimizerBlocks blocks = state.adam.ToBlocks();
  encoder::SaveCheckpoint(path, state.params, &blocks);
}

TrainingState LoadTrainingState(const std::filesystem::path& path) {
  encoder::Checkpoint c = encoder::LoadCheckpoint(path);
  TrainingState s{std::move(c.params), {}};
  s.adam = c.optimizer ? AdamState::FromBlocks(*c.optimizer) : MakeAdamState(s.params);
  return s;
}

PretrainResult Pretrain(const langsim::Corpus& corpus, const encoder::EncoderConfig& encoder_config,
                        const TrainConfig& config, const PretrainOptions& options) {
  TrainingState init = options.resume ? *options.resume : InitTrainingState(encoder_config, config);
  Pretrainer trainer(corpus, config, std::move(init));
  const int stop = options.stop_after < 0 ? config.total_steps : options.stop_after;

  PretrainResult result;
  std::ofstream log;
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    const auto path = options.out_dir / "train_log.csv";
    const bool fresh = trainer.steps_done() == 0 || !std::filesystem::exists(path);
    log.open(path, fresh ? std::ios::trunc : std::ios::app);
    if (!log) Fail<IoError>("cannot write '", path.string(), "'");
    if (fresh) log << TrainingLogHeader() << '\n';
  }
  trainer.RunUntil(stop, [&](const StepRecord& r) {
    result.log.push_back(r);
    if (!log.is_open()) return;
    log << TrainingLogRow(r) << '\n';
    if (config.checkpoint_every > 0 && r.step % config.checkpoint_every == 0)
      SaveTrainingState(options.out_dir / ("ckpt_step" + std::to_string(r.step) + ".bin"),
                        trainer.state());
  });
  if (log.is_open()) {
    log.flush();
    SaveTrainingState(options.out_dir / "final.ckpt", trainer.state());
  }
  result.state = trainer.state();
  return result;
}

}  // namespace lasr::trainer
