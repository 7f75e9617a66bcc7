// lasr/trainer/pretrain.h

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

#ifndef LASR_TRAINER_PRETRAIN_H_
#define LASR_TRAINER_PRETRAIN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lasr/encoder/encoder.h"
#include "lasr/encoder/quantizer.h"
#include "lasr/langsim/corpus.h"
#include "lasr/mining/sampler.h"
#include "lasr/objectives/lasr.h"
#include "lasr/objectives/ssl.h"
#include "lasr/objectives/supervised.h"
#include "lasr/trainer/optimizer.h"

namespace lasr::trainer {

struct TrainConfig {
  int total_steps = 3000;
  /// Leading steps that use the SSL objective alone.
  int ssl_only_steps = 2000;
  int warmup_steps = 300;
  double peak_lr = 3e-3;
  double lambda = 16.0;
  objectives::SupervisedChoice supervised_loss = objectives::SupervisedChoice::kHard;
  objectives::SslChoice ssl = objectives::SslChoice::kMlm;
  std::uint64_t seed = 0;
  /// Write a checkpoint every this many steps; 0 writes only the final one.
  int checkpoint_every = 1000;
  double clip_norm = 5.0;
  /// Batch size of SSL-only steps, drawn uniformly from the pretrain split.
  int ssl_batch_size = 32;
  /// Batch layout of steps with the supervised term. unlabeled_slots < 0
  /// means DefaultUnlabeledSlots for the corpus.
  mining::BatchSpec batch{8, 4, -1};
  objectives::SupervisedConfig supervised;
  objectives::SslConfig ssl_config;

  void Validate() const;
  /// Whether step `step` (1-based) includes the supervised term.
  bool IsSupervisedStep(int step) const;
};

/// Per-step scalars, one row of the training log.
struct StepRecord {
  int step = 0;
  double lr = 0.0;
  objectives::LossBundle losses;
};

std::string TrainingLogHeader();
std::string TrainingLogRow(const StepRecord& r);

/// Model state plus everything needed to continue training exactly.
struct TrainingState {
  encoder::EncoderParams params;
  AdamState adam;
};

/// Fresh parameters; the quantizer seed is derived from the training seed.
TrainingState InitTrainingState(const encoder::EncoderConfig& encoder_config,
                                const TrainConfig& config);

/// Runs pre-training steps on the pretrain split of a corpus. The step index
/// alone selects each step's batch, mask and mining streams, so any run can
/// be stopped and resumed from a checkpoint without changing its trajectory.
class Pretrainer {
 public:
  Pretrainer(const langsim::Corpus& corpus, TrainConfig config, TrainingState state);

  /// Executes step adam.step + 1.
  StepRecord Step();
  /// Steps until `last_step` (inclusive) or total_steps, whichever is first.
  void RunUntil(int last_step, const std::function<void(const StepRecord&)>& on_step = {});

  const TrainingState& state() const { return state_; }
  TrainingState& state() { return state_; }
  int steps_done() const { return static_cast<int>(state_.adam.step); }
  const TrainConfig& config() const { return config_; }
  const encoder::RandomQuantizer& quantizer() const { return quantizer_; }

 private:
  const std::vector<langsim::Utterance>& pretrain_;
  TrainConfig config_;
  TrainingState state_;
  encoder::RandomQuantizer quantizer_;
  std::vector<std::vector<std::size_t>> codes_;  // per pretrain utterance
  std::optional<mining::PkSampler> sampler_;
};

struct PretrainOptions {
  /// Output directory for train_log.csv and checkpoints; empty for none.
  std::filesystem::path out_dir;
  /// Continue from this state instead of a fresh initialization.
  std::optional<TrainingState> resume;
  /// Stop after this step (defaults to total_steps).
  int stop_after = -1;
};

struct PretrainResult {
  TrainingState state;
  std::vector<StepRecord> log;
};

PretrainResult Pretrain(const langsim::Corpus& corpus, const encoder::EncoderConfig& encoder_config,
                        const TrainConfig& config, const PretrainOptions& options = {});

/// Checkpoint helpers that keep the optimizer state.
void SaveTrainingState(const std::filesystem::path& path, const TrainingState& state);
TrainingState LoadTrainingState(const std::filesystem::path& path);

}  // namespace lasr::trainer

#endif  // LASR_TRAINER_PRETRAIN_H_
