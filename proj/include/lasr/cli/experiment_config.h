// cli/experiment_config.h

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

#ifndef LASR_CLI_EXPERIMENT_CONFIG_H_
#define LASR_CLI_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "lasr/encoder/encoder.h"
#include "lasr/langsim/corpus.h"
#include "lasr/mining/corruption.h"
#include "lasr/trainer/finetune.h"
#include "lasr/trainer/pretrain.h"

namespace lasr::cli {

/// Label corruption applied to the pretrain split before pre-training.
struct CorruptionSettings {
  mining::CorruptionMode mode = mining::CorruptionMode::kMissing;
  /// Fraction of labeled pretrain utterances affected; 0 disables corruption.
  double fraction = 0.0;
};

struct SweepAxes {
  std::vector<double> lambdas = {0, 2, 4, 8, 16, 32};
  std::vector<mining::CorruptionMode> noise_modes = {mining::CorruptionMode::kMissing,
                                                     mining::CorruptionMode::kNoisy};
  std::vector<double> noise_fractions = {0, 0.25, 0.5, 0.75};
  /// Pre-training recipes: ssl_only, hard_only or ssl+<supervised loss>.
  std::vector<std::string> losses = {"ssl_only", "hard_only", "ssl+semi_hard", "ssl+ge2e",
                                     "ssl+hard"};
};

/// Everything a run depends on. Training and fine-tuning seeds come from
/// `seeds`; the quantizer seed is derived from the training seed.
struct ExperimentConfig {
  langsim::CorpusConfig corpus;
  std::uint64_t corpus_seed = 1;
  encoder::EncoderConfig encoder;
  trainer::TrainConfig train;
  trainer::FinetuneConfig finetune;
  CorruptionSettings corruption;
  SweepAxes sweep;
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  /// Relative paths resolve against $LASR_OUTPUT_ROOT when it is set.
  std::string output_dir = "lasr_runs";

  void Validate() const;
};

/// Environment variable that relocates relative output directories.
inline constexpr const char* kOutputRootEnv = "LASR_OUTPUT_ROOT";

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);
/// Strict: every field is required and unknown keys are rejected; errors
/// name the dotted path of the field.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j);

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);
void SaveExperimentConfig(const std::filesystem::path& path, const ExperimentConfig& config);

/// Resolves a possibly relative output path against $LASR_OUTPUT_ROOT.
std::filesystem::path ResolveOutputPath(const std::filesystem::path& path);

/// A pre-training recipe named as on the loss sweep axis.
struct Recipe {
  objectives::SslChoice ssl;
  objectives::SupervisedChoice supervised;
};
Recipe ParseRecipe(std::string_view name, objectives::SslChoice default_ssl);
std::string RecipeName(const Recipe& recipe);

}  // namespace lasr::cli

#endif  // LASR_CLI_EXPERIMENT_CONFIG_H_
