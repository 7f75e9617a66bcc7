// cli/runner.h

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

#ifndef LASR_CLI_RUNNER_H_
#define LASR_CLI_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "lasr/cli/experiment_config.h"
#include "lasr/evalkit/report.h"
#include "lasr/trainer/pretrain.h"

namespace lasr::cli {

enum class SweepAxis { kLambda, kNoise, kLoss };

std::string_view SweepAxisName(SweepAxis axis);
SweepAxis ParseSweepAxis(std::string_view name);

/// One pre-train, fine-tune and evaluate run.
struct CellSpec {
  std::string axis = "single";
  /// Axis value as printed in sweep tables, e.g. "16", "missing-0.25".
  std::string value;
  std::uint64_t seed = 0;
  Recipe recipe{objectives::SslChoice::kMlm, objectives::SupervisedChoice::kHard};
  double lambda = 16.0;
  CorruptionSettings corruption;
};

struct CellResult {
  CellSpec spec;
  evalkit::MetricsReport report;
};

/// The corpus with `settings` applied to its pretrain split, drawn from a
/// stream of the training seed. A zero fraction returns the corpus as is.
langsim::Corpus CorruptForSeed(const langsim::Corpus& corpus, const CorruptionSettings& settings,
                               std::uint64_t seed, mining::CorruptionPlan* plan = nullptr);

/// Cells of one sweep axis, ordered by axis value then seed.
std::vector<CellSpec> SweepCells(const ExperimentConfig& config, SweepAxis axis);

std::string SweepCsvHeader();
std::string SweepCsvRow(const std::string& axis, const std::string& value, const std::string& seed,
                        const evalkit::MetricsReport& report);
/// One row per cell followed by one mean-over-seeds row per axis value.
void WriteSweepCsv(std::ostream& os, const std::vector<CellResult>& cells);

/// Mean accuracy over the cells whose axis value is `value`; `subset` is
/// "overall", "overlap" or "nonoverlap".
double MeanAccuracy(const std::vector<CellResult>& cells, const std::string& value,
                    const std::string& subset = "overall");

/// Runs cells under one experiment config. Cells that share a training seed
/// and SSL objective share their SSL-only first phase, and identical cells
/// run once. Both caches only skip recomputation: every cell's parameters
/// are bit-identical to an uncached run.
class ExperimentRunner {
 public:
  /// `out_dir` is used as given; pass an empty path to write nothing.
  ExperimentRunner(ExperimentConfig config, std::filesystem::path out_dir,
                   std::ostream* progress = nullptr);
  ~ExperimentRunner();

  const ExperimentConfig& config() const { return config_; }
  const langsim::Corpus& corpus();

  /// The corpus with the cell's label corruption applied to pretrain.
  langsim::Corpus CellCorpus(const CellSpec& cell);
  trainer::TrainConfig CellTrainConfig(const CellSpec& cell) const;

  /// Pre-trained parameters for a cell, with its full training log.
  trainer::PretrainResult Pretrain(const CellSpec& cell);
  CellResult RunCell(const CellSpec& cell);
  /// Runs every cell of an axis and writes sweep_<axis>.csv.
  std::vector<CellResult> Sweep(SweepAxis axis);

  int cells_trained() const { return cells_trained_; }

 private:
  struct Phase1 {
    trainer::TrainingState state;
    std::vector<trainer::StepRecord> log;
  };

  std::string CellKey(const CellSpec& cell) const;
  std::filesystem::path CellDir(const CellSpec& cell) const;
  const Phase1& FirstPhase(objectives::SslChoice ssl, std::uint64_t seed);
  void Progress(const std::string& line);

  ExperimentConfig config_;
  std::filesystem::path out_dir_;
  std::ostream* progress_;
  std::unique_ptr<langsim::Corpus> corpus_;
  std::map<std::string, Phase1> phase1_;
  std::map<std::string, CellResult> done_;
  int cells_trained_ = 0;
};

}  // namespace lasr::cli

#endif  // LASR_CLI_RUNNER_H_
