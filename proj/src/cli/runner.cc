// cli/runner.cc

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

#include "lasr/cli/runner.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "lasr/base/error.h"
#include "lasr/base/json_util.h"
#include "lasr/encoder/checkpoint.h"
#include "lasr/trainer/finetune.h"

namespace lasr::cli {

namespace fs = std::filesystem;
using objectives::SslChoice;
using objectives::SupervisedChoice;

namespace {

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string NoiseValue(mining::CorruptionMode mode, double p) {
  return std::string(mining::CorruptionModeName(mode)) + "-" + FormatNumber(p);
}

const evalkit::SubsetMetrics& Subset(const evalkit::MetricsReport& r, const std::string& name) {
  if (name == "overall") return r.overall;
  if (name == "overlap") return r.overlap;
  if (name == "nonoverlap") return r.nonoverlap;
  Fail<DomainError>("unknown subset '", name, "'");
}

void WriteLog(const fs::path& path, const std::vector<trainer::StepRecord>& log) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) Fail<IoError>("cannot write '", path.string(), "'");
  os << trainer::TrainingLogHeader() << '\n';
  for (const trainer::StepRecord& r : log) os << trainer::TrainingLogRow(r) << '\n';
}

}  // namespace

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kLambda: return "lambda";
    case SweepAxis::kNoise: return "noise";
    case SweepAxis::kLoss: return "loss";
  }
  return "?";
}

SweepAxis ParseSweepAxis(std::string_view name) {
  if (name == "lambda") return SweepAxis::kLambda;
  if (name == "noise") return SweepAxis::kNoise;
  if (name == "loss") return SweepAxis::kLoss;
  Fail<ConfigError>("unknown sweep axis '", name, "' (expected lambda, noise or loss)");
}

langsim::Corpus CorruptForSeed(const langsim::Corpus& corpus, const CorruptionSettings& settings,
                               std::uint64_t seed, mining::CorruptionPlan* plan) {
  if (settings.fraction == 0.0) return corpus;
  Rng rng = Rng::Derive(seed, {StreamTag("corruption"), StreamTag(mining::CorruptionModeName(settings.mode)),
                               static_cast<std::uint64_t>(std::llround(settings.fraction * 1e6))});
  auto [corrupted, p] = mining::CorruptLabels(corpus, settings.mode, settings.fraction, rng);
  if (plan != nullptr) *plan = std::move(p);
  return std::move(corrupted);
}

std::vector<CellSpec> SweepCells(const ExperimentConfig& config, SweepAxis axis) {
  CellSpec base;
  base.axis = std::string(SweepAxisName(axis));
  base.recipe = {config.train.ssl, config.train.supervised_loss};
  base.lambda = config.train.lambda;
  base.corruption = config.corruption;

  std::vector<CellSpec> values;
  switch (axis) {
    case SweepAxis::kLambda:
      for (double l : config.sweep.lambdas) {
        CellSpec c = base;
        c.lambda = l;
        c.value = FormatNumber(l);
        values.push_back(c);
      }
      break;
    case SweepAxis::kNoise:
      for (mining::CorruptionMode m : config.sweep.noise_modes)
        for (double p : config.sweep.noise_fractions) {
          CellSpec c = base;
          c.corruption = {m, p};
          c.value = NoiseValue(m, p);
          values.push_back(c);
        }
      break;
    case SweepAxis::kLoss:
      for (const std::string& name : config.sweep.losses) {
        CellSpec c = base;
        c.recipe = ParseRecipe(name, config.train.ssl);
        c.value = name;
        values.push_back(c);
      }
      break;
  }
  std::vector<CellSpec> cells;
  for (const CellSpec& v : values)
    for (std::uint64_t seed : config.seeds) {
      CellSpec c = v;
      c.seed = seed;
      cells.push_back(c);
    }
  return cells;
}

std::string SweepCsvHeader() {
  std::string h = "axis,value,seed";
  for (const char* s : {"overall", "overlap", "nonoverlap"})
    for (const char* m : {"accuracy", "macro_f1", "eer"}) h += std::string(",") + s + "_" + m;
  return h;
}

std::string SweepCsvRow(const std::string& axis, const std::string& value, const std::string& seed,
                        const evalkit::MetricsReport& report) {
  std::string row = axis + "," + value + "," + seed;
  for (const evalkit::SubsetMetrics* s : {&report.overall, &report.overlap, &report.nonoverlap})
    for (double v : {s->accuracy, s->macro_f1, s->eer}) {
      char buf[32];
      if (s->empty) std::snprintf(buf, sizeof(buf), ",empty");
      else std::snprintf(buf, sizeof(buf), ",%.6f", v);
      row += buf;
    }
  return row;
}

void WriteSweepCsv(std::ostream& os, const std::vector<CellResult>& cells) {
  os << SweepCsvHeader() << '\n';
  std::vector<std::string> order;
  for (const CellResult& c : cells) {
    os << SweepCsvRow(c.spec.axis, c.spec.value, std::to_string(c.spec.seed), c.report) << '\n';
    if (std::find(order.begin(), order.end(), c.spec.value) == order.end())
      order.push_back(c.spec.value);
  }
  for (const std::string& value : order) {
    evalkit::MetricsReport mean;
    std::string axis;
    int n = 0;
    auto add = [](evalkit::SubsetMetrics& to, const evalkit::SubsetMetrics& from) {
      to.empty = from.empty;
      to.accuracy += from.accuracy;
      to.macro_f1 += from.macro_f1;
      to.eer += from.eer;
    };
    for (const CellResult& c : cells) {
      if (c.spec.value != value) continue;
      axis = c.spec.axis;
      ++n;
      add(mean.overall, c.report.overall);
      add(mean.overlap, c.report.overlap);
      add(mean.nonoverlap, c.report.nonoverlap);
    }
    for (evalkit::SubsetMetrics* s : {&mean.overall, &mean.overlap, &mean.nonoverlap}) {
      s->accuracy /= n;
      s->macro_f1 /= n;
      s->eer /= n;
    }
    os << SweepCsvRow(axis, value, "mean", mean) << '\n';
  }
}

double MeanAccuracy(const std::vector<CellResult>& cells, const std::string& value,
                    const std::string& subset) {
  double total = 0.0;
  int n = 0;
  for (const CellResult& c : cells)
    if (c.spec.value == value) {
      total += Subset(c.report, subset).accuracy;
      ++n;
    }
  if (n == 0) Fail<DomainError>("no cells with value '", value, "'");
  return total / n;
}

ExperimentRunner::ExperimentRunner(ExperimentConfig config, fs::path out_dir, std::ostream* progress)
    : config_(std::move(config)), out_dir_(std::move(out_dir)), progress_(progress) {
  config_.Validate();
}

ExperimentRunner::~ExperimentRunner() = default;

const langsim::Corpus& ExperimentRunner::corpus() {
  if (!corpus_)
    corpus_ = std::make_unique<langsim::Corpus>(langsim::BuildCorpus(config_.corpus, config_.corpus_seed));
  return *corpus_;
}

void ExperimentRunner::Progress(const std::string& line) {
  if (progress_ != nullptr) *progress_ << line << std::endl;
}

langsim::Corpus ExperimentRunner::CellCorpus(const CellSpec& cell) {
  return CorruptForSeed(corpus(), cell.corruption, cell.seed);
}

trainer::TrainConfig ExperimentRunner::CellTrainConfig(const CellSpec& cell) const {
  trainer::TrainConfig t = config_.train;
  t.seed = cell.seed;
  t.ssl = cell.recipe.ssl;
  t.supervised_loss = cell.recipe.supervised;
  t.lambda = cell.lambda;
  return t;
}

std::string ExperimentRunner::CellKey(const CellSpec& cell) const {
  // Normalize away settings that cannot influence training.
  const trainer::TrainConfig t = CellTrainConfig(cell);
  bool supervised = false;
  for (int s = 1; s <= t.total_steps && !supervised; ++s) supervised = t.IsSupervisedStep(s);
  std::string key = std::string(objectives::SslChoiceName(t.ssl)) + "|seed=" + std::to_string(cell.seed);
  if (supervised) {
    key += "|" + std::string(objectives::SupervisedChoiceName(t.supervised_loss)) +
           "|lambda=" + FormatNumber(t.lambda);
    if (cell.corruption.fraction > 0.0) key += "|" + NoiseValue(cell.corruption.mode, cell.corruption.fraction);
  }
  return key;
}

fs::path ExperimentRunner::CellDir(const CellSpec& cell) const {
  if (out_dir_.empty()) return {};
  return out_dir_ / "cells" / cell.axis / cell.value / ("seed" + std::to_string(cell.seed));
}

const ExperimentRunner::Phase1& ExperimentRunner::FirstPhase(SslChoice ssl, std::uint64_t seed) {
  const std::string key = std::string(objectives::SslChoiceName(ssl)) + "|" + std::to_string(seed);
  auto it = phase1_.find(key);
  if (it != phase1_.end()) return it->second;
  trainer::TrainConfig t = config_.train;
  t.seed = seed;
  t.ssl = ssl;
  t.supervised_loss = SupervisedChoice::kNone;
  const auto start = std::chrono::steady_clock::now();
  trainer::Pretrainer trainer(corpus(), t, trainer::InitTrainingState(config_.encoder, t));
  Phase1 p;
  trainer.RunUntil(t.ssl_only_steps, [&](const trainer::StepRecord& r) { p.log.push_back(r); });
  p.state = trainer.state();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "  shared %s phase, seed %llu: %d steps in %.1fs",
                std::string(objectives::SslChoiceName(ssl)).c_str(),
                static_cast<unsigned long long>(seed), t.ssl_only_steps,
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  Progress(buf);
  return phase1_.emplace(key, std::move(p)).first->second;
}

trainer::PretrainResult ExperimentRunner::Pretrain(const CellSpec& cell) {
  const trainer::TrainConfig t = CellTrainConfig(cell);
  const langsim::Corpus cell_corpus = CellCorpus(cell);
  trainer::PretrainResult result;
  trainer::TrainingState state;
  // The first phase never reads labels, so it is shared across corruption
  // settings as well as supervised losses and weights.
  if (t.ssl != SslChoice::kNone && t.ssl_only_steps > 0) {
    const Phase1& p = FirstPhase(t.ssl, cell.seed);
    state = p.state;
    result.log = p.log;
  } else {
    state = trainer::InitTrainingState(config_.encoder, t);
  }
  trainer::Pretrainer trainer(cell_corpus, t, std::move(state));
  trainer.RunUntil(t.total_steps, [&](const trainer::StepRecord& r) { result.log.push_back(r); });
  result.state = trainer.state();
  return result;
}

CellResult ExperimentRunner::RunCell(const CellSpec& cell) {
  const std::string key = CellKey(cell);
  auto it = done_.find(key);
  if (it == done_.end()) {
    const auto start = std::chrono::steady_clock::now();
    trainer::PretrainResult pre = Pretrain(cell);
    trainer::FinetuneConfig fc = config_.finetune;
    fc.seed = cell.seed;
    trainer::FinetuneResult ft = trainer::Finetune(pre.state.params, corpus(), fc);
    const std::vector<evalkit::ScoredTrial> trials =
        trainer::ScoreUtterances(ft.params, corpus().split(langsim::Split::kTest));
    CellResult r{cell, evalkit::SplitReport(trials, corpus())};
    ++cells_trained_;

    const fs::path dir = CellDir(cell);
    if (!dir.empty()) {
      fs::create_directories(dir);
      WriteLog(dir / "train_log.csv", pre.log);
      trainer::SaveTrainingState(dir / "pretrained.ckpt", pre.state);
      encoder::SaveCheckpoint(dir / "finetuned.ckpt", ft.params);
      std::ofstream fl(dir / "finetune_log.csv", std::ios::trunc);
      fl << trainer::FinetuneLogHeader() << '\n';
      for (const trainer::FinetuneRecord& f : ft.log) fl << trainer::FinetuneLogRow(f) << '\n';
      evalkit::WriteReportFiles(dir, trials, r.report);
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "  %s=%s seed %llu: accuracy %.4f (overlap %.4f, non-overlap %.4f) in %.1fs",
                  cell.axis.c_str(), cell.value.c_str(), static_cast<unsigned long long>(cell.seed),
                  r.report.overall.accuracy, r.report.overlap.accuracy, r.report.nonoverlap.accuracy,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    Progress(buf);
    it = done_.emplace(key, std::move(r)).first;
  }
  CellResult out = it->second;
  out.spec = cell;
  return out;
}

std::vector<CellResult> ExperimentRunner::Sweep(SweepAxis axis) {
  Progress("sweep " + std::string(SweepAxisName(axis)));
  std::vector<CellResult> results;
  for (const CellSpec& cell : SweepCells(config_, axis)) results.push_back(RunCell(cell));
  if (!out_dir_.empty()) {
    fs::create_directories(out_dir_);
    SaveExperimentConfig(out_dir_ / "config.json", config_);
    const fs::path path = out_dir_ / ("sweep_" + std::string(SweepAxisName(axis)) + ".csv");
    std::ofstream os(path, std::ios::trunc);
    if (!os) Fail<IoError>("cannot write '", path.string(), "'");
    WriteSweepCsv(os, results);
  }
  return results;
}

}  // namespace lasr::cli
