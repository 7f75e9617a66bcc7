// tools/lasr.cc

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

// Command-line front end: corpus generation, pre-training, fine-tuning,
// evaluation, sweeps and reports, all driven by one JSON experiment config.
// Run `lasr default-config` for a complete config to start from.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lasr/base/allocator.h"
#include "lasr/base/error.h"
#include "lasr/base/json_util.h"
#include "lasr/cli/experiment_config.h"
#include "lasr/cli/runner.h"
#include "lasr/encoder/checkpoint.h"
#include "lasr/evalkit/report.h"
#include "lasr/langsim/corpus_io.h"
#include "lasr/mining/corruption.h"
#include "lasr/trainer/finetune.h"
#include "lasr/trainer/pretrain.h"

namespace fs = std::filesystem;
using namespace lasr;
using cli::ExperimentConfig;

namespace {

struct Options {
  std::string config;
  std::string corpus;
  std::string checkpoint;
  std::string out;
  std::string axis;
  std::string split = "test";
  std::string trials;
  std::optional<std::uint64_t> seed;
};

const char* KindOf(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const SamplingError*>(&e)) return "sampling";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  return "error";
}

ExperimentConfig LoadConfig(const Options& o) { return cli::LoadExperimentConfig(o.config); }

std::uint64_t SeedOf(const Options& o, const ExperimentConfig& c) {
  return o.seed ? *o.seed : c.seeds.front();
}

/// --out when given, else `sub` under the config's output directory.
fs::path OutDir(const Options& o, const ExperimentConfig& c, const fs::path& sub) {
  if (!o.out.empty()) return o.out;
  return cli::ResolveOutputPath(c.output_dir) / sub;
}

/// The corpus from --corpus, which must match the config, or built afresh.
langsim::Corpus LoadCorpus(const Options& o, const ExperimentConfig& c) {
  if (o.corpus.empty()) return langsim::BuildCorpus(c.corpus, c.corpus_seed);
  langsim::Corpus corpus = langsim::ReadCorpus(o.corpus);
  if (langsim::CorpusConfigToJson(corpus.config) != langsim::CorpusConfigToJson(c.corpus) ||
      corpus.master_seed != c.corpus_seed)
    Fail<ConfigError>("corpus '", o.corpus,
                      "' was generated from a different corpus config or corpus_seed than '",
                      o.config, "'");
  return corpus;
}

void Prepare(const fs::path& dir, const ExperimentConfig& c) {
  fs::create_directories(dir);
  cli::SaveExperimentConfig(dir / "config.json", c);
}

int DefaultConfig(const Options& o) {
  const nlohmann::json j = cli::ExperimentConfigToJson(ExperimentConfig{});
  if (o.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    WriteJsonFile(o.out, j);
    std::cerr << "wrote " << o.out << '\n';
  }
  return 0;
}

int GenData(const Options& o) {
  const ExperimentConfig c = LoadConfig(o);
  const fs::path dir = OutDir(o, c, "corpus");
  langsim::WriteCorpus(langsim::BuildCorpus(c.corpus, c.corpus_seed), dir);
  cli::SaveExperimentConfig(dir / "config.json", c);
  std::cerr << "wrote corpus to " << dir.string() << '\n';
  return 0;
}

int Pretrain(const Options& o) {
  const ExperimentConfig c = LoadConfig(o);
  const std::uint64_t seed = SeedOf(o, c);
  const fs::path dir = OutDir(o, c, fs::path("pretrain") / ("seed" + std::to_string(seed)));
  Prepare(dir, c);
  mining::CorruptionPlan plan;
  const langsim::Corpus corpus = cli::CorruptForSeed(LoadCorpus(o, c), c.corruption, seed, &plan);
  if (c.corruption.fraction > 0.0) WriteJsonFile(dir / "corruption_plan.json", mining::CorruptionPlanToJson(plan));
  trainer::TrainConfig t = c.train;
  t.seed = seed;
  trainer::PretrainOptions options;
  options.out_dir = dir;
  if (!o.checkpoint.empty()) options.resume = trainer::LoadTrainingState(o.checkpoint);
  const trainer::PretrainResult r = trainer::Pretrain(corpus, c.encoder, t, options);
  if (!r.log.empty())
    std::cerr << "step " << r.log.back().step << " total loss " << r.log.back().losses.total << '\n';
  std::cerr << "wrote " << (dir / "final.ckpt").string() << '\n';
  return 0;
}

int Finetune(const Options& o) {
  const ExperimentConfig c = LoadConfig(o);
  const std::uint64_t seed = SeedOf(o, c);
  const fs::path dir = OutDir(o, c, fs::path("finetune") / ("seed" + std::to_string(seed)));
  const encoder::Checkpoint ckpt = encoder::LoadCheckpoint(o.checkpoint);
  const langsim::Corpus corpus = LoadCorpus(o, c);
  trainer::FinetuneConfig f = c.finetune;
  f.seed = seed;
  const trainer::FinetuneResult r = trainer::Finetune(ckpt.params, corpus, f);
  Prepare(dir, c);
  encoder::SaveCheckpoint(dir / "finetuned.ckpt", r.params);
  std::ofstream log(dir / "finetune_log.csv", std::ios::trunc);
  log << trainer::FinetuneLogHeader() << '\n';
  for (const trainer::FinetuneRecord& rec : r.log) log << trainer::FinetuneLogRow(rec) << '\n';
  std::cerr << "wrote " << (dir / "finetuned.ckpt").string() << '\n';
  return 0;
}

int Evaluate(const Options& o) {
  const ExperimentConfig c = LoadConfig(o);
  const fs::path dir = OutDir(o, c, "evaluate");
  const encoder::Checkpoint ckpt = encoder::LoadCheckpoint(o.checkpoint);
  const langsim::Corpus corpus = LoadCorpus(o, c);
  const langsim::Split split = langsim::ParseSplit(o.split);
  if (ckpt.params.config().feature_dim != corpus.feature_dim())
    Fail<ShapeError>("checkpoint expects F=", ckpt.params.config().feature_dim,
                     " but the corpus has F=", corpus.feature_dim());
  const auto trials = trainer::ScoreUtterances(ckpt.params, corpus.split(split));
  const evalkit::MetricsReport report = evalkit::SplitReport(trials, corpus);
  Prepare(dir, c);
  evalkit::WriteReportFiles(dir, trials, report);
  std::cout << evalkit::FormatMetricsTable(report);
  return 0;
}

int Sweep(const Options& o) {
  const ExperimentConfig c = LoadConfig(o);
  const cli::SweepAxis axis = cli::ParseSweepAxis(o.axis);
  const fs::path dir = OutDir(o, c, "sweep");
  cli::ExperimentRunner runner(c, dir, &std::cerr);
  const auto cells = runner.Sweep(axis);
  cli::WriteSweepCsv(std::cout, cells);
  return 0;
}

int Pipeline(const Options& o) {
  const ExperimentConfig c = LoadConfig(o);
  const fs::path dir = OutDir(o, c, "pipeline");
  Prepare(dir, c);
  cli::ExperimentRunner runner(c, dir, &std::cerr);
  cli::CellSpec cell;
  cell.value = cli::RecipeName({c.train.ssl, c.train.supervised_loss});
  cell.seed = SeedOf(o, c);
  cell.recipe = {c.train.ssl, c.train.supervised_loss};
  cell.lambda = c.train.lambda;
  cell.corruption = c.corruption;
  const cli::CellResult r = runner.RunCell(cell);
  std::cout << evalkit::FormatMetricsTable(r.report);
  return 0;
}

int Report(const Options& o) {
  const ExperimentConfig c = LoadConfig(o);
  std::ifstream is(o.trials);
  if (!is) Fail<IoError>("cannot read '", o.trials, "'");
  const auto trials = evalkit::ReadTrialsCsv(is);
  std::vector<int> overlap, nonoverlap;
  for (int l = 0; l < c.corpus.num_languages; ++l)
    (l < c.corpus.num_pretrain_languages ? overlap : nonoverlap).push_back(l);
  const evalkit::MetricsReport report = evalkit::SplitReport(trials, overlap, nonoverlap);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    std::ofstream csv(fs::path(o.out) / "metrics.csv", std::ios::trunc);
    evalkit::WriteMetricsCsv(csv, report);
    std::ofstream txt(fs::path(o.out) / "metrics.txt", std::ios::trunc);
    txt << evalkit::FormatMetricsTable(report);
  }
  std::cout << evalkit::FormatMetricsTable(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  KeepFreedMemoryInHeap();
  CLI::App app{"LASR: label-aware speech representation pre-training on synthetic languages"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&)> action;

  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };
  auto config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  };
  auto corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Corpus directory from gen-data (default: regenerate)")
        ->check(CLI::ExistingDirectory);
  };
  auto seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Training seed (default: first entry of seeds)");
  };
  auto out = [&](CLI::App* sub, const char* what) { sub->add_option("-o,--out", o.out, what); };

  CLI::App* s = add("default-config", "Print or write the default experiment config", DefaultConfig);
  out(s, "Write the config to this file instead of stdout");

  s = add("gen-data", "Generate the synthetic corpus", GenData);
  config(s);
  out(s, "Corpus directory (default: <output_dir>/corpus)");

  s = add("pretrain", "Pre-train an encoder", Pretrain);
  config(s);
  corpus(s);
  seed(s);
  s->add_option("--resume", o.checkpoint, "Continue from this training checkpoint")->check(CLI::ExistingFile);
  out(s, "Run directory (default: <output_dir>/pretrain/seed<N>)");

  s = add("finetune", "Fine-tune a language classifier on a pre-trained encoder", Finetune);
  config(s);
  corpus(s);
  seed(s);
  s->add_option("--checkpoint", o.checkpoint, "Pre-trained checkpoint")->required()->check(CLI::ExistingFile);
  out(s, "Run directory (default: <output_dir>/finetune/seed<N>)");

  s = add("evaluate", "Score a split and write the metrics report", Evaluate);
  config(s);
  corpus(s);
  s->add_option("--checkpoint", o.checkpoint, "Fine-tuned checkpoint")->required()->check(CLI::ExistingFile);
  s->add_option("--split", o.split, "Split to score")->check(CLI::IsMember({"finetune_train", "dev", "test"}));
  out(s, "Report directory (default: <output_dir>/evaluate)");

  s = add("sweep", "Run one ablation axis over every seed", Sweep);
  config(s);
  s->add_option("--axis", o.axis, "Sweep axis")->required()->check(CLI::IsMember({"lambda", "noise", "loss"}));
  out(s, "Sweep directory (default: <output_dir>/sweep)");

  s = add("pipeline", "Pre-train, fine-tune and evaluate one seed", Pipeline);
  config(s);
  seed(s);
  out(s, "Run directory (default: <output_dir>/pipeline)");

  s = add("report", "Recompute the metrics report from a trials CSV", Report);
  config(s);
  s->add_option("--trials", o.trials, "trials.csv from evaluate")->required()->check(CLI::ExistingFile);
  out(s, "Also write metrics.csv and metrics.txt here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return action(o);
  } catch (const Error& e) {
    std::cerr << "lasr " << command << ": " << KindOf(e) << " error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "lasr " << command << ": internal error: " << e.what() << '\n';
    return 3;
  }
}
