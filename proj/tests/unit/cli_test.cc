// unit/cli_test.cc

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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lasr/base/error.h"
#include "lasr/base/json_util.h"
#include "lasr/cli/experiment_config.h"
#include "lasr/cli/runner.h"
#include "lasr/encoder/checkpoint.h"

using namespace lasr;
using namespace lasr::cli;
namespace fs = std::filesystem;

namespace {

/// A config small enough to pre-train in well under a second.
ExperimentConfig TinyConfig() {
  ExperimentConfig c;
  c.corpus.num_languages = 4;
  c.corpus.num_pretrain_languages = 3;
  c.corpus.language.feature_dim = 6;
  c.corpus.min_frames = 20;
  c.corpus.max_frames = 30;
  c.corpus.pretrain_per_language = 24;
  c.corpus.finetune_per_language = 10;
  c.corpus.dev_per_language = 2;
  c.corpus.test_per_language = 5;
  c.encoder.feature_dim = 6;
  c.encoder.num_languages = 4;
  c.encoder.context = 1;
  c.encoder.hidden_dim = 8;
  c.encoder.embed_dim = 6;
  c.encoder.codebook_size = 8;
  c.encoder.code_dim = 4;
  c.train.total_steps = 16;
  c.train.ssl_only_steps = 8;
  c.train.warmup_steps = 4;
  c.train.checkpoint_every = 8;
  c.train.lambda = 4.0;
  c.train.ssl_batch_size = 8;
  c.train.batch = mining::BatchSpec{3, 2, -1};
  c.finetune.steps = 10;
  c.finetune.warmup_steps = 2;
  c.finetune.batch_size = 8;
  c.sweep.lambdas = {0, 4};
  c.sweep.noise_modes = {mining::CorruptionMode::kMissing};
  c.sweep.noise_fractions = {0, 0.5};
  c.sweep.losses = {"ssl_only", "hard_only", "ssl+hard"};
  c.seeds = {3, 4};
  return c;
}

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("lasr_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int Run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(LASR_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config round trip and strictness") {
  const ExperimentConfig c = TinyConfig();
  const nlohmann::json j = ExperimentConfigToJson(c);
  CHECK(ExperimentConfigToJson(ExperimentConfigFromJson(j)) == j);
  CHECK(ExperimentConfigToJson(ExperimentConfigFromJson(ExperimentConfigToJson(ExperimentConfig{}))) ==
        ExperimentConfigToJson(ExperimentConfig{}));

  nlohmann::json missing = j;
  missing["train"].erase("lambda");
  try {
    ExperimentConfigFromJson(missing);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("train.lambda") != std::string::npos);
  }
  nlohmann::json unknown = j;
  unknown["finetune"]["lr"] = 0.1;
  try {
    ExperimentConfigFromJson(unknown);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("finetune.lr") != std::string::npos);
  }
  nlohmann::json bad_corpus = j;
  bad_corpus["corpus"].erase("mean_scale");
  CHECK_THROWS_WITH_AS(ExperimentConfigFromJson(bad_corpus), doctest::Contains("mean_scale"), ConfigError);
  nlohmann::json bad_value = j;
  bad_value["train"]["lambda"] = -1.0;
  CHECK_THROWS_AS(ExperimentConfigFromJson(bad_value), ConfigError);
  bad_value = j;
  bad_value["sweep"]["losses"] = {"ssl+triplet"};
  CHECK_THROWS_AS(ExperimentConfigFromJson(bad_value), ConfigError);
}

TEST_CASE("recipes") {
  using objectives::SslChoice;
  using objectives::SupervisedChoice;
  const Recipe a = ParseRecipe("ssl+semi_hard", SslChoice::kContrastive);
  CHECK(a.ssl == SslChoice::kContrastive);
  CHECK(a.supervised == SupervisedChoice::kSemiHard);
  const Recipe b = ParseRecipe("hard_only", SslChoice::kMlm);
  CHECK(b.ssl == SslChoice::kNone);
  CHECK(b.supervised == SupervisedChoice::kHard);
  CHECK(ParseRecipe("ssl_only", SslChoice::kMlm).supervised == SupervisedChoice::kNone);
  for (const char* name : {"ssl_only", "hard_only", "ssl+ge2e", "ssl+hard", "ge2e_only"})
    CHECK(RecipeName(ParseRecipe(name, SslChoice::kMlm)) == name);
  CHECK_THROWS_AS(ParseRecipe("none_only", SslChoice::kMlm), ConfigError);
  CHECK_THROWS_AS(ParseRecipe("hard", SslChoice::kMlm), ConfigError);
}

TEST_CASE("output root override") {
  ::unsetenv(kOutputRootEnv);
  CHECK(ResolveOutputPath("runs/a") == fs::path("runs/a"));
  ::setenv(kOutputRootEnv, "/tmp/root", 1);
  CHECK(ResolveOutputPath("runs/a") == fs::path("/tmp/root/runs/a"));
  CHECK(ResolveOutputPath("/abs/b") == fs::path("/abs/b"));
  ::unsetenv(kOutputRootEnv);
}

TEST_CASE("sweep cells and CSV") {
  const ExperimentConfig c = TinyConfig();
  const auto lambda = SweepCells(c, SweepAxis::kLambda);
  REQUIRE(lambda.size() == 4);
  CHECK(lambda[0].value == "0");
  CHECK(lambda[1].seed == 4);
  CHECK(lambda[3].lambda == 4.0);
  const auto noise = SweepCells(c, SweepAxis::kNoise);
  REQUIRE(noise.size() == 4);
  CHECK(noise[2].value == "missing-0.5");
  CHECK(noise[2].corruption.fraction == 0.5);
  CHECK(SweepCells(c, SweepAxis::kLoss).size() == 6);

  std::vector<CellResult> cells;
  for (int i = 0; i < 4; ++i) {
    CellResult r{lambda[i], {}};
    r.report.overall = {"overall", false, 4, 20, 0.5 + 0.1 * i, 0.4, 0.3};
    r.report.overlap = {"overlap", false, 3, 15, 0.6, 0.5, 0.2};
    r.report.nonoverlap = {"nonoverlap", true, 0, 0, 0, 0, 0};
    cells.push_back(r);
  }
  std::ostringstream os;
  WriteSweepCsv(os, cells);
  std::istringstream is(os.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == SweepCsvHeader());
  CHECK(lines[1].rfind("lambda,0,3,0.500000,0.400000,0.300000,0.600000", 0) == 0);
  CHECK(lines[1].find("empty") != std::string::npos);
  CHECK(lines[5].rfind("lambda,0,mean,0.550000", 0) == 0);
  CHECK(lines[6].rfind("lambda,4,mean,0.750000", 0) == 0);
  CHECK(MeanAccuracy(cells, "4") == doctest::Approx(0.75));
  CHECK(MeanAccuracy(cells, "4", "overlap") == doctest::Approx(0.6));
}

TEST_CASE("the shared first phase does not change any cell") {
  const ExperimentConfig c = TinyConfig();
  ExperimentRunner runner(c, {});
  for (const char* recipe : {"ssl+hard", "ssl_only"}) {
    CellSpec cell;
    cell.seed = 4;
    cell.recipe = ParseRecipe(recipe, objectives::SslChoice::kContrastive);
    cell.lambda = 4.0;
    cell.corruption = {mining::CorruptionMode::kNoisy, 0.5};
    const trainer::PretrainResult cached = runner.Pretrain(cell);
    const trainer::PretrainResult direct =
        trainer::Pretrain(runner.CellCorpus(cell), c.encoder, runner.CellTrainConfig(cell));
    CHECK(cached.state.params.Identical(direct.state.params));
    REQUIRE(cached.log.size() == direct.log.size());
    for (std::size_t i = 0; i < cached.log.size(); ++i)
      CHECK(trainer::TrainingLogRow(cached.log[i]) == trainer::TrainingLogRow(direct.log[i]));
  }
}

TEST_CASE("sweeps are reproducible and reuse identical cells") {
  const ExperimentConfig c = TinyConfig();
  const fs::path a = TempDir("sweep_a"), b = TempDir("sweep_b");
  ExperimentRunner first(c, a);
  const auto lambda = first.Sweep(SweepAxis::kLambda);
  CHECK(first.cells_trained() == 4);
  first.Sweep(SweepAxis::kNoise);
  // noise-0 duplicates lambda=4, the configured weight.
  CHECK(first.cells_trained() == 6);
  ExperimentRunner second(c, b);
  second.Sweep(SweepAxis::kLambda);
  CHECK(Slurp(a / "sweep_lambda.csv") == Slurp(b / "sweep_lambda.csv"));
  CHECK(Slurp(a / "cells/lambda/4/seed3/metrics.csv") == Slurp(b / "cells/lambda/4/seed3/metrics.csv"));
  CHECK(Slurp(a / "cells/lambda/4/seed3/pretrained.ckpt") ==
        Slurp(b / "cells/lambda/4/seed3/pretrained.ckpt"));
  CHECK(fs::exists(a / "config.json"));
  CHECK(ExperimentConfigToJson(LoadExperimentConfig(a / "config.json")) == ExperimentConfigToJson(c));
  // lambda = 0 reduces to the SSL-only recipe.
  ExperimentRunner third(c, {});
  CellSpec ssl_only = lambda[0].spec;
  ssl_only.recipe.supervised = objectives::SupervisedChoice::kNone;
  CHECK(third.RunCell(ssl_only).report.overall.accuracy == lambda[0].report.overall.accuracy);
}

TEST_CASE("command line pipeline") {
  const fs::path dir = TempDir("pipeline");
  const fs::path config = dir / "config.json";
  SaveExperimentConfig(config, TinyConfig());
  const std::string c = " -c " + config.string();
  const fs::path log = dir / "log.txt";

  REQUIRE(Run("gen-data" + c + " -o " + (dir / "corpus").string(), log) == 0);
  REQUIRE(Run("gen-data" + c + " -o " + (dir / "corpus2").string(), log) == 0);
  for (const char* f : {"manifest.json", "pretrain/utterances.bin", "test/utterances.bin"})
    CHECK(Slurp(dir / "corpus" / f) == Slurp(dir / "corpus2" / f));

  const std::string corpus = " --corpus " + (dir / "corpus").string();
  REQUIRE(Run("pretrain" + c + corpus + " --seed 3 -o " + (dir / "pre").string(), log) == 0);
  CHECK(fs::exists(dir / "pre/ckpt_step8.bin"));
  CHECK(fs::exists(dir / "pre/train_log.csv"));
  CHECK(fs::exists(dir / "pre/config.json"));
  REQUIRE(Run("finetune" + c + corpus + " --seed 3 --checkpoint " + (dir / "pre/final.ckpt").string() +
                  " -o " + (dir / "ft").string(),
              log) == 0);
  REQUIRE(Run("evaluate" + c + corpus + " --checkpoint " + (dir / "ft/finetuned.ckpt").string() +
                  " -o " + (dir / "eval").string(),
              log) == 0);
  const std::string metrics = Slurp(dir / "eval/metrics.csv");
  for (const char* row : {"\noverall,", "\noverlap,", "\nnonoverlap,"})
    CHECK(metrics.find(row) != std::string::npos);
  REQUIRE(Run("report" + c + " --trials " + (dir / "eval/trials.csv").string() + " -o " +
                  (dir / "report").string(),
              log) == 0);
  CHECK(Slurp(dir / "report/metrics.csv") == metrics);

  // The whole chain again through the one-shot command gives the same model.
  REQUIRE(Run("pipeline" + c + " --seed 3 -o " + (dir / "pipe").string(), log) == 0);
  const std::string cell = "pipe/cells/single/ssl+hard/seed3/";
  CHECK(Slurp(dir / (cell + "finetuned.ckpt")) == Slurp(dir / "ft/finetuned.ckpt"));
  CHECK(Slurp(dir / (cell + "metrics.csv")) == metrics);

  SUBCASE("structured errors") {
    ExperimentConfig other = TinyConfig();
    other.corpus.language.feature_dim = 5;
    other.encoder.feature_dim = 5;
    SaveExperimentConfig(dir / "other.json", other);
    REQUIRE(Run("gen-data -c " + (dir / "other.json").string() + " -o " + (dir / "corpus5").string(), log) == 0);
    CHECK(Run("finetune -c " + (dir / "other.json").string() + " --corpus " + (dir / "corpus5").string() +
                  " --checkpoint " + (dir / "pre/final.ckpt").string() + " -o " + (dir / "x").string(),
              log) == 1);
    CHECK(Slurp(log).find("shape error") != std::string::npos);
    CHECK(Run("pretrain -c " + (dir / "other.json").string() + corpus + " -o " + (dir / "y").string(), log) == 1);
    CHECK(Slurp(log).find("different corpus config") != std::string::npos);
    CHECK(Run("sweep" + c + " --axis width", log) != 0);
    CHECK(Run("bogus", log) != 0);
  }

  SUBCASE("output root") {
    ExperimentConfig rel = TinyConfig();
    rel.output_dir = "relative_runs";
    SaveExperimentConfig(dir / "rel.json", rel);
    const std::string cmd = "env " + std::string(kOutputRootEnv) + "=" + dir.string() + " " +
                            LASR_CLI_PATH + " gen-data -c " + (dir / "rel.json").string() + " > " +
                            log.string() + " 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "relative_runs/corpus/manifest.json"));
  }
}
