// unit/trainer_test.cc

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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lasr/base/error.h"
#include "lasr/trainer/finetune.h"
#include "lasr/trainer/optimizer.h"
#include "lasr/trainer/pretrain.h"

using namespace lasr;
using namespace lasr::trainer;
using objectives::SslChoice;
using objectives::SupervisedChoice;

namespace {

langsim::CorpusConfig SmallCorpusConfig() {
  langsim::CorpusConfig c;
  c.num_languages = 4;
  c.num_pretrain_languages = 3;
  c.language.feature_dim = 6;
  c.min_frames = 20;
  c.max_frames = 30;
  c.pretrain_per_language = 24;
  c.finetune_per_language = 10;
  c.dev_per_language = 2;
  c.test_per_language = 4;
  return c;
}

const langsim::Corpus& SmallCorpus() {
  static const langsim::Corpus corpus = langsim::BuildCorpus(SmallCorpusConfig(), 5);
  return corpus;
}

encoder::EncoderConfig SmallEncoder() {
  encoder::EncoderConfig e;
  e.feature_dim = 6;
  e.context = 1;
  e.hidden_dim = 8;
  e.embed_dim = 6;
  e.codebook_size = 8;
  e.code_dim = 4;
  e.num_languages = 4;
  return e;
}

TrainConfig SmallTrain(SslChoice ssl, SupervisedChoice sup, double lambda) {
  TrainConfig t;
  t.total_steps = 24;
  t.ssl_only_steps = 8;
  t.warmup_steps = 4;
  t.peak_lr = 1e-2;
  t.lambda = lambda;
  t.ssl = ssl;
  t.supervised_loss = sup;
  t.seed = 11;
  t.checkpoint_every = 0;
  t.ssl_batch_size = 8;
  t.batch = mining::BatchSpec{3, 2, -1};
  return t;
}

bool SameLog(const std::vector<StepRecord>& a, const std::vector<StepRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (TrainingLogRow(a[i]) != TrainingLogRow(b[i])) return false;
  return true;
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lasr_trainer_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("learning-rate schedule") {
  CHECK(LrSchedule(300, 300, 3e-3) == 3e-3);
  CHECK(LrSchedule(150, 300, 3e-3) == doctest::Approx(1.5e-3).epsilon(1e-15));
  CHECK(LrSchedule(1200, 300, 3e-3) == doctest::Approx(1.5e-3).epsilon(1e-15));
  CHECK(LrSchedule(40000, 40000, 6e-4) == 6e-4);
  // Continuous at the peak and monotone on either side.
  CHECK(LrSchedule(299, 300, 1.0) < LrSchedule(300, 300, 1.0));
  CHECK(LrSchedule(301, 300, 1.0) < LrSchedule(300, 300, 1.0));
  CHECK_THROWS_AS(LrSchedule(0, 300, 1.0), DomainError);
}

TEST_CASE("Adam updates") {
  Rng rng(3);
  encoder::EncoderParams params = encoder::InitEncoderParams(SmallEncoder(), rng);
  const std::size_t n = params.num_blocks();
  auto zero_grads = [&] {
    std::vector<Tensor> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(Tensor::ZerosLike(params.block(i)));
    return g;
  };

  SUBCASE("zero gradients keep parameters and decay the moments") {
    AdamState s = MakeAdamState(params);
    for (std::size_t i = 0; i < n; ++i) {
      s.first_moment[i].Fill(0.5);
      s.second_moment[i].Fill(0.25);
    }
    const encoder::EncoderParams before = params;
    AdamStep(params, zero_grads(), s, 0.1);
    CHECK(s.first_moment[0][0] == doctest::Approx(0.45));
    CHECK(s.second_moment[0][0] == doctest::Approx(0.25 * 0.999));
    AdamState fresh = MakeAdamState(before);
    encoder::EncoderParams p2 = before;
    AdamStep(p2, zero_grads(), fresh, 0.1);
    CHECK(p2.Identical(before));
    CHECK(fresh.step == 1);
  }

  SUBCASE("first step moves by about lr") {
    AdamState s = MakeAdamState(params);
    auto g = zero_grads();
    g[0][0] = 1.0;
    const double x0 = params.block(0)[0];
    AdamStep(params, g, s, 0.1);
    CHECK(x0 - params.block(0)[0] == doctest::Approx(0.1).epsilon(1e-6));
  }

  SUBCASE("minimizes x^2 monotonically") {
    AdamState s = MakeAdamState(params);
    params.block(0)[0] = 1.0;
    double prev = 1.0;
    for (int it = 0; it < 10; ++it) {
      auto g = zero_grads();
      g[0][0] = 2.0 * params.block(0)[0];
      AdamStep(params, g, s, 0.05);
      const double f = params.block(0)[0] * params.block(0)[0];
      CHECK(f < prev);
      prev = f;
    }
    CHECK(s.step == 10);
  }

  SUBCASE("non-finite gradient names the block and step") {
    AdamState s = MakeAdamState(params);
    AdamStep(params, zero_grads(), s, 0.1);
    auto g = zero_grads();
    const std::size_t bad = params.IndexOf("layer1.bias");
    g[bad][2] = std::numeric_limits<double>::quiet_NaN();
    const encoder::EncoderParams before = params;
    try {
      AdamStep(params, g, s, 0.1);
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("layer1.bias") != std::string::npos);
      CHECK(msg.find("step 2") != std::string::npos);
    }
    CHECK(params.Identical(before));
    CHECK(s.step == 1);
  }

  SUBCASE("masked blocks are left alone") {
    AdamState s = MakeAdamState(params);
    auto g = zero_grads();
    for (auto& t : g) t.Fill(1.0);
    std::vector<bool> update(n, false);
    update[params.classifier_weight()] = true;
    const encoder::EncoderParams before = params;
    AdamStep(params, g, s, 0.1, update);
    for (std::size_t i = 0; i < n; ++i)
      CHECK((i == params.classifier_weight()) != params.block(i).Identical(before.block(i)));
  }
}

TEST_CASE("global norm clipping") {
  std::vector<Tensor> g = {Tensor::Zeros(1, 2), Tensor::Zeros(1, 1)};
  g[0][0] = 3.0;
  g[0][1] = 4.0;
  g[1][0] = 12.0;
  CHECK(ClipGlobalNorm(g, 5.0) == doctest::Approx(13.0));
  CHECK(g[0][0] == doctest::Approx(15.0 / 13.0));
  CHECK(g[1][0] == doctest::Approx(60.0 / 13.0));
  CHECK(ClipGlobalNorm(g, 100.0) == doctest::Approx(5.0));
  CHECK(g[1][0] == doctest::Approx(60.0 / 13.0));
}

TEST_CASE("train config validation") {
  TrainConfig t = SmallTrain(SslChoice::kMlm, SupervisedChoice::kHard, 1.0);
  t.warmup_steps = t.total_steps;
  CHECK_THROWS_AS(t.Validate(), ConfigError);
  t = SmallTrain(SslChoice::kMlm, SupervisedChoice::kHard, -1.0);
  CHECK_THROWS_AS(t.Validate(), ConfigError);
  t = SmallTrain(SslChoice::kNone, SupervisedChoice::kNone, 1.0);
  CHECK_THROWS_AS(t.Validate(), ConfigError);
  t = SmallTrain(SslChoice::kMlm, SupervisedChoice::kHard, 1.0);
  CHECK_FALSE(t.IsSupervisedStep(8));
  CHECK(t.IsSupervisedStep(9));
  t.lambda = 0.0;
  CHECK_FALSE(t.IsSupervisedStep(9));
  t = SmallTrain(SslChoice::kNone, SupervisedChoice::kHard, 1.0);
  CHECK(t.IsSupervisedStep(1));
}

TEST_CASE("lambda = 0 reproduces the SSL baseline exactly") {
  for (SslChoice ssl : {SslChoice::kMlm, SslChoice::kContrastive}) {
    CAPTURE(objectives::SslChoiceName(ssl));
    const auto baseline = Pretrain(SmallCorpus(), SmallEncoder(),
                                   SmallTrain(ssl, SupervisedChoice::kNone, 16.0));
    const auto zero = Pretrain(SmallCorpus(), SmallEncoder(),
                               SmallTrain(ssl, SupervisedChoice::kHard, 0.0));
    CHECK(zero.state.params.Identical(baseline.state.params));
    CHECK(SameLog(zero.log, baseline.log));
    const auto lasr = Pretrain(SmallCorpus(), SmallEncoder(),
                               SmallTrain(ssl, SupervisedChoice::kHard, 4.0));
    CHECK_FALSE(lasr.state.params.Identical(baseline.state.params));
    // The first phase is shared.
    for (int i = 0; i < 8; ++i) CHECK(TrainingLogRow(lasr.log[i]) == TrainingLogRow(baseline.log[i]));
    CHECK(lasr.log[8].losses.anchors_used > 0);
  }
}

TEST_CASE("an empty second phase equals SSL-only training") {
  TrainConfig two_phase = SmallTrain(SslChoice::kMlm, SupervisedChoice::kHard, 16.0);
  two_phase.ssl_only_steps = two_phase.total_steps;
  const auto a = Pretrain(SmallCorpus(), SmallEncoder(), two_phase);
  const auto b = Pretrain(SmallCorpus(), SmallEncoder(),
                          SmallTrain(SslChoice::kMlm, SupervisedChoice::kNone, 16.0));
  CHECK(a.state.params.Identical(b.state.params));
  CHECK(SameLog(a.log, b.log));
}

TEST_CASE("resume from a checkpoint is bit-exact") {
  for (SslChoice ssl : {SslChoice::kMlm, SslChoice::kContrastive, SslChoice::kNone}) {
    CAPTURE(objectives::SslChoiceName(ssl));
    TrainConfig cfg = SmallTrain(ssl, SupervisedChoice::kSemiHard, 2.0);
    cfg.checkpoint_every = 6;
    const auto whole_dir = TempDir("whole");
    const auto whole = Pretrain(SmallCorpus(), SmallEncoder(), cfg, {whole_dir, std::nullopt, -1});

    const auto part_dir = TempDir("part");
    Pretrain(SmallCorpus(), SmallEncoder(), cfg, {part_dir, std::nullopt, 12});
    CHECK(std::filesystem::exists(part_dir / "ckpt_step12.bin"));
    TrainingState mid = LoadTrainingState(part_dir / "ckpt_step12.bin");
    CHECK(mid.adam.step == 12);
    const auto resumed = Pretrain(SmallCorpus(), SmallEncoder(), cfg, {part_dir, mid, -1});

    CHECK(resumed.state.params.Identical(whole.state.params));
    for (std::size_t i = 0; i < whole.state.adam.first_moment.size(); ++i) {
      CHECK(resumed.state.adam.first_moment[i].Identical(whole.state.adam.first_moment[i]));
      CHECK(resumed.state.adam.second_moment[i].Identical(whole.state.adam.second_moment[i]));
    }
    CHECK(Slurp(part_dir / "train_log.csv") == Slurp(whole_dir / "train_log.csv"));
    CHECK(Slurp(part_dir / "final.ckpt") == Slurp(whole_dir / "final.ckpt"));
    CHECK(Slurp(part_dir / "ckpt_step18.bin") == Slurp(whole_dir / "ckpt_step18.bin"));
  }
}

TEST_CASE("training reduces the loss") {
  TrainConfig cfg = SmallTrain(SslChoice::kMlm, SupervisedChoice::kNone, 0.0);
  cfg.total_steps = 200;
  cfg.ssl_only_steps = 200;
  cfg.warmup_steps = 20;
  const auto r = Pretrain(SmallCorpus(), SmallEncoder(), cfg);
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 40; ++i) {
    first += r.log[i].losses.total;
    last += r.log[r.log.size() - 1 - i].losses.total;
  }
  CHECK(last < first);
  CHECK(first / 40.0 == doctest::Approx(std::log(8.0)).epsilon(0.1));
}

TEST_CASE("the quantizer is untouched by training") {
  TrainConfig cfg = SmallTrain(SslChoice::kMlm, SupervisedChoice::kHard, 4.0);
  Pretrainer trainer(SmallCorpus(), cfg, InitTrainingState(SmallEncoder(), cfg));
  const encoder::RandomQuantizer before = trainer.quantizer();
  trainer.RunUntil(cfg.total_steps);
  const encoder::EncoderConfig& ec = trainer.state().params.config();
  CHECK(ec.quantizer_seed == DeriveSeed(cfg.seed, {StreamTag("quantizer")}));
  const encoder::RandomQuantizer after =
      encoder::MakeRandomQuantizer(ec.feature_dim, ec.code_dim, ec.codebook_size, ec.quantizer_seed);
  CHECK(after.projection.Identical(before.projection));
  CHECK(after.codebook.Identical(before.codebook));
}

TEST_CASE("pretraining rejects a feature mismatch") {
  encoder::EncoderConfig wrong = SmallEncoder();
  wrong.feature_dim = 7;
  CHECK_THROWS_AS(Pretrain(SmallCorpus(), wrong, SmallTrain(SslChoice::kMlm, SupervisedChoice::kNone, 0.0)),
                  ShapeError);
}

TEST_CASE("finetune contracts") {
  TrainConfig cfg = SmallTrain(SslChoice::kMlm, SupervisedChoice::kHard, 4.0);
  const encoder::EncoderParams pre = Pretrain(SmallCorpus(), SmallEncoder(), cfg).state.params;
  FinetuneConfig fc;
  fc.steps = 30;
  fc.warmup_steps = 5;
  fc.batch_size = 16;
  fc.seed = 4;

  SUBCASE("zero steps gives the checkpoint with a fresh head") {
    FinetuneConfig zero = fc;
    zero.steps = 0;
    const auto r = Finetune(pre, SmallCorpus(), zero);
    encoder::EncoderParams expected = pre;
    Rng head = Rng::Derive(fc.seed, {StreamTag("classifier")});
    encoder::ResetClassifier(expected, head);
    CHECK(r.params.Identical(expected));
    CHECK(r.log.empty());
  }

  SUBCASE("deterministic in the seed") {
    for (FinetuneMode mode : {FinetuneMode::kHeadOnly, FinetuneMode::kFull}) {
      fc.mode = mode;
      const auto a = Finetune(pre, SmallCorpus(), fc);
      const auto b = Finetune(pre, SmallCorpus(), fc);
      CHECK(a.params.Identical(b.params));
      fc.seed = 5;
      CHECK_FALSE(Finetune(pre, SmallCorpus(), fc).params.Identical(a.params));
      fc.seed = 4;
    }
  }

  SUBCASE("head-only freezes the encoder; full mode does not") {
    fc.mode = FinetuneMode::kHeadOnly;
    const auto head = Finetune(pre, SmallCorpus(), fc);
    fc.mode = FinetuneMode::kFull;
    const auto full = Finetune(pre, SmallCorpus(), fc);
    for (std::size_t i = 0; i < pre.num_blocks(); ++i) {
      CAPTURE(pre.name(i));
      if (pre.is_classifier(i)) continue;
      CHECK(head.params.block(i).Identical(pre.block(i)));
      if (pre.name(i) != "mask_embedding" && pre.name(i).rfind("mlm_head", 0) != 0 &&
          pre.name(i).rfind("contrastive_head", 0) != 0)
        CHECK_FALSE(full.params.block(i).Identical(pre.block(i)));
    }
  }

  SUBCASE("labels and shapes are checked") {
    std::vector<langsim::Utterance> train = SmallCorpus().split(langsim::Split::kFinetuneTrain);
    train[3].label = 4;
    CHECK_THROWS_AS(Finetune(pre, train, fc), DomainError);
    train[3].label = langsim::kUnlabeled;
    CHECK_THROWS_AS(Finetune(pre, train, fc), DomainError);

    encoder::EncoderConfig other = SmallEncoder();
    other.feature_dim = 5;
    Rng rng(1);
    CHECK_THROWS_AS(Finetune(encoder::InitEncoderParams(other, rng), SmallCorpus(), fc), ShapeError);
    fc.warmup_steps = fc.steps;
    CHECK_THROWS_AS(Finetune(pre, SmallCorpus(), fc), ConfigError);
  }
}

TEST_CASE("scored trials are posteriors") {
  Rng rng(2);
  const encoder::EncoderParams p = encoder::InitEncoderParams(SmallEncoder(), rng);
  const auto& test = SmallCorpus().split(langsim::Split::kTest);
  const auto trials = ScoreUtterances(p, test);
  REQUIRE(trials.size() == test.size());
  CHECK_NOTHROW(evalkit::ValidateTrials(trials));
  for (std::size_t i = 0; i < trials.size(); ++i) {
    CHECK(trials[i].utterance_id == test[i].utterance_id);
    CHECK(trials[i].true_label == test[i].label);
  }
  // Chunked embedding agrees with one batch.
  std::vector<const Tensor*> frames;
  for (const auto& u : test) frames.push_back(&u.frames);
  CHECK(EmbedAll(p, test).Identical(encoder::EmbedUtterances(p, frames)));
}

TEST_CASE("head-only probe on a random encoder beats chance") {
  const langsim::Corpus corpus = langsim::BuildCorpus(langsim::CorpusConfig{}, 1);
  Rng rng(9);
  const encoder::EncoderParams random = encoder::InitEncoderParams(encoder::EncoderConfig{}, rng);
  FinetuneConfig fc;
  fc.seed = 9;
  const auto r = Finetune(random, corpus, fc);
  const auto trials = ScoreUtterances(r.params, corpus.split(langsim::Split::kFinetuneTrain));
  const double acc = evalkit::Accuracy(trials);
  MESSAGE("train accuracy of a probe on a random encoder: " << acc);
  CHECK(acc > 1.0 / 12.0 + 0.1);
}
