// cli/experiment_config.cc

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

#include "lasr/cli/experiment_config.h"

#include <cstdlib>

#include "lasr/base/error.h"
#include "lasr/base/json_util.h"
#include "lasr/langsim/corpus_io.h"

namespace lasr::cli {

using nlohmann::json;
using objectives::SslChoice;
using objectives::SupervisedChoice;

namespace {

json EncoderToJson(const encoder::EncoderConfig& e) {
  return json{{"context", e.context},
              {"hidden_dim", e.hidden_dim},
              {"embed_dim", e.embed_dim},
              {"num_hidden_layers", e.num_hidden_layers},
              {"codebook_size", e.codebook_size},
              {"code_dim", e.code_dim}};
}

encoder::EncoderConfig EncoderFromJson(const JsonReader& r, const langsim::CorpusConfig& corpus) {
  encoder::EncoderConfig e;
  e.feature_dim = corpus.language.feature_dim;
  e.num_languages = corpus.num_languages;
  e.context = r.Get<int>("context");
  e.hidden_dim = r.Get<int>("hidden_dim");
  e.embed_dim = r.Get<int>("embed_dim");
  e.num_hidden_layers = r.Get<int>("num_hidden_layers");
  e.codebook_size = r.Get<int>("codebook_size");
  e.code_dim = r.Get<int>("code_dim");
  r.Finish({"context", "hidden_dim", "embed_dim", "num_hidden_layers", "codebook_size",
            "code_dim"});
  return e;
}

json TrainToJson(const trainer::TrainConfig& t) {
  return json{{"total_steps", t.total_steps},
              {"ssl_only_steps", t.ssl_only_steps},
              {"warmup_steps", t.warmup_steps},
              {"peak_lr", t.peak_lr},
              {"lambda", t.lambda},
              {"supervised_loss", objectives::SupervisedChoiceName(t.supervised_loss)},
              {"ssl", objectives::SslChoiceName(t.ssl)},
              {"checkpoint_every", t.checkpoint_every},
              {"clip_norm", t.clip_norm},
              {"ssl_batch_size", t.ssl_batch_size},
              {"languages_per_batch", t.batch.languages_per_batch},
              {"utterances_per_language", t.batch.per_language},
              {"unlabeled_slots", t.batch.unlabeled_slots},
              {"gamma", t.supervised.gamma},
              {"ge2e_similarity_variant", t.supervised.ge2e_similarity_variant},
              {"mask_rate", t.ssl_config.mask_rate},
              {"span_length", t.ssl_config.span_length},
              {"num_distractors", t.ssl_config.num_distractors},
              {"temperature", t.ssl_config.temperature}};
}

trainer::TrainConfig TrainFromJson(const JsonReader& r) {
  trainer::TrainConfig t;
  t.total_steps = r.Get<int>("total_steps");
  t.ssl_only_steps = r.Get<int>("ssl_only_steps");
  t.warmup_steps = r.Get<int>("warmup_steps");
  t.peak_lr = r.Get<double>("peak_lr");
  t.lambda = r.Get<double>("lambda");
  t.supervised_loss = objectives::ParseSupervisedChoice(r.Get<std::string>("supervised_loss"));
  t.ssl = objectives::ParseSslChoice(r.Get<std::string>("ssl"));
  t.checkpoint_every = r.Get<int>("checkpoint_every");
  t.clip_norm = r.Get<double>("clip_norm");
  t.ssl_batch_size = r.Get<int>("ssl_batch_size");
  t.batch.languages_per_batch = r.Get<int>("languages_per_batch");
  t.batch.per_language = r.Get<int>("utterances_per_language");
  t.batch.unlabeled_slots = r.Get<int>("unlabeled_slots");
  t.supervised.gamma = r.Get<double>("gamma");
  t.supervised.ge2e_similarity_variant = r.Get<bool>("ge2e_similarity_variant");
  t.ssl_config.mask_rate = r.Get<double>("mask_rate");
  t.ssl_config.span_length = r.Get<int>("span_length");
  t.ssl_config.num_distractors = r.Get<int>("num_distractors");
  t.ssl_config.temperature = r.Get<double>("temperature");
  r.Finish({"total_steps", "ssl_only_steps", "warmup_steps", "peak_lr", "lambda",
            "supervised_loss", "ssl", "checkpoint_every", "clip_norm", "ssl_batch_size",
            "languages_per_batch", "utterances_per_language", "unlabeled_slots", "gamma",
            "ge2e_similarity_variant", "mask_rate", "span_length", "num_distractors",
            "temperature"});
  return t;
}

json FinetuneToJson(const trainer::FinetuneConfig& f) {
  return json{{"steps", f.steps},
              {"batch_size", f.batch_size},
              {"warmup_steps", f.warmup_steps},
              {"peak_lr", f.peak_lr},
              {"clip_norm", f.clip_norm},
              {"mode", trainer::FinetuneModeName(f.mode)}};
}

trainer::FinetuneConfig FinetuneFromJson(const JsonReader& r) {
  trainer::FinetuneConfig f;
  f.steps = r.Get<int>("steps");
  f.batch_size = r.Get<int>("batch_size");
  f.warmup_steps = r.Get<int>("warmup_steps");
  f.peak_lr = r.Get<double>("peak_lr");
  f.clip_norm = r.Get<double>("clip_norm");
  f.mode = trainer::ParseFinetuneMode(r.Get<std::string>("mode"));
  r.Finish({"steps", "batch_size", "warmup_steps", "peak_lr", "clip_norm", "mode"});
  return f;
}

}  // namespace

Recipe ParseRecipe(std::string_view name, SslChoice default_ssl) {
  if (name == "ssl_only") return {default_ssl, SupervisedChoice::kNone};
  if (name.starts_with("ssl+"))
    return {default_ssl, objectives::ParseSupervisedChoice(name.substr(4))};
  if (name.ends_with("_only")) {
    const SupervisedChoice s = objectives::ParseSupervisedChoice(name.substr(0, name.size() - 5));
    if (s != SupervisedChoice::kNone) return {SslChoice::kNone, s};
  }
  Fail<ConfigError>("unknown recipe '", name,
                    "' (expected ssl_only, <loss>_only or ssl+<loss>, e.g. ssl+hard)");
}

std::string RecipeName(const Recipe& recipe) {
  if (recipe.ssl == SslChoice::kNone)
    return std::string(objectives::SupervisedChoiceName(recipe.supervised)) + "_only";
  if (recipe.supervised == SupervisedChoice::kNone) return "ssl_only";
  return "ssl+" + std::string(objectives::SupervisedChoiceName(recipe.supervised));
}

void ExperimentConfig::Validate() const {
  corpus.Validate();
  encoder.Validate();
  if (encoder.feature_dim != corpus.language.feature_dim)
    Fail<ConfigError>("encoder feature_dim ", encoder.feature_dim,
                      " differs from corpus.feature_dim ", corpus.language.feature_dim);
  if (encoder.num_languages != corpus.num_languages)
    Fail<ConfigError>("encoder num_languages ", encoder.num_languages,
                      " differs from corpus.num_languages ", corpus.num_languages);
  train.Validate();
  finetune.Validate();
  if (!(corruption.fraction >= 0.0 && corruption.fraction <= 1.0))
    Fail<ConfigError>("corruption.fraction must be in [0, 1], got ", corruption.fraction);
  if (seeds.empty()) Fail<ConfigError>("seeds must not be empty");
  if (output_dir.empty()) Fail<ConfigError>("output_dir must not be empty");
  for (double l : sweep.lambdas)
    if (!(l >= 0.0)) Fail<ConfigError>("sweep.lambdas must be >= 0, got ", l);
  for (double p : sweep.noise_fractions)
    if (!(p >= 0.0 && p <= 1.0)) Fail<ConfigError>("sweep.noise_fractions must be in [0, 1]");
  for (const std::string& name : sweep.losses) ParseRecipe(name, train.ssl);
}

json ExperimentConfigToJson(const ExperimentConfig& c) {
  json modes = json::array();
  for (mining::CorruptionMode m : c.sweep.noise_modes) modes.push_back(mining::CorruptionModeName(m));
  return json{{"corpus", langsim::CorpusConfigToJson(c.corpus)},
              {"corpus_seed", c.corpus_seed},
              {"encoder", EncoderToJson(c.encoder)},
              {"train", TrainToJson(c.train)},
              {"finetune", FinetuneToJson(c.finetune)},
              {"corruption",
               {{"mode", mining::CorruptionModeName(c.corruption.mode)},
                {"fraction", c.corruption.fraction}}},
              {"sweep",
               {{"lambdas", c.sweep.lambdas},
                {"noise_modes", modes},
                {"noise_fractions", c.sweep.noise_fractions},
                {"losses", c.sweep.losses}}},
              {"seeds", c.seeds},
              {"output_dir", c.output_dir}};
}

ExperimentConfig ExperimentConfigFromJson(const json& j) {
  JsonReader r(j, "config");
  ExperimentConfig c;
  try {
    c.corpus = langsim::CorpusConfigFromJson(r.Raw("corpus"));
  } catch (const ConfigError& e) {
    Fail<ConfigError>("config.", e.what());
  }
  c.corpus_seed = r.Get<std::uint64_t>("corpus_seed");
  c.encoder = EncoderFromJson(r.Child("encoder"), c.corpus);
  c.train = TrainFromJson(r.Child("train"));
  c.finetune = FinetuneFromJson(r.Child("finetune"));
  {
    JsonReader k = r.Child("corruption");
    c.corruption.mode = mining::ParseCorruptionMode(k.Get<std::string>("mode"));
    c.corruption.fraction = k.Get<double>("fraction");
    k.Finish({"mode", "fraction"});
  }
  {
    JsonReader s = r.Child("sweep");
    c.sweep.lambdas = s.Get<std::vector<double>>("lambdas");
    c.sweep.noise_modes.clear();
    for (const std::string& m : s.Get<std::vector<std::string>>("noise_modes"))
      c.sweep.noise_modes.push_back(mining::ParseCorruptionMode(m));
    c.sweep.noise_fractions = s.Get<std::vector<double>>("noise_fractions");
    c.sweep.losses = s.Get<std::vector<std::string>>("losses");
    s.Finish({"lambdas", "noise_modes", "noise_fractions", "losses"});
  }
  c.seeds = r.Get<std::vector<std::uint64_t>>("seeds");
  c.output_dir = r.Get<std::string>("output_dir");
  r.Finish({"corpus", "corpus_seed", "encoder", "train", "finetune", "corruption", "sweep",
            "seeds", "output_dir"});
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  try {
    return ExperimentConfigFromJson(ReadJsonFile(path));
  } catch (const ConfigError& e) {
    Fail<ConfigError>(path.string(), ": ", e.what());
  }
}

void SaveExperimentConfig(const std::filesystem::path& path, const ExperimentConfig& config) {
  WriteJsonFile(path, ExperimentConfigToJson(config));
}

std::filesystem::path ResolveOutputPath(const std::filesystem::path& path) {
  if (path.is_absolute()) return path;
  const char* root = std::getenv(kOutputRootEnv);
  if (root == nullptr || *root == '\0') return path;
  return std::filesystem::path(root) / path;
}

}  // namespace lasr::cli
