// trainer/finetune.h

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

#ifndef LASR_TRAINER_FINETUNE_H_
#define LASR_TRAINER_FINETUNE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lasr/encoder/encoder.h"
#include "lasr/evalkit/metrics.h"
#include "lasr/langsim/corpus.h"

namespace lasr::trainer {

enum class FinetuneMode { kHeadOnly, kFull };

std::string_view FinetuneModeName(FinetuneMode m);
FinetuneMode ParseFinetuneMode(std::string_view name);

struct FinetuneConfig {
  int steps = 1000;
  int batch_size = 64;
  int warmup_steps = 100;
  double peak_lr = 1e-2;
  double clip_norm = 5.0;
  FinetuneMode mode = FinetuneMode::kHeadOnly;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct FinetuneRecord {
  int step = 0;
  double lr = 0.0;
  double loss = 0.0;
  double batch_accuracy = 0.0;
};

std::string FinetuneLogHeader();
std::string FinetuneLogRow(const FinetuneRecord& r);

struct FinetuneResult {
  encoder::EncoderParams params;
  std::vector<FinetuneRecord> log;
};

/// Trains a freshly initialized classifier head (and, in full mode, the
/// encoder) with softmax cross-entropy on pooled embeddings. Every label must
/// lie in [0, num_languages) of the encoder config.
FinetuneResult Finetune(const encoder::EncoderParams& pretrained,
                        const std::vector<langsim::Utterance>& train, const FinetuneConfig& config);

/// Same, on the corpus finetune_train split; the encoder must match the
/// corpus feature dimension and language count.
FinetuneResult Finetune(const encoder::EncoderParams& pretrained, const langsim::Corpus& corpus,
                        const FinetuneConfig& config);

/// Pooled embeddings of many utterances, computed in fixed-size chunks.
diffkit::Tensor EmbedAll(const encoder::EncoderParams& params,
                         const std::vector<langsim::Utterance>& utterances);

/// Softmax class posteriors for each utterance.
std::vector<evalkit::ScoredTrial> ScoreUtterances(const encoder::EncoderParams& params,
                                                  const std::vector<langsim::Utterance>& utterances);

}  // namespace lasr::trainer

#endif  // LASR_TRAINER_FINETUNE_H_
