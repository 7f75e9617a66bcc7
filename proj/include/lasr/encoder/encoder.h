// lasr/encoder/encoder.h

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

#ifndef LASR_ENCODER_ENCODER_H_
#define LASR_ENCODER_ENCODER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lasr/base/rng.h"
#include "lasr/diffkit/tape.h"

namespace lasr::encoder {

using diffkit::Tape;
using diffkit::Tensor;
using diffkit::Var;

struct EncoderConfig {
  int feature_dim = 20;
  /// Frames of context on each side of the centre frame.
  int context = 2;
  int hidden_dim = 64;
  int embed_dim = 32;
  /// Number of tanh layers before the final linear projection to embed_dim.
  /// Zero gives a single linear layer.
  int num_hidden_layers = 2;
  int codebook_size = 64;
  int code_dim = 16;
  int num_languages = 12;
  std::uint64_t quantizer_seed = 0;

  int input_dim() const { return (2 * context + 1) * feature_dim; }
  void Validate() const;
};

/// All trainable parameters of the frame encoder and its heads, stored as
/// named blocks in a fixed order. Weight matrices are (in x out); biases are
/// 1 x out rows.
class EncoderParams {
 public:
  EncoderParams() = default;
  /// Zero-filled parameters with the shapes implied by `config`.
  explicit EncoderParams(const EncoderConfig& config);

  const EncoderConfig& config() const { return config_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Tensor& block(std::size_t i) { return blocks_[i]; }
  const Tensor& block(std::size_t i) const { return blocks_[i]; }
  std::size_t IndexOf(std::string_view name) const;

  std::size_t num_layers() const { return static_cast<std::size_t>(config_.num_hidden_layers) + 1; }
  static std::size_t LayerWeight(std::size_t l) { return 2 * l; }
  static std::size_t LayerBias(std::size_t l) { return 2 * l + 1; }
  std::size_t mask_embedding() const { return 2 * num_layers(); }
  std::size_t mlm_weight() const { return mask_embedding() + 1; }
  std::size_t mlm_bias() const { return mask_embedding() + 2; }
  std::size_t contrastive_weight() const { return mask_embedding() + 3; }
  std::size_t classifier_weight() const { return mask_embedding() + 4; }
  std::size_t classifier_bias() const { return mask_embedding() + 5; }
  bool is_classifier(std::size_t i) const { return i >= classifier_weight(); }

  /// Bitwise equality of every block.
  bool Identical(const EncoderParams& other) const;

 private:
  EncoderConfig config_;
  std::vector<std::string> names_;
  std::vector<Tensor> blocks_;
};

/// Weights ~ N(0, 1/fan_in), biases 0, mask embedding ~ N(0, 0.01).
EncoderParams InitEncoderParams(const EncoderConfig& config, Rng& rng);

/// Redraws the classifier head from `rng` and zeroes its bias.
void ResetClassifier(EncoderParams& params, Rng& rng);

enum class Trainable { kAll, kClassifierOnly, kNone };

/// Parameters placed on a tape; vars[i] corresponds to block i.
struct BoundParams {
  const EncoderParams* params = nullptr;
  std::vector<Var> vars;

  Var operator[](std::size_t i) const { return vars[i]; }
};

BoundParams Bind(Tape& tape, const EncoderParams& params, Trainable trainable = Trainable::kAll);

/// Gradients of every block after tape.Backward(); zeros for frozen blocks.
std::vector<Tensor> CollectGradients(const Tape& tape, const BoundParams& bound);

struct MaskPlan {
  /// Sorted, unique, all in [0, T).
  std::vector<std::size_t> masked_positions;
  std::size_t span_length = 0;
  double mask_rate = 0.0;
};

/// Draws span starts uniformly without replacement from [0, T - span] until
/// at least mask_rate * T positions are covered. At least one span is always
/// masked.
MaskPlan PlanMask(std::size_t num_frames, double mask_rate, std::size_t span_length, Rng& rng);

/// Several utterances concatenated along time; utterance i occupies rows
/// [offsets[i], offsets[i + 1]).
struct FrameBatch {
  Tensor frames;
  std::vector<std::size_t> offsets;

  std::size_t num_utterances() const { return offsets.size() - 1; }
};

FrameBatch MakeFrameBatch(const std::vector<const Tensor*>& utterances);

/// Frame embeddings for a concatenated batch. Rows listed in `masked_rows`
/// are replaced by the mask embedding before context stacking. Every output
/// row depends only on its own utterance, so batching never changes results.
Var EncodeFrames(const BoundParams& p, Var frames, const std::vector<std::size_t>& offsets,
                 const std::vector<std::size_t>& masked_rows = {});

/// Mean over the frames of each utterance: B x D.
Var PoolFrames(Var z, const std::vector<std::size_t>& offsets);

Var MlmLogits(const BoundParams& p, Var z);
Var ContrastiveContext(const BoundParams& p, Var z);
Var ClassifierLogits(const BoundParams& p, Var pooled);

// Pure helpers built on the graph functions above.

Tensor Encode(const EncoderParams& params, const Tensor& frames, const MaskPlan* plan = nullptr);
Tensor Pool(const Tensor& z);
/// Pooled, unmasked embeddings of several utterances, B x D.
Tensor EmbedUtterances(const EncoderParams& params, const std::vector<const Tensor*>& utterances);

}  // namespace lasr::encoder

#endif  // LASR_ENCODER_ENCODER_H_
