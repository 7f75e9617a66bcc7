// lasr/encoder/checkpoint.h

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

#ifndef LASR_ENCODER_CHECKPOINT_H_
#define LASR_ENCODER_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lasr/encoder/encoder.h"

// Binary checkpoint layout (little endian):
//
//   u32 magic "LASR", u32 version
//   i32 F, H, D, V, L, c, code_dim, num_hidden_layers
//   u64 quantizer seed
//   u32 block count, then per block: string name, u64 rows, u64 cols,
//       rows * cols f64 values
//   u32 optimizer flag; when 1: u64 step, then per block the first and
//       second moment arrays (same shapes as the block)
//
// Strings are a u32 length followed by the bytes.
namespace lasr::encoder {

inline constexpr std::uint32_t kCheckpointMagic = 0x5253414C;  // "LASR"
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Adam moments saved next to the parameters so training can resume exactly.
struct OptimizerBlocks {
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
};

struct Checkpoint {
  EncoderParams params;
  std::optional<OptimizerBlocks> optimizer;
};

void WriteCheckpoint(std::ostream& os, const EncoderParams& params,
                     const OptimizerBlocks* optimizer = nullptr);
/// Validates the header, every block name and shape; throws IoError.
Checkpoint ReadCheckpoint(std::istream& is);

void SaveCheckpoint(const std::filesystem::path& path, const EncoderParams& params,
                    const OptimizerBlocks* optimizer = nullptr);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace lasr::encoder

#endif  // LASR_ENCODER_CHECKPOINT_H_
