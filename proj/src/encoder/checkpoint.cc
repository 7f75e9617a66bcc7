// encoder/checkpoint.cc

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

#include "lasr/encoder/checkpoint.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "lasr/base/binary_io.h"
#include "lasr/base/error.h"

namespace lasr::encoder {

namespace bin = lasr::binary;

void WriteCheckpoint(std::ostream& os, const EncoderParams& params,
                     const OptimizerBlocks* optimizer) {
  const EncoderConfig& c = params.config();
  bin::WriteU32(os, kCheckpointMagic);
  bin::WriteU32(os, kCheckpointVersion);
  for (int v : {c.feature_dim, c.hidden_dim, c.embed_dim, c.codebook_size, c.num_languages,
                c.context, c.code_dim, c.num_hidden_layers})
    bin::WriteI32(os, v);
  bin::WriteU64(os, c.quantizer_seed);
  bin::WriteU32(os, static_cast<std::uint32_t>(params.num_blocks()));
  for (std::size_t i = 0; i < params.num_blocks(); ++i) {
    const Tensor& t = params.block(i);
    bin::WriteString(os, params.name(i));
    bin::WriteU64(os, t.rows());
    bin::WriteU64(os, t.cols());
    bin::WriteF64s(os, t.data());
  }
  bin::WriteU32(os, optimizer != nullptr ? 1 : 0);
  if (optimizer != nullptr) {
    if (optimizer->first_moment.size() != params.num_blocks() ||
        optimizer->second_moment.size() != params.num_blocks())
      Fail<ShapeError>("checkpoint: optimizer state has the wrong number of blocks");
    bin::WriteU64(os, optimizer->step);
    for (std::size_t i = 0; i < params.num_blocks(); ++i) {
      if (optimizer->first_moment[i].shape() != params.block(i).shape() ||
          optimizer->second_moment[i].shape() != params.block(i).shape())
        Fail<ShapeError>("checkpoint: optimizer moments for '", params.name(i),
                         "' do not match the parameter shape");
      bin::WriteF64s(os, optimizer->first_moment[i].data());
      bin::WriteF64s(os, optimizer->second_moment[i].data());
    }
  }
  if (!os) Fail<IoError>("checkpoint: write failed");
}

Checkpoint ReadCheckpoint(std::istream& is) {
  if (bin::ReadU32(is) != kCheckpointMagic) Fail<IoError>("checkpoint: bad magic number");
  const std::uint32_t version = bin::ReadU32(is);
  if (version != kCheckpointVersion)
    Fail<IoError>("checkpoint: unsupported format version ", version, " (expected ",
                  kCheckpointVersion, ")");
  EncoderConfig c;
  c.feature_dim = bin::ReadI32(is);
  c.hidden_dim = bin::ReadI32(is);
  c.embed_dim = bin::ReadI32(is);
  c.codebook_size = bin::ReadI32(is);
  c.num_languages = bin::ReadI32(is);
  c.context = bin::ReadI32(is);
  c.code_dim = bin::ReadI32(is);
  c.num_hidden_layers = bin::ReadI32(is);
  c.quantizer_seed = bin::ReadU64(is);
  try {
    c.Validate();
  } catch (const ConfigError& e) {
    Fail<IoError>("checkpoint: invalid header: ", e.what());
  }
  Checkpoint ckpt{EncoderParams(c), std::nullopt};
  EncoderParams& p = ckpt.params;
  const std::uint32_t blocks = bin::ReadU32(is);
  if (blocks != p.num_blocks())
    Fail<IoError>("checkpoint: ", blocks, " parameter blocks, header implies ", p.num_blocks());
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    const std::string name = bin::ReadString(is);
    if (name != p.name(i))
      Fail<IoError>("checkpoint: block ", i, " is '", name, "', expected '", p.name(i), "'");
    const std::uint64_t rows = bin::ReadU64(is);
    const std::uint64_t cols = bin::ReadU64(is);
    Tensor& t = p.block(i);
    if (rows != t.rows() || cols != t.cols())
      Fail<IoError>("checkpoint: block '", name, "' has shape [", rows, "x", cols, "], expected ",
                    diffkit::ShapeString(t.shape()));
    bin::ReadF64s(is, t.data());
  }
  const std::uint32_t has_optimizer = bin::ReadU32(is);
  if (has_optimizer > 1) Fail<IoError>("checkpoint: corrupt optimizer flag");
  if (has_optimizer == 1) {
    OptimizerBlocks opt;
    opt.step = bin::ReadU64(is);
    for (std::size_t i = 0; i < p.num_blocks(); ++i) {
      opt.first_moment.push_back(Tensor::ZerosLike(p.block(i)));
      opt.second_moment.push_back(Tensor::ZerosLike(p.block(i)));
      bin::ReadF64s(is, opt.first_moment.back().data());
      bin::ReadF64s(is, opt.second_moment.back().data());
    }
    ckpt.optimizer = std::move(opt);
  }
  if (is.peek() != std::char_traits<char>::eof()) Fail<IoError>("checkpoint: trailing bytes");
  return ckpt;
}

void SaveCheckpoint(const std::filesystem::path& path, const EncoderParams& params,
                    const OptimizerBlocks* optimizer) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) Fail<IoError>("cannot open '", path.string(), "' for writing");
  WriteCheckpoint(os, params, optimizer);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) Fail<IoError>("cannot open checkpoint '", path.string(), "'");
  try {
    return ReadCheckpoint(is);
  } catch (const IoError& e) {
    Fail<IoError>(path.string(), ": ", e.what());
  }
}

}  // namespace lasr::encoder
