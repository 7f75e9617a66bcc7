// lasr/langsim/corpus_io.h

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

#ifndef LASR_LANGSIM_CORPUS_IO_H_
#define LASR_LANGSIM_CORPUS_IO_H_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "lasr/langsim/corpus.h"

namespace lasr::langsim {

// On-disk layout of a corpus directory:
//
//   manifest.json              languages, split counts, overlap sets, config
//   <split>/utterances.bin     one record per utterance, back to back
//
// Each record is little-endian:
//
//   int32  T                   number of frames
//   int32  F                   feature dimension
//   int32  label               language id, or -1 when unlabeled
//   int64  utterance_id
//   double frames[T * F]       row-major, IEEE-754 binary64

void WriteUtterances(std::ostream& os, const std::vector<Utterance>& utts);
std::vector<Utterance> ReadUtterances(std::istream& is, std::size_t count);

nlohmann::json CorpusConfigToJson(const CorpusConfig& config);
/// Strict: every field must be present, no unknown keys.
CorpusConfig CorpusConfigFromJson(const nlohmann::json& j);

nlohmann::json ManifestJson(const Corpus& corpus);

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus ReadCorpus(const std::filesystem::path& dir);

}  // namespace lasr::langsim

#endif  // LASR_LANGSIM_CORPUS_IO_H_
