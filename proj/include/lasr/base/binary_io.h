// lasr/base/binary_io.h

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

#ifndef LASR_BASE_BINARY_IO_H_
#define LASR_BASE_BINARY_IO_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

// Little-endian primitives shared by the corpus and checkpoint formats. All
// readers throw IoError on a short read.
namespace lasr::binary {

void WriteU32(std::ostream& os, std::uint32_t v);
void WriteI32(std::ostream& os, std::int32_t v);
void WriteU64(std::ostream& os, std::uint64_t v);
void WriteI64(std::ostream& os, std::int64_t v);
void WriteF64(std::ostream& os, double v);
void WriteF64s(std::ostream& os, std::span<const double> v);
void WriteString(std::ostream& os, const std::string& s);

std::uint32_t ReadU32(std::istream& is);
std::int32_t ReadI32(std::istream& is);
std::uint64_t ReadU64(std::istream& is);
std::int64_t ReadI64(std::istream& is);
double ReadF64(std::istream& is);
void ReadF64s(std::istream& is, std::span<double> out);
std::string ReadString(std::istream& is, std::size_t max_length = 4096);

}  // namespace lasr::binary

#endif  // LASR_BASE_BINARY_IO_H_
