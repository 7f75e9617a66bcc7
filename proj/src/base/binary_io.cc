// base/binary_io.cc

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

#include "lasr/base/binary_io.h"

#include <array>
#include <bit>
#include <istream>
#include <ostream>

#include "lasr/base/error.h"

namespace lasr::binary {

namespace {

template <typename U>
void PutLe(std::ostream& os, U v) {
  std::array<char, sizeof(U)> buf;
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf.data(), buf.size());
}

template <typename U>
U GetLe(std::istream& is) {
  std::array<unsigned char, sizeof(U)> buf;
  if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size()))
    Fail<IoError>("unexpected end of binary stream");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void WriteU32(std::ostream& os, std::uint32_t v) { PutLe(os, v); }
void WriteI32(std::ostream& os, std::int32_t v) { PutLe(os, static_cast<std::uint32_t>(v)); }
void WriteU64(std::ostream& os, std::uint64_t v) { PutLe(os, v); }
void WriteI64(std::ostream& os, std::int64_t v) { PutLe(os, static_cast<std::uint64_t>(v)); }
void WriteF64(std::ostream& os, double v) { PutLe(os, std::bit_cast<std::uint64_t>(v)); }

void WriteF64s(std::ostream& os, std::span<const double> v) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
  } else {
    for (double x : v) WriteF64(os, x);
  }
}

void WriteString(std::ostream& os, const std::string& s) {
  WriteU32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t ReadU32(std::istream& is) { return GetLe<std::uint32_t>(is); }
std::int32_t ReadI32(std::istream& is) { return static_cast<std::int32_t>(GetLe<std::uint32_t>(is)); }
std::uint64_t ReadU64(std::istream& is) { return GetLe<std::uint64_t>(is); }
std::int64_t ReadI64(std::istream& is) { return static_cast<std::int64_t>(GetLe<std::uint64_t>(is)); }
double ReadF64(std::istream& is) { return std::bit_cast<double>(GetLe<std::uint64_t>(is)); }

void ReadF64s(std::istream& is, std::span<double> out) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(out.data()),
                 static_cast<std::streamsize>(out.size() * sizeof(double))))
      Fail<IoError>("unexpected end of binary stream");
  } else {
    for (double& x : out) x = ReadF64(is);
  }
}

std::string ReadString(std::istream& is, std::size_t max_length) {
  const std::uint32_t n = ReadU32(is);
  if (n > max_length) Fail<IoError>("string length ", n, " exceeds limit ", max_length);
  std::string s(n, '\0');
  if (n && !is.read(s.data(), n)) Fail<IoError>("unexpected end of binary stream");
  return s;
}

}  // namespace lasr::binary
