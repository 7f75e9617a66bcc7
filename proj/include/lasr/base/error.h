// lasr/base/error.h

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

#ifndef LASR_BASE_ERROR_H_
#define LASR_BASE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace lasr {

/// Root of every exception thrown by the library. The message is the
/// structured diagnostic; callers at the CLI boundary print it verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shapes do not fit the primitive they are fed to.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Batch composition cannot satisfy a sampler or mining request.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values reached the optimizer.
class NumericError : public Error {
 public:
  using Error::Error;
};

namespace internal {

template <typename... Args>
std::string Concat(Args&&... args) {
  std::ostringstream os;
  (os << ... << std::forward<Args>(args));
  return os.str();
}

}  // namespace internal

template <typename E = Error, typename... Args>
[[noreturn]] void Fail(Args&&... args) {
  throw E(internal::Concat(std::forward<Args>(args)...));
}

}  // namespace lasr

#endif  // LASR_BASE_ERROR_H_
