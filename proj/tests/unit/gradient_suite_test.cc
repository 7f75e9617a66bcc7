// tests/unit/gradient_suite_test.cc

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

#include "doctest.h"
#include "suites.h"

using namespace lasr;

TEST_CASE("every loss and the encoder match finite differences") {
  suites::Outcome o = suites::GradientSuite(100);
  for (const auto& line : o.details) MESSAGE(line);
  INFO(o.worst_case);
  CHECK(o.cases >= 800);
  CHECK(o.worst < 1e-4);
}

TEST_CASE("quantizer matches an exhaustive nearest-neighbour scan") {
  suites::Outcome o = suites::QuantizerOracleSuite(20);
  CHECK(o.cases == 20);
  CHECK(o.worst == 0.0);
}
