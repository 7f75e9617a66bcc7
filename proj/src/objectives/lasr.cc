// objectives/lasr.cc

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

#include "lasr/objectives/lasr.h"

#include "lasr/base/error.h"

namespace lasr::objectives {

namespace {

void CheckLambda(double lambda) {
  if (!(lambda >= 0.0)) Fail<DomainError>("LASR objective: lambda must be >= 0, got ", lambda);
}

}  // namespace

LossBundle LasrTotal(double ssl, double supervised, double lambda) {
  CheckLambda(lambda);
  LossBundle b;
  b.ssl_loss = ssl;
  b.supervised_loss = supervised;
  b.lambda = lambda;
  b.total = ssl + lambda * supervised;
  return b;
}

diffkit::Var LasrTotal(diffkit::Var ssl, diffkit::Var supervised, double lambda) {
  CheckLambda(lambda);
  return diffkit::Add(ssl, diffkit::Scale(supervised, lambda));
}

}  // namespace lasr::objectives
