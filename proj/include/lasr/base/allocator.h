// base/allocator.h

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

#ifndef LASR_BASE_ALLOCATOR_H_
#define LASR_BASE_ALLOCATOR_H_

namespace lasr {

// Keeps large freed blocks in the heap instead of returning them to the
// kernel. Training allocates and frees the same multi-megabyte buffers every
// step, and without this each one costs fresh page faults. Call once at
// program start; a no-op outside glibc.
void KeepFreedMemoryInHeap();

}  // namespace lasr

#endif  // LASR_BASE_ALLOCATOR_H_
