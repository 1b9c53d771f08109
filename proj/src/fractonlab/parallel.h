// Copyright 2026 The Fractonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef _FRACTONLAB_PARALLEL_H
#define _FRACTONLAB_PARALLEL_H

namespace fractonlab {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results; the serial path exists for testing and as the
/// inner loop when an outer level is already parallel.
enum class Execution { kSerial, kParallel };

/// Number of OpenMP threads a parallel region would use (1 without OpenMP).
int available_threads();

}  // namespace fractonlab

#endif
