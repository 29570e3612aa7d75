// Copyright 2026 The mmot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMOT_PARALLEL_HPP
#define MMOT_PARALLEL_HPP

namespace mmot {

// Worker count for the OpenMP kernels: MK_THREADS if set, otherwise the
// OpenMP default. set_thread_count overrides both (0 restores the default).
int thread_count();
void set_thread_count(int n);

double wall_seconds();

}  // namespace mmot

#endif  // MMOT_PARALLEL_HPP
