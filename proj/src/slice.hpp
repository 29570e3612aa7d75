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

#ifndef MMOT_SLICE_HPP
#define MMOT_SLICE_HPP

#include <cstdint>

#include "mmot/measure.hpp"

namespace mmot {

// Visits every linear index whose j-th coordinate is fixed to i, in
// increasing index order. fn(idx, coords) sees all n coordinates of the
// current tuple. The fixed order makes every reduction over a slice
// deterministic regardless of which thread owns the slice.
template <typename Fn>
void for_each_in_slice(const IndexSpace& space, int j, int i, Fn&& fn) {
  const int n = space.arity();
  int tup[64] = {0};
  tup[j] = i;
  std::int64_t idx = space.strides[j] * i;
  for (;;) {
    fn(idx, static_cast<const int*>(tup));
    int k = n - 1;
    for (;;) {
      if (k == j) --k;
      if (k < 0) return;
      if (tup[k] + 1 < space.sizes[k]) {
        ++tup[k];
        idx += space.strides[k];
        break;
      }
      idx -= space.strides[k] * tup[k];
      tup[k] = 0;
      --k;
    }
  }
}

}  // namespace mmot

#endif  // MMOT_SLICE_HPP
