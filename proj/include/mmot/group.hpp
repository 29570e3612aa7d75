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

#ifndef MMOT_GROUP_HPP
#define MMOT_GROUP_HPP

#include <cstdint>
#include <vector>

#include "mmot/measure.hpp"

namespace mmot {

// A measure-preserving relabeling of one marginal's support: a permutation
// with weight(perm[i]) == weight(i) exactly.
struct MarginalMap {
  std::vector<int> perm;

  int size() const { return static_cast<int>(perm.size()); }
  int apply(int i) const { return perm[i]; }
};

MarginalMap validate_map(MarginalMap map, const DiscreteMarginal& marginal);

MarginalMap identity_map(int size);
MarginalMap compose(const MarginalMap& outer, const MarginalMap& inner);
MarginalMap inverse(const MarginalMap& map);
bool maps_equal(const MarginalMap& a, const MarginalMap& b);

// Smallest k >= 1 with map^k = identity.
std::int64_t period(const MarginalMap& map);

// Cycle partition of the support, each orbit listed in increasing index
// order and orbits ordered by their smallest member.
std::vector<std::vector<int>> orbits(const MarginalMap& map);

// Joint orbit partition under a set of permutations of the same support:
// connected components of the union of their transition graphs.
std::vector<std::vector<int>> joint_orbits(const std::vector<MarginalMap>& maps,
                                           int size);

// One relabeling per marginal, acting on the product space componentwise.
struct ProductAction {
  std::vector<MarginalMap> maps;

  int arity() const { return static_cast<int>(maps.size()); }
};

ProductAction validate_action(ProductAction action,
                              const std::vector<DiscreteMarginal>& marginals);
ProductAction identity_action(const std::vector<DiscreteMarginal>& marginals);
ProductAction compose(const ProductAction& outer, const ProductAction& inner);
bool actions_equal(const ProductAction& a, const ProductAction& b);
bool check_commuting(const ProductAction& a, const ProductAction& b);

// Image of a linear product index under the action.
std::int64_t apply_action(const ProductAction& action, const IndexSpace& space,
                          std::int64_t linear);

// A finite group of product actions given by generators. Elements are
// enumerated breadth first from the identity, so the ordering is
// deterministic for fixed generators.
struct ActionFamily {
  std::vector<ProductAction> generators;
  std::vector<ProductAction> elements;  // includes the identity
  bool commuting = false;
};

// Closes the generators under composition. Throws Errc::GroupTooLarge if the
// element count would exceed max_order.
ActionFamily generate_group(std::vector<ProductAction> generators,
                            const std::vector<DiscreteMarginal>& marginals,
                            int max_order = 100000);

// Per-marginal joint orbit partitions induced by the family's generators.
std::vector<std::vector<std::vector<int>>> family_orbit_partitions(
    const ActionFamily& family, const std::vector<DiscreteMarginal>& marginals);

}  // namespace mmot

#endif  // MMOT_GROUP_HPP
