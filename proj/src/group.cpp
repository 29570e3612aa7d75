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

#include "mmot/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

MarginalMap validate_map(MarginalMap map, const DiscreteMarginal& marginal) {
  const int m = marginal.size();
  if (map.size() != m) {
    throw MkError(Errc::DimensionMismatch,
                  "relabeling has " + std::to_string(map.size()) +
                      " entries for a support of size " + std::to_string(m));
  }
  std::vector<char> hit(m, 0);
  for (int i = 0; i < m; ++i) {
    const int j = map.perm[i];
    if (j < 0 || j >= m || hit[j]) {
      throw MkError(Errc::InvalidInput, "relabeling is not a permutation");
    }
    hit[j] = 1;
  }
  // Measure preservation must be exact, not approximate: orbit averages rely
  // on every orbit having a single weight value.
  for (int i = 0; i < m; ++i) {
    if (marginal.weights[map.perm[i]] != marginal.weights[i]) {
      throw MkError(Errc::InvalidInput,
                    "relabeling does not preserve weights at index " +
                        std::to_string(i));
    }
  }
  return map;
}

MarginalMap identity_map(int size) {
  MarginalMap map;
  map.perm.resize(size);
  std::iota(map.perm.begin(), map.perm.end(), 0);
  return map;
}

MarginalMap compose(const MarginalMap& outer, const MarginalMap& inner) {
  MarginalMap out;
  out.perm.resize(inner.perm.size());
  for (std::size_t i = 0; i < inner.perm.size(); ++i) {
    out.perm[i] = outer.perm[inner.perm[i]];
  }
  return out;
}

MarginalMap inverse(const MarginalMap& map) {
  MarginalMap out;
  out.perm.resize(map.perm.size());
  for (std::size_t i = 0; i < map.perm.size(); ++i) {
    out.perm[map.perm[i]] = static_cast<int>(i);
  }
  return out;
}

bool maps_equal(const MarginalMap& a, const MarginalMap& b) {
  return a.perm == b.perm;
}

std::int64_t period(const MarginalMap& map) {
  std::int64_t result = 1;
  for (const auto& orbit : orbits(map)) {
    const std::int64_t len = static_cast<std::int64_t>(orbit.size());
    const std::int64_t g = std::gcd(result, len);
    const std::int64_t factor = len / g;
    if (result > (std::int64_t{1} << 62) / factor) {
      throw MkError(Errc::Overflow, "permutation order exceeds 2^62");
    }
    result *= factor;
  }
  return result;
}

std::vector<std::vector<int>> orbits(const MarginalMap& map) {
  const int m = map.size();
  std::vector<char> visited(m, 0);
  std::vector<std::vector<int>> result;
  for (int start = 0; start < m; ++start) {
    if (visited[start]) continue;
    std::vector<int> cycle;
    int i = start;
    while (!visited[i]) {
      visited[i] = 1;
      cycle.push_back(i);
      i = map.perm[i];
    }
    std::sort(cycle.begin(), cycle.end());
    result.push_back(std::move(cycle));
  }
  return result;
}

std::vector<std::vector<int>> joint_orbits(const std::vector<MarginalMap>& maps,
                                           int size) {
  std::vector<char> visited(size, 0);
  std::vector<std::vector<int>> result;
  for (int start = 0; start < size; ++start) {
    if (visited[start]) continue;
    std::vector<int> component{start};
    visited[start] = 1;
    for (std::size_t k = 0; k < component.size(); ++k) {
      for (const auto& map : maps) {
        const int next = map.perm[component[k]];
        if (!visited[next]) {
          visited[next] = 1;
          component.push_back(next);
        }
      }
    }
    std::sort(component.begin(), component.end());
    result.push_back(std::move(component));
  }
  return result;
}

ProductAction validate_action(ProductAction action,
                              const std::vector<DiscreteMarginal>& marginals) {
  if (action.maps.size() != marginals.size()) {
    throw MkError(Errc::DimensionMismatch,
                  "action has " + std::to_string(action.maps.size()) +
                      " component maps for " +
                      std::to_string(marginals.size()) + " marginals");
  }
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    validate_map(action.maps[j], marginals[j]);
  }
  return action;
}

ProductAction identity_action(const std::vector<DiscreteMarginal>& marginals) {
  ProductAction action;
  action.maps.reserve(marginals.size());
  for (const auto& m : marginals) action.maps.push_back(identity_map(m.size()));
  return action;
}

ProductAction compose(const ProductAction& outer, const ProductAction& inner) {
  ProductAction out;
  out.maps.reserve(inner.maps.size());
  for (std::size_t j = 0; j < inner.maps.size(); ++j) {
    out.maps.push_back(compose(outer.maps[j], inner.maps[j]));
  }
  return out;
}

bool actions_equal(const ProductAction& a, const ProductAction& b) {
  if (a.maps.size() != b.maps.size()) return false;
  for (std::size_t j = 0; j < a.maps.size(); ++j) {
    if (!maps_equal(a.maps[j], b.maps[j])) return false;
  }
  return true;
}

bool check_commuting(const ProductAction& a, const ProductAction& b) {
  return actions_equal(compose(a, b), compose(b, a));
}

std::int64_t apply_action(const ProductAction& action, const IndexSpace& space,
                          std::int64_t linear) {
  std::int64_t out = 0;
  for (int j = 0; j < space.arity(); ++j) {
    const int i = static_cast<int>(linear / space.strides[j]);
    linear -= space.strides[j] * i;
    out += space.strides[j] * action.maps[j].perm[i];
  }
  return out;
}

namespace {

std::vector<int> action_key(const ProductAction& action) {
  std::vector<int> key;
  for (const auto& map : action.maps) {
    key.insert(key.end(), map.perm.begin(), map.perm.end());
  }
  return key;
}

}  // namespace

ActionFamily generate_group(std::vector<ProductAction> generators,
                            const std::vector<DiscreteMarginal>& marginals,
                            int max_order) {
  for (auto& g : generators) g = validate_action(std::move(g), marginals);

  ActionFamily family;
  family.generators = generators;
  family.commuting = true;
  for (std::size_t a = 0; a < generators.size(); ++a) {
    for (std::size_t b = a + 1; b < generators.size(); ++b) {
      if (!check_commuting(generators[a], generators[b])) {
        family.commuting = false;
      }
    }
  }

  std::map<std::vector<int>, int> seen;
  family.elements.push_back(identity_action(marginals));
  seen.emplace(action_key(family.elements[0]), 0);
  for (std::size_t head = 0; head < family.elements.size(); ++head) {
    for (const auto& g : generators) {
      ProductAction next = compose(g, family.elements[head]);
      auto key = action_key(next);
      if (seen.count(key)) continue;
      if (static_cast<int>(family.elements.size()) >= max_order) {
        throw MkError(Errc::GroupTooLarge,
                      "generated group exceeds " + std::to_string(max_order) +
                          " elements");
      }
      seen.emplace(std::move(key), static_cast<int>(family.elements.size()));
      family.elements.push_back(std::move(next));
    }
  }
  return family;
}

std::vector<std::vector<std::vector<int>>> family_orbit_partitions(
    const ActionFamily& family, const std::vector<DiscreteMarginal>& marginals) {
  std::vector<std::vector<std::vector<int>>> partitions(marginals.size());
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    std::vector<MarginalMap> component;
    component.reserve(family.generators.size());
    for (const auto& g : family.generators) component.push_back(g.maps[j]);
    partitions[j] = joint_orbits(component, marginals[j].size());
  }
  return partitions;
}

}  // namespace mmot
