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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/group.hpp"
#include "oracles.hpp"

using namespace mmot;
using mmot_tests::error_code_of;
using mmot_tests::line_marginal;
using mmot_tests::uniform_line;

namespace {

MarginalMap cycle_map(int m) {
  MarginalMap map;
  map.perm.resize(m);
  for (int i = 0; i < m; ++i) map.perm[i] = (i + 1) % m;
  return map;
}

}  // namespace

TEST_CASE("validate_map checks bijectivity and weights") {
  const DiscreteMarginal uniform = uniform_line(4);

  SUBCASE("cyclic shift of a uniform measure passes") {
    CHECK(!error_code_of([&] { validate_map(cycle_map(4), uniform); }));
  }
  SUBCASE("wrong length") {
    CHECK(error_code_of([&] { validate_map(cycle_map(3), uniform); }) ==
          Errc::DimensionMismatch);
  }
  SUBCASE("repeated target") {
    MarginalMap bad;
    bad.perm = {0, 0, 2, 3};
    CHECK(error_code_of([&] { validate_map(bad, uniform); }) ==
          Errc::InvalidInput);
  }
  SUBCASE("out of range target") {
    MarginalMap bad;
    bad.perm = {0, 1, 2, 4};
    CHECK(error_code_of([&] { validate_map(bad, uniform); }) ==
          Errc::InvalidInput);
  }
  SUBCASE("weights must match exactly along the permutation") {
    const DiscreteMarginal skewed = line_marginal({0.4, 0.3, 0.2, 0.1});
    CHECK(error_code_of([&] { validate_map(cycle_map(4), skewed); }) ==
          Errc::InvalidInput);
    MarginalMap within_level;
    within_level.perm = {0, 1, 3, 2};
    const DiscreteMarginal paired = line_marginal({0.4, 0.2, 0.2, 0.2});
    CHECK(!error_code_of([&] { validate_map(within_level, paired); }));
  }
}

TEST_CASE("map algebra") {
  const MarginalMap c = cycle_map(5);

  SUBCASE("compose and inverse") {
    const MarginalMap c2 = compose(c, c);
    CHECK(c2.perm == std::vector<int>{2, 3, 4, 0, 1});
    CHECK(maps_equal(compose(inverse(c), c), identity_map(5)));
    CHECK(maps_equal(compose(c, inverse(c)), identity_map(5)));
  }
  SUBCASE("period of a 5-cycle is 5") {
    CHECK(period(c) == 5);
    CHECK(period(identity_map(7)) == 1);
    MarginalMap mixed;
    mixed.perm = {1, 0, 3, 4, 2};
    CHECK(period(mixed) == 6);
  }
  SUBCASE("orbits list cycles by smallest member") {
    MarginalMap mixed;
    mixed.perm = {1, 0, 3, 4, 2};
    const auto parts = orbits(mixed);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == std::vector<int>{0, 1});
    CHECK(parts[1] == std::vector<int>{2, 3, 4});
  }
  SUBCASE("joint orbits merge the transition graphs") {
    MarginalMap swap01;
    swap01.perm = {1, 0, 2, 3};
    MarginalMap swap23;
    swap23.perm = {0, 1, 3, 2};
    const auto parts = joint_orbits({swap01, swap23}, 4);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == std::vector<int>{0, 1});
    CHECK(parts[1] == std::vector<int>{2, 3});
    CHECK(joint_orbits({}, 3).size() == 3);
  }
}

TEST_CASE("product actions act componentwise on linear indices") {
  const std::vector<DiscreteMarginal> marginals = {uniform_line(3),
                                                   uniform_line(4)};
  const IndexSpace space = make_index_space(marginals);
  ProductAction action;
  action.maps = {cycle_map(3), cycle_map(4)};
  action = validate_action(action, marginals);

  std::vector<int> tuple;
  for (std::int64_t idx = 0; idx < space.total; ++idx) {
    space.decode(idx, tuple);
    const std::int64_t image = apply_action(action, space, idx);
    std::vector<int> expected = {(tuple[0] + 1) % 3, (tuple[1] + 1) % 4};
    CHECK(image == space.encode(expected));
  }

  SUBCASE("arity mismatch is rejected") {
    ProductAction bad;
    bad.maps = {cycle_map(3)};
    CHECK(error_code_of([&] { validate_action(bad, marginals); }) ==
          Errc::DimensionMismatch);
  }
}

TEST_CASE("commuting check compares both composition orders") {
  const std::vector<DiscreteMarginal> marginals = {uniform_line(4),
                                                   uniform_line(4)};
  ProductAction rot;
  rot.maps = {cycle_map(4), cycle_map(4)};
  ProductAction rot2 = compose(rot, rot);
  CHECK(check_commuting(rot, rot2));

  ProductAction swap01;
  swap01.maps = {MarginalMap{{1, 0, 2, 3}}, identity_map(4)};
  CHECK(!check_commuting(rot, swap01));
}

TEST_CASE("generate_group closes the generators") {
  const std::vector<DiscreteMarginal> marginals = {uniform_line(4),
                                                   uniform_line(4)};

  SUBCASE("a 4-cycle generates a group of order 4") {
    ProductAction rot;
    rot.maps = {cycle_map(4), cycle_map(4)};
    const ActionFamily family = generate_group({rot}, marginals);
    CHECK(family.elements.size() == 4);
    CHECK(family.commuting);
    CHECK(actions_equal(family.elements[0], identity_action(marginals)));
    for (const auto& g : family.elements) {
      CHECK(!error_code_of([&] { validate_action(g, marginals); }));
    }
  }
  SUBCASE("empty generators give the trivial group") {
    const ActionFamily family = generate_group({}, marginals);
    CHECK(family.elements.size() == 1);
    CHECK(actions_equal(family.elements[0], identity_action(marginals)));
  }
  SUBCASE("two swaps generate a dihedral-size family") {
    ProductAction a;
    a.maps = {MarginalMap{{1, 0, 2, 3}}, identity_map(4)};
    ProductAction b;
    b.maps = {MarginalMap{{0, 2, 1, 3}}, identity_map(4)};
    const ActionFamily family = generate_group({a, b}, marginals);
    CHECK(family.elements.size() == 6);
    CHECK(!family.commuting);
  }
  SUBCASE("order cap throws GroupTooLarge") {
    ProductAction rot;
    rot.maps = {cycle_map(4), cycle_map(4)};
    CHECK(error_code_of([&] { generate_group({rot}, marginals, 3); }) ==
          Errc::GroupTooLarge);
  }
}

TEST_CASE("family orbit partitions follow the generators per marginal") {
  const std::vector<DiscreteMarginal> marginals = {uniform_line(4),
                                                   uniform_line(2)};
  ProductAction action;
  action.maps = {MarginalMap{{1, 0, 3, 2}}, identity_map(2)};
  const ActionFamily family = generate_group({action}, marginals);
  const auto parts = family_orbit_partitions(family, marginals);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  CHECK(parts[1] == std::vector<std::vector<int>>{{0}, {1}});
}
