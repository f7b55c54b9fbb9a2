/*
 * Copyright 2026 The mswell Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <vector>

#include "mswell/errors.hpp"
#include "mswell/well_graph.hpp"
#include "oracles/derived_values.hpp"
#include "support.hpp"

using namespace mswell;
using testing::Gen;

namespace {

/// Random tree: each branch starts at the root or at the far end of an
/// earlier branch; only the first branch touches the root.
std::vector<BranchSpec> random_branches(Gen& g, int count) {
  std::vector<BranchSpec> out;
  std::vector<Point3> ends;
  for (int b = 0; b < count; ++b) {
    BranchSpec s;
    s.name = "b" + std::to_string(b);
    s.from = b == 0 ? Point3{0.0, 0.0, 0.0} : ends[static_cast<std::size_t>(g.integer(0, b - 1))];
    const double len = g.uniform(5.0, 300.0);
    const double theta = g.coin(0.2) ? (g.coin() ? 0.0 : std::numbers::pi / 2) : g.uniform(0.0, std::numbers::pi);
    const double phi = g.uniform(0.0, 2 * std::numbers::pi);
    s.to = {s.from[0] + len * std::sin(theta) * std::cos(phi), s.from[1] + len * std::sin(theta) * std::sin(phi),
            s.from[2] - len * std::cos(theta)};
    s.segments = g.integer(1, 12);
    if (g.coin(0.3)) s.radius = g.uniform(0.02, 0.2);
    ends.push_back(s.to);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("edge orientation") {
  CHECK(edge_orientation(std::numbers::pi / 4, 1.0) == doctest::Approx(derived::kOrientationQuarterPi).epsilon(1e-14));
  CHECK(edge_orientation(0.0, 1.0) == 1.0);
  CHECK(edge_orientation(0.0, -1.0) == -1.0);
  CHECK(edge_orientation(std::numbers::pi / 2, 1.0) == 0.0);
  Gen g(21);
  for (int k = 0; k < 10000; ++k) {
    const double theta = g.uniform(0.0, std::numbers::pi / 2 * (1 - 1e-12));
    const double o = edge_orientation(theta, g.coin() ? 1.0 : -1.0);
    CHECK(std::abs(o) <= 4.0);
    CHECK(o != 0.0);
  }
}

TEST_CASE("vertical column") {
  const auto mesh = build_well_mesh({{"main", {0, 0, 0}, {0, 0, -100}, 10, {}}}, {0, 0, 0}, 0.1);
  CHECK(mesh.node_count() == 11);
  CHECK(mesh.edge_count() == 10);
  CHECK(mesh.leaves().size() == 1);
  CHECK(mesh.head_section() == doctest::Approx(std::numbers::pi * 0.01));
  CHECK(mesh.total_volume() == doctest::Approx(std::numbers::pi * 0.01 * 100));
  for (const auto& e : mesh.edges()) {
    CHECK(e.length == doctest::Approx(10.0));
    CHECK(e.orientation > 0.0);
    CHECK(mesh.z(e.parent) > mesh.z(e.child));
  }
  CHECK(mesh.node_volume(mesh.root()) == doctest::Approx(0.5 * mesh.node_volume(5)));
  CHECK(mesh.branch_end("main") == mesh.leaves().front());
  CHECK(mesh.z(mesh.branch_node_at("main", 30.0)) == doctest::Approx(-30.0));
}

TEST_CASE("random trees satisfy the mesh invariants") {
  Gen g(22);
  for (int trial = 0; trial < 300; ++trial) {
    const auto branches = random_branches(g, g.integer(1, 6));
    const double r0 = g.uniform(0.03, 0.1);
    const auto mesh = build_well_mesh(branches, {0, 0, 0}, r0);
    int expected_edges = 0;
    for (const auto& b : branches) expected_edges += b.segments;
    CHECK(mesh.edge_count() == expected_edges);
    CHECK(mesh.edge_count() == mesh.node_count() - 1);
    CHECK(mesh.degree(mesh.root()) == 1);

    // breadth-first reachability from the root
    std::vector<char> seen(static_cast<std::size_t>(mesh.node_count()), 0);
    std::queue<int> todo;
    todo.push(mesh.root());
    seen[static_cast<std::size_t>(mesh.root())] = 1;
    int reached = 1;
    while (!todo.empty()) {
      const int v = todo.front();
      todo.pop();
      for (int a : mesh.incident_edges(v)) {
        const auto& e = mesh.edge(a);
        const int w = e.parent == v ? e.child : e.parent;
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          todo.push(w);
        }
      }
    }
    CHECK(reached == mesh.node_count());

    double volume_edges = 0.0, volume_nodes = 0.0;
    for (const auto& e : mesh.edges()) {
      CHECK(e.length > 0.0);
      CHECK(e.section == doctest::Approx(std::numbers::pi * e.radius * e.radius).epsilon(1e-14));
      CHECK(mesh.incidence(e.id, e.parent) + mesh.incidence(e.id, e.child) == 0);
      CHECK(mesh.incidence(e.id, e.parent) == 1);
      CHECK(mesh.node(e.child).parent_edge == e.id);
      CHECK(std::abs(e.orientation) <= 4.0);
      CHECK((e.orientation == 0.0) == (std::abs(mesh.z(e.parent) - mesh.z(e.child)) < 1e-9 * e.length));
      if (mesh.z(e.parent) > mesh.z(e.child) + 1e-9 * e.length) CHECK(e.orientation > 0.0);
      if (mesh.z(e.parent) < mesh.z(e.child) - 1e-9 * e.length) CHECK(e.orientation < 0.0);
      volume_edges += e.section * e.length;
    }
    for (int v = 0; v < mesh.node_count(); ++v) {
      volume_nodes += mesh.node_volume(v);
      const auto path = mesh.path_to_root(v);
      CHECK(path.front() == v);
      CHECK(path.back() == mesh.root());
      CHECK(std::set<int>(path.begin(), path.end()).size() == path.size());
      CHECK(mesh.precedes_or_equal(mesh.root(), v));
      CHECK(mesh.node(v).is_root == (v == mesh.root()));
      CHECK(mesh.node(v).is_leaf == (v != mesh.root() && mesh.degree(v) == 1));
    }
    CHECK(volume_nodes == doctest::Approx(volume_edges).epsilon(1e-13));
    CHECK(mesh.total_volume() == doctest::Approx(volume_edges).epsilon(1e-13));

    // leaf-to-root order visits every child before its parent
    const auto& order = mesh.leaf_to_root_order();
    CHECK(static_cast<int>(order.size()) == mesh.node_count());
    std::vector<int> position(static_cast<std::size_t>(mesh.node_count()), -1);
    for (std::size_t k = 0; k < order.size(); ++k) position[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    for (const auto& e : mesh.edges())
      CHECK(position[static_cast<std::size_t>(e.child)] < position[static_cast<std::size_t>(e.parent)]);
  }
}

TEST_CASE("malformed wells are rejected") {
  CHECK_THROWS_AS(build_well_mesh({}, {0, 0, 0}, 0.1), MeshError);
  CHECK_THROWS_AS(build_well_mesh({{"a", {0, 0, 0}, {0, 0, -1}, 0, {}}}, {0, 0, 0}, 0.1), MeshError);
  CHECK_THROWS_AS(build_well_mesh({{"a", {0, 0, 0}, {0, 0, 0}, 1, {}}}, {0, 0, 0}, 0.1), MeshError);
  CHECK_THROWS_AS(build_well_mesh({{"a", {0, 0, 0}, {0, 0, -1}, 1, {}}}, {5, 0, 0}, 0.1), MeshError);
  CHECK_THROWS_AS(build_well_mesh({{"a", {0, 0, 0}, {0, 0, -1}, 1, {}}, {"b", {3, 0, -5}, {3, 0, -6}, 1, {}}},
                                  {0, 0, 0}, 0.1),
                  MeshError);
  CHECK_THROWS_AS(build_well_mesh({{"a", {0, 0, 0}, {0, 0, -1}, 1, {}}, {"a", {0, 0, -1}, {0, 0, -2}, 1, {}}},
                                  {0, 0, 0}, 0.1),
                  MeshError);
  CHECK_THROWS_AS(build_well_mesh({{"a", {0, 0, 0}, {0, 0, -1}, 1, -0.1}}, {0, 0, 0}, 0.1), MeshError);
  // Two branches leaving the head.
  CHECK_THROWS_AS(build_well_mesh({{"a", {0, 0, 0}, {0, 0, -1}, 1, {}}, {"b", {0, 0, 0}, {1, 0, 0}, 1, {}}}, {0, 0, 0}, 0.1),
                  MeshError);
  const auto mesh = build_well_mesh({{"a", {0, 0, 0}, {0, 0, -10}, 2, {}}}, {0, 0, 0}, 0.1);
  CHECK_THROWS_AS(mesh.branch_end("nope"), MeshError);
  CHECK_THROWS_AS(mesh.branch_node_at("a", 11.0), MeshError);
}
