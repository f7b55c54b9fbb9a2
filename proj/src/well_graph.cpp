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

#include "mswell/well_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

#include "mswell/errors.hpp"

namespace mswell {

namespace {

constexpr double kPointTolerance = 1e-6;

double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

double edge_orientation(double angle, double epsilon) {
  // cos(pi/2) is not exactly zero in floating point
  if (angle >= std::numbers::pi / 2.0) return 0.0;
  return epsilon * std::sqrt(std::cos(angle)) * (1.0 + std::sin(angle)) * (1.0 + std::sin(angle));
}

int WellMesh::incidence(int a, int v) const {
  const auto& e = edge(a);
  if (e.parent == v) return 1;
  if (e.child == v) return -1;
  throw MeshError("node " + std::to_string(v) + " is not an endpoint of edge " + std::to_string(a));
}

bool WellMesh::precedes_or_equal(int v, int w) const {
  int cur = w;
  while (true) {
    if (cur == v) return true;
    const auto& pe = node(cur).parent_edge;
    if (!pe) return false;
    cur = edge(*pe).parent;
  }
}

double WellMesh::head_section() const {
  const auto& inc = incident_edges(root_);
  if (inc.empty()) throw MeshError("root node has no incident edge");
  return edge(inc.front()).section;
}

double WellMesh::total_volume() const {
  double v = 0.0;
  for (const auto& e : edges_) v += e.section * e.length;
  return v;
}

std::vector<int> WellMesh::leaves() const {
  std::vector<int> out;
  for (const auto& n : nodes_)
    if (n.is_leaf) out.push_back(n.id);
  return out;
}

std::vector<int> WellMesh::path_to_root(int v) const {
  std::vector<int> path{v};
  while (const auto& pe = node(path.back()).parent_edge) path.push_back(edge(*pe).parent);
  return path;
}

int WellMesh::branch_end(const std::string& branch) const {
  auto it = std::find(branch_names_.begin(), branch_names_.end(), branch);
  if (it == branch_names_.end()) throw MeshError("unknown branch '" + branch + "'");
  return branch_nodes_[static_cast<std::size_t>(it - branch_names_.begin())].back();
}

int WellMesh::branch_node_at(const std::string& branch, double arc_length) const {
  auto it = std::find(branch_names_.begin(), branch_names_.end(), branch);
  if (it == branch_names_.end()) throw MeshError("unknown branch '" + branch + "'");
  const auto b = static_cast<std::size_t>(it - branch_names_.begin());
  if (arc_length < -kPointTolerance || arc_length > branch_lengths_[b] + kPointTolerance)
    throw MeshError("arc length outside branch '" + branch + "'");
  const auto& list = branch_nodes_[b];
  const double step = branch_lengths_[b] / static_cast<double>(list.size() - 1);
  const auto k = static_cast<std::size_t>(std::lround(arc_length / step));
  return list[std::min(k, list.size() - 1)];
}

WellMesh build_well_mesh(const std::vector<BranchSpec>& branches, const Point3& root, double default_radius) {
  if (branches.empty()) throw MeshError("well has no branches");
  std::set<std::string> names;
  for (const auto& b : branches) {
    if (!names.insert(b.name).second) throw MeshError("duplicate branch name '" + b.name + "'");
    if (b.segments < 1) throw MeshError("branch '" + b.name + "' needs at least one segment");
    if (distance(b.from, b.to) <= kPointTolerance) throw MeshError("branch '" + b.name + "' has zero length");
    const double r = b.radius.value_or(default_radius);
    if (!(r > 0.0)) throw MeshError("branch '" + b.name + "' radius must be positive");
  }

  // Cluster branch endpoints into junction points.
  std::vector<Point3> points;
  auto point_id = [&](const Point3& x) {
    for (std::size_t k = 0; k < points.size(); ++k)
      if (distance(points[k], x) <= kPointTolerance) return static_cast<int>(k);
    points.push_back(x);
    return static_cast<int>(points.size() - 1);
  };
  std::vector<std::array<int, 2>> ends;
  for (const auto& b : branches) ends.push_back({point_id(b.from), point_id(b.to)});
  int root_point = -1;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (distance(points[k], root) <= kPointTolerance) root_point = static_cast<int>(k);
  if (root_point < 0) throw MeshError("root does not coincide with any branch endpoint");

  WellMesh mesh;
  std::vector<int> point_node(points.size(), -1);
  std::vector<bool> branch_done(branches.size(), false);

  auto add_node = [&](const Point3& x, int branch, double arc) {
    WellNode n;
    n.id = mesh.node_count();
    n.position = x;
    n.branch = branch;
    n.arc_length = arc;
    mesh.nodes_.push_back(n);
    return n.id;
  };

  point_node[static_cast<std::size_t>(root_point)] = add_node(points[static_cast<std::size_t>(root_point)], -1, 0.0);
  mesh.root_ = 0;
  mesh.nodes_[0].is_root = true;
  mesh.branch_names_.resize(branches.size());
  mesh.branch_nodes_.resize(branches.size());
  mesh.branch_lengths_.resize(branches.size());

  std::deque<int> frontier{root_point};
  while (!frontier.empty()) {
    const int pt = frontier.front();
    frontier.pop_front();
    for (std::size_t b = 0; b < branches.size(); ++b) {
      if (branch_done[b]) continue;
      int near = -1, far = -1;
      Point3 from{}, to{};
      if (ends[b][0] == pt) {
        near = ends[b][0]; far = ends[b][1]; from = branches[b].from; to = branches[b].to;
      } else if (ends[b][1] == pt) {
        near = ends[b][1]; far = ends[b][0]; from = branches[b].to; to = branches[b].from;
      } else {
        continue;
      }
      if (near == far) throw MeshError("branch '" + branches[b].name + "' forms a cycle");
      if (point_node[static_cast<std::size_t>(far)] >= 0)
        throw MeshError("branch '" + branches[b].name + "' closes a cycle");
      branch_done[b] = true;
      const int bi = static_cast<int>(b);
      mesh.branch_names_[b] = branches[b].name;
      const double len = distance(from, to);
      mesh.branch_lengths_[b] = len;
      const double radius = branches[b].radius.value_or(default_radius);
      int prev = point_node[static_cast<std::size_t>(near)];
      if (mesh.nodes_[static_cast<std::size_t>(prev)].branch < 0) mesh.nodes_[static_cast<std::size_t>(prev)].branch = bi;
      mesh.branch_nodes_[b].push_back(prev);
      const int nseg = branches[b].segments;
      for (int k = 1; k <= nseg; ++k) {
        const double w = static_cast<double>(k) / nseg;
        Point3 x{from[0] + w * (to[0] - from[0]), from[1] + w * (to[1] - from[1]), from[2] + w * (to[2] - from[2])};
        if (k == nseg) x = to;
        const int cur = add_node(x, bi, w * len);
        mesh.branch_nodes_[b].push_back(cur);

        WellEdge e;
        e.id = mesh.edge_count();
        e.parent = prev;
        e.child = cur;
        e.length = len / nseg;
        e.radius = radius;
        e.section = std::numbers::pi * radius * radius;
        const double dz = mesh.nodes_[static_cast<std::size_t>(prev)].position[2] - x[2];
        const double cosang = std::clamp(std::abs(dz) / e.length, 0.0, 1.0);
        e.angle = std::acos(cosang);
        e.epsilon = dz < -kPointTolerance * 1e-3 ? -1.0 : 1.0;
        if (std::abs(dz) <= 1e-12 * e.length) e.angle = std::numbers::pi / 2.0;
        e.orientation = edge_orientation(e.angle, e.epsilon);
        e.branch = bi;
        mesh.edges_.push_back(e);
        mesh.nodes_[static_cast<std::size_t>(cur)].parent_edge = e.id;
        prev = cur;
      }
      point_node[static_cast<std::size_t>(far)] = prev;
      frontier.push_back(far);
    }
  }
  for (std::size_t b = 0; b < branches.size(); ++b)
    if (!branch_done[b]) throw MeshError("branch '" + branches[b].name + "' is not connected to the root");

  const auto n = static_cast<std::size_t>(mesh.node_count());
  mesh.incident_.assign(n, {});
  mesh.volumes_.assign(n, 0.0);
  for (const auto& e : mesh.edges_) {
    mesh.incident_[static_cast<std::size_t>(e.parent)].push_back(e.id);
    mesh.incident_[static_cast<std::size_t>(e.child)].push_back(e.id);
    mesh.volumes_[static_cast<std::size_t>(e.parent)] += 0.5 * e.section * e.length;
    mesh.volumes_[static_cast<std::size_t>(e.child)] += 0.5 * e.section * e.length;
  }
  if (mesh.incident_[static_cast<std::size_t>(mesh.root_)].size() != 1)
    throw MeshError("the head node must end exactly one branch");
  for (auto& node : mesh.nodes_) node.is_leaf = !node.is_root && mesh.incident_[static_cast<std::size_t>(node.id)].size() == 1;

  // Breadth-first order from the root, then reversed.
  std::vector<std::vector<int>> children(n);
  for (const auto& e : mesh.edges_) children[static_cast<std::size_t>(e.parent)].push_back(e.child);
  std::vector<int> order{mesh.root_};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int c : children[static_cast<std::size_t>(order[k])]) order.push_back(c);
  mesh.upward_order_.assign(order.rbegin(), order.rend());
  return mesh;
}

}  // namespace mswell
