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

#ifndef MSWELL_WELL_GRAPH_HPP
#define MSWELL_WELL_GRAPH_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mswell {

using Point3 = std::array<double, 3>;

struct WellNode {
  int id = 0;
  Point3 position{};
  std::optional<int> parent_edge;  // absent for the root
  bool is_root = false;
  bool is_leaf = false;
  int branch = -1;                 // branch owning the node (junctions belong to the upstream branch)
  double arc_length = 0.0;         // distance from the branch start, m
};

/// Edge a = v v' with v the parent (closer to the root) and v' the child.
struct WellEdge {
  int id = 0;
  int parent = 0;
  int child = 0;
  double length = 0.0;   // m
  double radius = 0.0;   // m
  double section = 0.0;  // m2, pi r^2
  double angle = 0.0;    // angle to the vertical in [0, pi/2]
  double epsilon = 1.0;  // +1 when z increases towards the root
  double orientation = 0.0;
  int branch = -1;
};

struct BranchSpec {
  std::string name;
  Point3 from{};
  Point3 to{};
  int segments = 1;
  std::optional<double> radius;  // per-branch override
};

/// o = eps cos(theta)^(1/2) (1 + sin theta)^2.
double edge_orientation(double angle, double epsilon);
inline double edge_orientation(const WellEdge& e) { return edge_orientation(e.angle, e.epsilon); }

/// Rooted tree of well nodes and edges oriented away from the root.
class WellMesh {
 public:
  const std::vector<WellNode>& nodes() const { return nodes_; }
  const std::vector<WellEdge>& edges() const { return edges_; }
  const WellNode& node(int v) const { return nodes_[static_cast<std::size_t>(v)]; }
  const WellEdge& edge(int a) const { return edges_[static_cast<std::size_t>(a)]; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int root() const { return root_; }
  const std::vector<std::string>& branch_names() const { return branch_names_; }

  /// Edges sharing node v.
  const std::vector<int>& incident_edges(int v) const { return incident_[static_cast<std::size_t>(v)]; }
  /// +1 if v is the parent of edge a, -1 if the child.
  int incidence(int a, int v) const;
  /// True when the path from the root to w passes through v (v <= w).
  bool precedes_or_equal(int v, int w) const;
  /// Section at the head node: that of the edge incident to the root.
  double head_section() const;
  /// Control volume sum_{a in E_v} |S_a| |a| / 2.
  double node_volume(int v) const { return volumes_[static_cast<std::size_t>(v)]; }
  double total_volume() const;
  double z(int v) const { return node(v).position[2]; }
  /// Nodes ordered leaves-first (reverse breadth-first from the root).
  const std::vector<int>& leaf_to_root_order() const { return upward_order_; }
  std::vector<int> leaves() const;
  int degree(int v) const { return static_cast<int>(incident_edges(v).size()); }
  /// Path from v up to the root, v first.
  std::vector<int> path_to_root(int v) const;

  /// Last node of the named branch (its far end from the root).
  int branch_end(const std::string& branch) const;
  /// Node of the named branch closest to the given arc length from its start.
  int branch_node_at(const std::string& branch, double arc_length) const;

  friend WellMesh build_well_mesh(const std::vector<BranchSpec>& branches, const Point3& root, double default_radius);

 private:
  std::vector<WellNode> nodes_;
  std::vector<WellEdge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<double> volumes_;
  std::vector<int> upward_order_;
  std::vector<std::string> branch_names_;
  std::vector<std::vector<int>> branch_nodes_;  // ordered from the branch start, including the start node
  std::vector<double> branch_lengths_;
  int root_ = 0;
};

/// Mesh each branch uniformly and connect branches at coinciding endpoints.
/// Branch endpoints are matched within 1e-6 m; orientation is derived from
/// the root, so branches may be listed in any direction.
WellMesh build_well_mesh(const std::vector<BranchSpec>& branches, const Point3& root, double default_radius);

}  // namespace mswell

#endif  // MSWELL_WELL_GRAPH_HPP
