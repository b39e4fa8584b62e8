#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace contactdd {

using Vec2 = Eigen::Vector2d;

enum class TagKind { Dirichlet, Neumann, Contact };

/// Which displacement components a Dirichlet tag constrains.
enum class Components { Both, X, Y };

/// Label carried by a boundary edge. `id` groups edges sharing data (a
/// traction, a prescribed displacement); for Contact tags it is the pair id.
struct BoundaryTag {
  TagKind kind = TagKind::Neumann;
  int id = 0;
  Components components = Components::Both;

  static BoundaryTag dirichlet(int id, Components c = Components::Both) {
    return {TagKind::Dirichlet, id, c};
  }
  static BoundaryTag neumann(int id) { return {TagKind::Neumann, id, Components::Both}; }
  static BoundaryTag contact(int pair_id) {
    return {TagKind::Contact, pair_id, Components::Both};
  }

  friend bool operator==(const BoundaryTag&, const BoundaryTag&) = default;
};

/// A boundary edge: local edge `local_edge` of triangle `element`.
/// Local edge j joins corners j and (j+1)%3; its midside node (order 2) is
/// local node 3+j.
struct BoundaryEdge {
  int element = 0;
  int local_edge = 0;
  std::optional<BoundaryTag> tag;
};

/// Axis-aligned segment used to select boundary edges.
struct Segment {
  Vec2 from;
  Vec2 to;
};

/// Triangulated body. Elements list corners first, then midside nodes.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Vec2> nodes, std::vector<int> connectivity, int order,
       std::vector<BoundaryEdge> boundary);

  int order() const noexcept { return order_; }
  int nodes_per_element() const noexcept { return order_ == 1 ? 3 : 6; }
  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  int element_count() const noexcept {
    return static_cast<int>(connectivity_.size()) / nodes_per_element();
  }

  const std::vector<Vec2>& nodes() const noexcept { return nodes_; }
  const Vec2& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::span<const int> element(int e) const;

  const std::vector<BoundaryEdge>& boundary_edges() const noexcept { return boundary_; }
  std::vector<BoundaryEdge>& boundary_edges() noexcept { return boundary_; }

  /// Global node indices of a boundary edge: two corners, plus the midside
  /// node for quadratic meshes.
  std::vector<int> edge_nodes(const BoundaryEdge& edge) const;

  /// Signed area of element `e` computed from its corners.
  double signed_area(int e) const;

  /// Diagonal of the bounding box.
  double diameter() const;

 private:
  std::vector<Vec2> nodes_;
  std::vector<int> connectivity_;
  int order_ = 1;
  std::vector<BoundaryEdge> boundary_;
};

/// Uniform structured mesh of the rectangle [origin, origin + (width, height)]
/// with 2*nx*ny triangles. All boundary edges start untagged.
Mesh generate_rect_mesh(const Vec2& origin, double width, double height, int nx, int ny,
                        int order);

/// Structured mesh over the tensor grid `xs` x `ys` (strictly increasing
/// breakpoints). Used for graded meshes.
Mesh generate_grid_mesh(std::span<const double> xs, std::span<const double> ys, int order);

/// Breakpoints on [start, end] whose first cell (at `start`) has size
/// `first` and each following cell grows by `growth`, rescaled to end at
/// `end`. growth == 1 gives a uniform partition of cell size ~first.
std::vector<double> graded_breakpoints(double start, double end, double first, double growth);

/// Tags every boundary edge lying inside `selector`. Re-tagging replaces the
/// previous tag unless it would swap Contact and Dirichlet.
Mesh tag_boundary(Mesh mesh, const Segment& selector, const BoundaryTag& tag);

/// Nodes of the edges tagged Contact(pair_id), sorted by the coordinate along
/// the contact line. Includes midside nodes for quadratic meshes.
std::vector<int> contact_trace_nodes(const Mesh& mesh, int pair_id);

/// Throws MeshError if any boundary edge is untagged.
void require_fully_tagged(const Mesh& mesh);

/// Debug dump: node, element and tag tables.
void write_mesh_text(std::ostream& os, const Mesh& mesh);

}  // namespace contactdd
