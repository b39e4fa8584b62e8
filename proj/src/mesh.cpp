#include "contactdd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

#include "contactdd/errors.hpp"

namespace contactdd {

namespace {

int local_corner(int edge, int end) { return (edge + end) % 3; }

const char* kind_name(TagKind kind) {
  switch (kind) {
    case TagKind::Dirichlet:
      return "dirichlet";
    case TagKind::Neumann:
      return "neumann";
    case TagKind::Contact:
      return "contact";
  }
  return "?";
}

const char* components_name(Components c) {
  switch (c) {
    case Components::Both:
      return "xy";
    case Components::X:
      return "x";
    case Components::Y:
      return "y";
  }
  return "?";
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<int> connectivity, int order,
           std::vector<BoundaryEdge> boundary)
    : nodes_(std::move(nodes)),
      connectivity_(std::move(connectivity)),
      order_(order),
      boundary_(std::move(boundary)) {
  if (order_ != 1 && order_ != 2) {
    throw InvalidArgument("element order must be 1 or 2");
  }
  if (connectivity_.size() % static_cast<std::size_t>(nodes_per_element()) != 0) {
    throw MeshError("connectivity size is not a multiple of nodes per element");
  }
  for (int idx : connectivity_) {
    if (idx < 0 || idx >= node_count()) {
      throw MeshError("element references node " + std::to_string(idx) + " out of range");
    }
  }
  for (int e = 0; e < element_count(); ++e) {
    if (!(signed_area(e) > 0.0)) {
      throw MeshError("element " + std::to_string(e) + " has non-positive area");
    }
  }
  for (const auto& edge : boundary_) {
    if (edge.element < 0 || edge.element >= element_count() || edge.local_edge < 0 ||
        edge.local_edge > 2) {
      throw MeshError("boundary edge references an invalid element side");
    }
  }
}

std::span<const int> Mesh::element(int e) const {
  const auto npe = static_cast<std::size_t>(nodes_per_element());
  return {connectivity_.data() + static_cast<std::size_t>(e) * npe, npe};
}

std::vector<int> Mesh::edge_nodes(const BoundaryEdge& edge) const {
  const auto el = element(edge.element);
  std::vector<int> out{el[static_cast<std::size_t>(local_corner(edge.local_edge, 0))],
                       el[static_cast<std::size_t>(local_corner(edge.local_edge, 1))]};
  if (order_ == 2) {
    out.push_back(el[static_cast<std::size_t>(3 + edge.local_edge)]);
  }
  return out;
}

double Mesh::signed_area(int e) const {
  const auto el = element(e);
  const Vec2& a = node(el[0]);
  const Vec2& b = node(el[1]);
  const Vec2& c = node(el[2]);
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double Mesh::diameter() const {
  if (nodes_.empty()) return 0.0;
  Vec2 lo = nodes_.front();
  Vec2 hi = nodes_.front();
  for (const auto& p : nodes_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

std::vector<double> graded_breakpoints(double start, double end, double first, double growth) {
  if (!(end > start) || !(first > 0.0) || !(growth >= 1.0)) {
    throw InvalidArgument("graded_breakpoints: need end > start, first > 0, growth >= 1");
  }
  const double length = end - start;
  std::vector<double> sizes;
  double total = 0.0;
  double h = first;
  while (total + 0.5 * h < length) {
    sizes.push_back(h);
    total += h;
    h *= growth;
  }
  if (sizes.empty()) {
    sizes.push_back(length);
    total = length;
  }
  std::vector<double> out{start};
  double acc = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    acc += sizes[i];
    out.push_back(i + 1 == sizes.size() ? end : start + acc * length / total);
  }
  return out;
}

Mesh generate_grid_mesh(std::span<const double> xs, std::span<const double> ys, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("element order must be 1 or 2");
  if (xs.size() < 2 || ys.size() < 2) throw InvalidArgument("grid needs at least one cell");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw InvalidArgument("x breakpoints must increase strictly");
  }
  for (std::size_t j = 1; j < ys.size(); ++j) {
    if (!(ys[j] > ys[j - 1])) throw InvalidArgument("y breakpoints must increase strictly");
  }
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  const int s = order;  // grid index stride per cell
  const int gx = s * nx + 1;
  const int gy = s * ny + 1;

  auto coord = [&](std::span<const double> bp, int g) {
    if (g % s == 0) return bp[static_cast<std::size_t>(g / s)];
    const auto c = static_cast<std::size_t>(g / s);
    return 0.5 * (bp[c] + bp[c + 1]);
  };

  std::vector<Vec2> nodes;
  nodes.reserve(static_cast<std::size_t>(gx) * static_cast<std::size_t>(gy));
  for (int J = 0; J < gy; ++J) {
    for (int I = 0; I < gx; ++I) nodes.emplace_back(coord(xs, I), coord(ys, J));
  }
  auto id = [gx](int I, int J) { return J * gx + I; };

  std::vector<int> conn;
  std::vector<BoundaryEdge> boundary;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int I = s * i;
      const int J = s * j;
      const int bl = id(I, J), br = id(I + s, J), tr = id(I + s, J + s), tl = id(I, J + s);
      const int ea = 2 * (j * nx + i);
      const int eb = ea + 1;
      conn.insert(conn.end(), {bl, br, tr});
      if (order == 2) conn.insert(conn.end(), {id(I + 1, J), id(I + 2, J + 1), id(I + 1, J + 1)});
      conn.insert(conn.end(), {bl, tr, tl});
      if (order == 2) conn.insert(conn.end(), {id(I + 1, J + 1), id(I + 1, J + 2), id(I, J + 1)});
      if (j == 0) boundary.push_back({ea, 0, std::nullopt});
      if (i == nx - 1) boundary.push_back({ea, 1, std::nullopt});
      if (j == ny - 1) boundary.push_back({eb, 1, std::nullopt});
      if (i == 0) boundary.push_back({eb, 2, std::nullopt});
    }
  }
  return Mesh(std::move(nodes), std::move(conn), order, std::move(boundary));
}

Mesh generate_rect_mesh(const Vec2& origin, double width, double height, int nx, int ny,
                        int order) {
  if (!(width > 0.0) || !(height > 0.0)) throw InvalidArgument("rectangle extent must be positive");
  if (nx < 1 || ny < 1) throw InvalidArgument("subdivision counts must be at least 1");
  std::vector<double> xs(static_cast<std::size_t>(nx) + 1);
  std::vector<double> ys(static_cast<std::size_t>(ny) + 1);
  for (int i = 0; i <= nx; ++i) xs[static_cast<std::size_t>(i)] = origin.x() + width * i / nx;
  for (int j = 0; j <= ny; ++j) ys[static_cast<std::size_t>(j)] = origin.y() + height * j / ny;
  xs.back() = origin.x() + width;
  ys.back() = origin.y() + height;
  return generate_grid_mesh(xs, ys, order);
}

Mesh tag_boundary(Mesh mesh, const Segment& selector, const BoundaryTag& tag) {
  const double tol = 1e-9 * mesh.diameter();
  const bool vertical = std::abs(selector.from.x() - selector.to.x()) <= tol;
  const bool horizontal = std::abs(selector.from.y() - selector.to.y()) <= tol;
  if (!vertical && !horizontal) throw InvalidArgument("boundary selector must be axis-aligned");

  const Vec2 lo = selector.from.cwiseMin(selector.to);
  const Vec2 hi = selector.from.cwiseMax(selector.to);
  auto inside = [&](const Vec2& p) {
    return p.x() >= lo.x() - tol && p.x() <= hi.x() + tol && p.y() >= lo.y() - tol &&
           p.y() <= hi.y() + tol;
  };

  std::vector<std::size_t> hits;
  for (std::size_t k = 0; k < mesh.boundary_edges().size(); ++k) {
    const auto nodes = mesh.edge_nodes(mesh.boundary_edges()[k]);
    if (inside(mesh.node(nodes[0])) && inside(mesh.node(nodes[1]))) hits.push_back(k);
  }
  if (hits.empty()) throw NoMatchError("boundary selector matches no boundary edge");

  for (std::size_t k : hits) {
    const auto& old = mesh.boundary_edges()[k].tag;
    if (old && ((old->kind == TagKind::Contact && tag.kind == TagKind::Dirichlet) ||
                (old->kind == TagKind::Dirichlet && tag.kind == TagKind::Contact))) {
      throw TagConflictError("contact and Dirichlet tags overlap on a boundary edge");
    }
  }
  for (std::size_t k : hits) mesh.boundary_edges()[k].tag = tag;
  return mesh;
}

std::vector<int> contact_trace_nodes(const Mesh& mesh, int pair_id) {
  std::set<int> unique;
  Vec2 tangent = Vec2::Zero();
  for (const auto& edge : mesh.boundary_edges()) {
    if (!edge.tag || edge.tag->kind != TagKind::Contact || edge.tag->id != pair_id) continue;
    const auto nodes = mesh.edge_nodes(edge);
    if (tangent.isZero()) tangent = (mesh.node(nodes[1]) - mesh.node(nodes[0])).normalized();
    unique.insert(nodes.begin(), nodes.end());
  }
  if (unique.empty()) {
    throw NoMatchError("no boundary edge is tagged with contact pair " + std::to_string(pair_id));
  }
  // Orient the tangent toward increasing x (or y for vertical interfaces).
  if (tangent.x() < 0.0 || (tangent.x() == 0.0 && tangent.y() < 0.0)) tangent = -tangent;

  std::vector<int> out(unique.begin(), unique.end());
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    return mesh.node(a).dot(tangent) < mesh.node(b).dot(tangent);
  });
  return out;
}

void require_fully_tagged(const Mesh& mesh) {
  for (const auto& edge : mesh.boundary_edges()) {
    if (!edge.tag) {
      const auto nodes = mesh.edge_nodes(edge);
      const Vec2& p = mesh.node(nodes[0]);
      throw MeshError("untagged boundary edge at (" + std::to_string(p.x()) + ", " +
                      std::to_string(p.y()) + ")");
    }
  }
}

void write_mesh_text(std::ostream& os, const Mesh& mesh) {
  os << "# nodes " << mesh.node_count() << "\n";
  os.precision(17);
  for (int i = 0; i < mesh.node_count(); ++i) {
    os << i << ' ' << mesh.node(i).x() << ' ' << mesh.node(i).y() << "\n";
  }
  os << "# elements " << mesh.element_count() << " order " << mesh.order() << "\n";
  for (int e = 0; e < mesh.element_count(); ++e) {
    os << e;
    for (int n : mesh.element(e)) os << ' ' << n;
    os << "\n";
  }
  os << "# boundary " << mesh.boundary_edges().size() << "\n";
  for (const auto& edge : mesh.boundary_edges()) {
    os << edge.element << ' ' << edge.local_edge << ' ';
    if (edge.tag) {
      os << kind_name(edge.tag->kind) << ' ' << edge.tag->id << ' '
         << components_name(edge.tag->components);
    } else {
      os << "untagged";
    }
    os << "\n";
  }
}

}  // namespace contactdd
