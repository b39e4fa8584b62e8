#include "contactdd/fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/LU>

#include "contactdd/errors.hpp"

namespace contactdd {

namespace {

struct TriPoint {
  double xi, eta, weight;  // weights sum to the reference area 1/2
};

const std::vector<TriPoint>& triangle_rule(int order) {
  static const std::vector<TriPoint> three{
      {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
  };
  static const std::vector<TriPoint> seven = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0;
    const double w1 = (155.0 - s15) / 2400.0;
    const double w2 = (155.0 + s15) / 2400.0;
    return std::vector<TriPoint>{
        {1.0 / 3.0, 1.0 / 3.0, 9.0 / 80.0},
        {a1, a1, w1},
        {1.0 - 2.0 * a1, a1, w1},
        {a1, 1.0 - 2.0 * a1, w1},
        {a2, a2, w2},
        {1.0 - 2.0 * a2, a2, w2},
        {a2, 1.0 - 2.0 * a2, w2},
    };
  }();
  return order == 1 ? three : seven;
}

// Shape values and reference gradients at (xi, eta).
void triangle_shape(int order, double xi, double eta, Eigen::VectorXd& N,
                    Eigen::MatrixXd& dN) {
  const double l0 = 1.0 - xi - eta;
  if (order == 1) {
    N.resize(3);
    dN.resize(3, 2);
    N << l0, xi, eta;
    dN << -1.0, -1.0, 1.0, 0.0, 0.0, 1.0;
    return;
  }
  N.resize(6);
  dN.resize(6, 2);
  N << l0 * (2.0 * l0 - 1.0), xi * (2.0 * xi - 1.0), eta * (2.0 * eta - 1.0), 4.0 * l0 * xi,
      4.0 * xi * eta, 4.0 * eta * l0;
  dN << 1.0 - 4.0 * l0, 1.0 - 4.0 * l0,  //
      4.0 * xi - 1.0, 0.0,               //
      0.0, 4.0 * eta - 1.0,              //
      4.0 * (l0 - xi), -4.0 * xi,        //
      4.0 * eta, 4.0 * xi,               //
      -4.0 * eta, 4.0 * (l0 - eta);
}

Eigen::Matrix2d element_jacobian(const Mesh& mesh, int e) {
  const auto el = mesh.element(e);
  const Vec2& a = mesh.node(el[0]);
  const Vec2& b = mesh.node(el[1]);
  const Vec2& c = mesh.node(el[2]);
  Eigen::Matrix2d J;
  J.col(0) = b - a;
  J.col(1) = c - a;
  return J;
}

Vec2 map_point(const Mesh& mesh, int e, double xi, double eta) {
  const auto el = mesh.element(e);
  const Vec2& a = mesh.node(el[0]);
  return a + xi * (mesh.node(el[1]) - a) + eta * (mesh.node(el[2]) - a);
}

struct EdgePoint {
  double xi, weight;  // on [-1, 1]
};

const std::vector<EdgePoint>& edge_rule(int order) {
  static const std::vector<EdgePoint> two{{-1.0 / std::sqrt(3.0), 1.0}, {1.0 / std::sqrt(3.0), 1.0}};
  static const std::vector<EdgePoint> three{
      {-std::sqrt(0.6), 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {std::sqrt(0.6), 5.0 / 9.0}};
  return order == 1 ? two : three;
}

// Edge basis values at xi for {start, end, mid}.
std::array<double, 3> edge_shape(int order, double xi) {
  if (order == 1) return {0.5 * (1.0 - xi), 0.5 * (1.0 + xi), 0.0};
  return {0.5 * xi * (xi - 1.0), 0.5 * xi * (xi + 1.0), 1.0 - xi * xi};
}

Vec2 outward_normal(const Mesh& mesh, const BoundaryEdge& edge) {
  const auto nodes = mesh.edge_nodes(edge);
  const Vec2 d = mesh.node(nodes[1]) - mesh.node(nodes[0]);
  return Vec2(d.y(), -d.x()).normalized();
}

}  // namespace

// ---------------------------------------------------------------- DofMap

DofMap::DofMap(int node_count, const std::vector<std::array<bool, 2>>& constrained,
               Eigen::VectorXd prescribed)
    : index_(static_cast<std::size_t>(2 * node_count), -1), prescribed_(std::move(prescribed)) {
  for (int n = 0; n < node_count; ++n) {
    for (int c = 0; c < 2; ++c) {
      if (constrained[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)]) continue;
      index_[static_cast<std::size_t>(2 * n + c)] = static_cast<int>(free_to_full_.size());
      free_to_full_.push_back(2 * n + c);
    }
  }
  for (int f : free_to_full_) prescribed_(f) = 0.0;
}

Eigen::VectorXd DofMap::expand(const Eigen::VectorXd& free) const {
  if (free.size() != free_size()) throw InvalidArgument("free vector has wrong size");
  Eigen::VectorXd full = prescribed_;
  for (int i = 0; i < free_size(); ++i) full(full_index(i)) = free(i);
  return full;
}

Eigen::VectorXd DofMap::restrict(const Eigen::VectorXd& full) const {
  if (full.size() != full_size()) throw InvalidArgument("full vector has wrong size");
  Eigen::VectorXd free(free_size());
  for (int i = 0; i < free_size(); ++i) free(i) = full(full_index(i));
  return free;
}

SubdomainProblem make_subdomain(Mesh mesh, Material material, Field body_force,
                                std::map<int, Field> tractions,
                                std::map<int, Field> dirichlet_values) {
  require_fully_tagged(mesh);
  (void)constitutive_matrix(material);

  std::set<int> neumann_ids;
  std::set<int> dirichlet_ids;
  for (const auto& edge : mesh.boundary_edges()) {
    if (edge.tag->kind == TagKind::Neumann) neumann_ids.insert(edge.tag->id);
    if (edge.tag->kind == TagKind::Dirichlet) dirichlet_ids.insert(edge.tag->id);
  }
  if (dirichlet_ids.empty()) throw ConfigError("body has no Dirichlet boundary part");
  for (const auto& [id, field] : tractions) {
    if (!neumann_ids.count(id)) {
      throw ConfigError("traction given for Neumann tag " + std::to_string(id) +
                        " which tags no edge");
    }
  }
  for (const auto& [id, field] : dirichlet_values) {
    if (!dirichlet_ids.count(id)) {
      throw ConfigError("displacement given for Dirichlet tag " + std::to_string(id) +
                        " which tags no edge");
    }
  }

  const int n = mesh.node_count();
  std::vector<std::array<bool, 2>> constrained(static_cast<std::size_t>(n), {false, false});
  Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(2 * n);
  for (const auto& edge : mesh.boundary_edges()) {
    if (edge.tag->kind != TagKind::Dirichlet) continue;
    const auto it = dirichlet_values.find(edge.tag->id);
    for (int node : mesh.edge_nodes(edge)) {
      const Vec2 value = it != dirichlet_values.end() ? it->second(mesh.node(node)) : Vec2::Zero();
      for (int c = 0; c < 2; ++c) {
        const bool hit = edge.tag->components == Components::Both ||
                         (c == 0 && edge.tag->components == Components::X) ||
                         (c == 1 && edge.tag->components == Components::Y);
        if (!hit) continue;
        constrained[static_cast<std::size_t>(node)][static_cast<std::size_t>(c)] = true;
        prescribed(2 * node + c) = value(c);
      }
    }
  }

  SubdomainProblem p;
  p.dofs = DofMap(n, constrained, std::move(prescribed));
  p.mesh = std::move(mesh);
  p.material = material;
  p.body_force = std::move(body_force);
  p.tractions = std::move(tractions);
  p.dirichlet_values = std::move(dirichlet_values);
  return p;
}

// -------------------------------------------------- SparseSymmetricMatrix

SparseSymmetricMatrix SparseSymmetricMatrix::from_lower(const Storage& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("matrix must be square");
  SparseSymmetricMatrix out;
  out.lower_ = m.triangularView<Eigen::Lower>();
  out.lower_.prune(0.0, 0.0);
  out.lower_.makeCompressed();
  return out;
}

double SparseSymmetricMatrix::operator()(int i, int j) const {
  return i >= j ? lower_.coeff(i, j) : lower_.coeff(j, i);
}

Eigen::VectorXd SparseSymmetricMatrix::operator*(const Eigen::VectorXd& x) const {
  if (x.size() != dimension()) throw InvalidArgument("matrix-vector size mismatch");
  Eigen::VectorXd y = lower_.selfadjointView<Eigen::Lower>() * x;
  return y;
}

SparseSymmetricMatrix SparseSymmetricMatrix::operator+(const SparseSymmetricMatrix& other) const {
  if (other.dimension() != dimension()) throw InvalidArgument("matrix sum size mismatch");
  Storage sum = lower_ + other.lower_;
  return from_lower(sum);
}

double SparseSymmetricMatrix::quadratic_form(const Eigen::VectorXd& x) const {
  return x.dot((*this) * x);
}

Eigen::MatrixXd SparseSymmetricMatrix::dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd(lower_);
  d.triangularView<Eigen::StrictlyUpper>() = d.transpose().triangularView<Eigen::StrictlyUpper>();
  return d;
}

void SparseSymmetricMatrix::write_coordinate(std::ostream& os) const {
  os.precision(17);
  for (int k = 0; k < lower_.outerSize(); ++k) {
    for (Storage::InnerIterator it(lower_, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << "\n";
    }
  }
}

// --------------------------------------------------------------- assembly

Eigen::SparseMatrix<double> assemble_full_stiffness(const SubdomainProblem& problem) {
  const Mesh& mesh = problem.mesh;
  const Eigen::Matrix3d D = constitutive_matrix(problem.material);
  const int npe = mesh.nodes_per_element();
  const auto& rule = triangle_rule(mesh.order());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.element_count() * 4 * npe * npe));
  Eigen::VectorXd N;
  Eigen::MatrixXd dN;
  Eigen::MatrixXd B(3, 2 * npe);
  Eigen::MatrixXd Ke(2 * npe, 2 * npe);

  for (int e = 0; e < mesh.element_count(); ++e) {
    const Eigen::Matrix2d J = element_jacobian(mesh, e);
    const double det = J.determinant();
    if (!(det > 0.0)) throw MeshError("element " + std::to_string(e) + " has non-positive Jacobian");
    const Eigen::Matrix2d Jinv = J.inverse();
    Ke.setZero();
    for (const auto& q : rule) {
      triangle_shape(mesh.order(), q.xi, q.eta, N, dN);
      const Eigen::MatrixXd G = dN * Jinv;  // physical gradients, npe x 2
      B.setZero();
      for (int a = 0; a < npe; ++a) {
        B(0, 2 * a) = G(a, 0);
        B(1, 2 * a + 1) = G(a, 1);
        B(2, 2 * a) = G(a, 1);
        B(2, 2 * a + 1) = G(a, 0);
      }
      Ke.noalias() += (q.weight * det) * B.transpose() * D * B;
    }
    const auto el = mesh.element(e);
    for (int a = 0; a < 2 * npe; ++a) {
      const int ga = 2 * el[static_cast<std::size_t>(a / 2)] + a % 2;
      for (int b = 0; b < 2 * npe; ++b) {
        const int gb = 2 * el[static_cast<std::size_t>(b / 2)] + b % 2;
        triplets.emplace_back(ga, gb, Ke(a, b));
      }
    }
  }
  const int n = 2 * mesh.node_count();
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

SparseSymmetricMatrix assemble_stiffness(const SubdomainProblem& problem) {
  const Eigen::SparseMatrix<double> full = assemble_full_stiffness(problem);
  const DofMap& dofs = problem.dofs;
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < full.outerSize(); ++k) {
    const int fc = dofs.free_index(k / 2, k % 2);
    if (fc < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int fr = dofs.free_index(r / 2, r % 2);
      if (fr >= fc) triplets.emplace_back(fr, fc, it.value());
    }
  }
  SparseSymmetricMatrix::Storage lower(dofs.free_size(), dofs.free_size());
  lower.setFromTriplets(triplets.begin(), triplets.end());
  return SparseSymmetricMatrix::from_lower(lower);
}

Eigen::VectorXd dirichlet_lift(const SubdomainProblem& problem) {
  const DofMap& dofs = problem.dofs;
  Eigen::VectorXd lift = Eigen::VectorXd::Zero(dofs.free_size());
  if (dofs.prescribed().isZero(0.0)) return lift;
  const Eigen::SparseMatrix<double> full = assemble_full_stiffness(problem);
  for (int k = 0; k < full.outerSize(); ++k) {
    if (dofs.free_index(k / 2, k % 2) >= 0) continue;
    const double value = dofs.prescribed()(k);
    if (value == 0.0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int fr = dofs.free_index(r / 2, r % 2);
      if (fr >= 0) lift(fr) -= it.value() * value;
    }
  }
  return lift;
}

Eigen::VectorXd assemble_load(const SubdomainProblem& problem) {
  const Mesh& mesh = problem.mesh;
  const DofMap& dofs = problem.dofs;
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs.free_size());
  auto add = [&](int node, const Vec2& f) {
    for (int c = 0; c < 2; ++c) {
      const int i = dofs.free_index(node, c);
      if (i >= 0) F(i) += f(c);
    }
  };

  if (problem.body_force) {
    Eigen::VectorXd N;
    Eigen::MatrixXd dN;
    for (int e = 0; e < mesh.element_count(); ++e) {
      const double det = element_jacobian(mesh, e).determinant();
      const auto el = mesh.element(e);
      for (const auto& q : triangle_rule(mesh.order())) {
        triangle_shape(mesh.order(), q.xi, q.eta, N, dN);
        const Vec2 f = problem.body_force(map_point(mesh, e, q.xi, q.eta));
        for (int a = 0; a < mesh.nodes_per_element(); ++a) {
          add(el[static_cast<std::size_t>(a)], (q.weight * det * N(a)) * f);
        }
      }
    }
  }

  for (const auto& edge : mesh.boundary_edges()) {
    if (!edge.tag) {
      if (!problem.tractions.empty()) throw ConfigError("traction on an untagged edge");
      continue;
    }
    if (edge.tag->kind != TagKind::Neumann) continue;
    const auto it = problem.tractions.find(edge.tag->id);
    if (it == problem.tractions.end()) continue;
    const auto nodes = mesh.edge_nodes(edge);
    const Vec2& a = mesh.node(nodes[0]);
    const Vec2& b = mesh.node(nodes[1]);
    const double half = 0.5 * (b - a).norm();
    for (const auto& q : edge_rule(mesh.order())) {
      const auto shape = edge_shape(mesh.order(), q.xi);
      const Vec2 p = it->second(0.5 * (a + b) + 0.5 * q.xi * (b - a));
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        add(nodes[k], (q.weight * half * shape[k]) * p);
      }
    }
  }
  return F;
}

// ----------------------------------------------------------------- traces

TraceGeometry trace_geometry(const Mesh& mesh, int pair_id) {
  TraceGeometry t;
  t.pair_id = pair_id;
  t.order = mesh.order();
  t.nodes = contact_trace_nodes(mesh, pair_id);

  const double tol = 1e-9 * mesh.diameter();
  bool first = true;
  std::vector<BoundaryEdge> edges;
  for (const auto& edge : mesh.boundary_edges()) {
    if (!edge.tag || edge.tag->kind != TagKind::Contact || edge.tag->id != pair_id) continue;
    const Vec2 n = outward_normal(mesh, edge);
    if (first) {
      t.normal = n;
      first = false;
    } else if ((n - t.normal).norm() > 1e-9) {
      throw GeometryError("contact boundary of pair " + std::to_string(pair_id) +
                          " is not straight");
    }
    edges.push_back(edge);
  }
  Vec2 tangent(-t.normal.y(), t.normal.x());
  if (tangent.x() < 0.0 || (tangent.x() == 0.0 && tangent.y() < 0.0)) tangent = -tangent;

  std::map<int, int> local;
  for (int i = 0; i < t.size(); ++i) {
    local[t.nodes[static_cast<std::size_t>(i)]] = i;
    t.coord.push_back(mesh.node(t.nodes[static_cast<std::size_t>(i)]).dot(tangent));
  }
  for (std::size_t i = 1; i < t.coord.size(); ++i) {
    if (!(t.coord[i] > t.coord[i - 1] + tol)) {
      throw GeometryError("contact trace coordinates are not strictly increasing");
    }
  }
  for (const auto& edge : edges) {
    const auto nodes = mesh.edge_nodes(edge);
    std::array<int, 3> seg{local.at(nodes[0]), local.at(nodes[1]), -1};
    if (nodes.size() == 3) seg[2] = local.at(nodes[2]);
    t.segments.push_back(seg);
  }
  std::sort(t.segments.begin(), t.segments.end(), [&](const auto& a, const auto& b) {
    return std::min(a[0], a[1]) < std::min(b[0], b[1]);
  });
  return t;
}

std::vector<TracePoint> trace_quadrature(const TraceGeometry& trace, int s) {
  const auto& seg = trace.segments[static_cast<std::size_t>(s)];
  const double c0 = trace.coord[static_cast<std::size_t>(seg[0])];
  const double c1 = trace.coord[static_cast<std::size_t>(seg[1])];
  const double half = 0.5 * std::abs(c1 - c0);
  std::vector<TracePoint> out;
  for (const auto& q : edge_rule(trace.order)) {
    out.push_back({q.weight * half, 0.5 * (c0 + c1) + 0.5 * q.xi * (c1 - c0),
                   edge_shape(trace.order, q.xi)});
  }
  return out;
}

int nearest_segment_node(const TraceGeometry& trace, int s, double coord) {
  const auto& seg = trace.segments[static_cast<std::size_t>(s)];
  int best = 0;
  double dist = std::abs(trace.coord[static_cast<std::size_t>(seg[0])] - coord);
  const int count = seg[2] >= 0 ? 3 : 2;
  for (int k = 1; k < count; ++k) {
    const double d = std::abs(trace.coord[static_cast<std::size_t>(seg[static_cast<std::size_t>(k)])] - coord);
    if (d < dist) {
      dist = d;
      best = k;
    }
  }
  return best;
}

Eigen::SparseMatrix<double> trace_mass(const TraceGeometry& trace,
                                       const Eigen::VectorXd& weights) {
  if (weights.size() != trace.size()) throw InvalidArgument("weight size does not match trace");
  std::vector<Eigen::Triplet<double>> triplets;
  for (int s = 0; s < static_cast<int>(trace.segments.size()); ++s) {
    const auto& seg = trace.segments[static_cast<std::size_t>(s)];
    const int count = seg[2] >= 0 ? 3 : 2;
    for (const auto& q : trace_quadrature(trace, s)) {
      const int near = nearest_segment_node(trace, s, q.coord);
      const double psi = weights(seg[static_cast<std::size_t>(near)]);
      if (psi == 0.0) continue;
      for (int a = 0; a < count; ++a) {
        for (int b = 0; b < count; ++b) {
          triplets.emplace_back(seg[static_cast<std::size_t>(a)], seg[static_cast<std::size_t>(b)],
                                q.weight * psi * q.shape[static_cast<std::size_t>(a)] *
                                    q.shape[static_cast<std::size_t>(b)]);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> M(trace.size(), trace.size());
  M.setFromTriplets(triplets.begin(), triplets.end());
  return M;
}

SparseSymmetricMatrix assemble_contact_edge_mass(const SubdomainProblem& problem,
                                                 const TraceGeometry& trace,
                                                 const Eigen::VectorXd& weights, double theta) {
  if (!(theta > 0.0)) throw InvalidArgument("penalty parameter must be positive");
  const Eigen::SparseMatrix<double> M = trace_mass(trace, weights);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < M.outerSize(); ++k) {
    const int nj = trace.nodes[static_cast<std::size_t>(k)];
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, k); it; ++it) {
      const int ni = trace.nodes[static_cast<std::size_t>(it.row())];
      for (int ci = 0; ci < 2; ++ci) {
        const int fi = problem.dofs.free_index(ni, ci);
        if (fi < 0 || trace.normal(ci) == 0.0) continue;
        for (int cj = 0; cj < 2; ++cj) {
          const int fj = problem.dofs.free_index(nj, cj);
          if (fj < 0 || fi < fj || trace.normal(cj) == 0.0) continue;
          triplets.emplace_back(fi, fj, it.value() * trace.normal(ci) * trace.normal(cj) / theta);
        }
      }
    }
  }
  const int n = problem.dofs.free_size();
  SparseSymmetricMatrix::Storage lower(n, n);
  lower.setFromTriplets(triplets.begin(), triplets.end());
  return SparseSymmetricMatrix::from_lower(lower);
}

SparseSymmetricMatrix assemble_contact_edge_mass(const SubdomainProblem& problem, int pair_id,
                                                 const Eigen::VectorXd& weights, double theta) {
  return assemble_contact_edge_mass(problem, trace_geometry(problem.mesh, pair_id), weights,
                                    theta);
}

Eigen::VectorXd trace_normal(const SubdomainProblem& problem, const TraceGeometry& trace,
                             const Eigen::VectorXd& u) {
  const Eigen::VectorXd full = problem.dofs.expand(u);
  Eigen::VectorXd un(trace.size());
  for (int i = 0; i < trace.size(); ++i) {
    const int n = trace.nodes[static_cast<std::size_t>(i)];
    un(i) = full(2 * n) * trace.normal.x() + full(2 * n + 1) * trace.normal.y();
  }
  return un;
}

Eigen::VectorXd trace_normal(const SubdomainProblem& problem, int pair_id,
                             const Eigen::VectorXd& u) {
  return trace_normal(problem, trace_geometry(problem.mesh, pair_id), u);
}

Eigen::VectorXd trace_load(const SubdomainProblem& problem, const TraceGeometry& trace,
                           const Eigen::VectorXd& normal_forces) {
  if (normal_forces.size() != trace.size()) throw InvalidArgument("trace load size mismatch");
  Eigen::VectorXd F = Eigen::VectorXd::Zero(problem.dofs.free_size());
  for (int i = 0; i < trace.size(); ++i) {
    const int n = trace.nodes[static_cast<std::size_t>(i)];
    for (int c = 0; c < 2; ++c) {
      const int f = problem.dofs.free_index(n, c);
      if (f >= 0) F(f) += normal_forces(i) * trace.normal(c);
    }
  }
  return F;
}

// ---------------------------------------------------------------- solvers

void SpdSolver::factorize(const SparseSymmetricMatrix& K) {
  n_ = K.dimension();
  ldlt_.compute(K.lower());
  if (ldlt_.info() != Eigen::Success) throw SolverError("sparse LDL^T factorization failed");
  const Eigen::VectorXd d = ldlt_.vectorD();
  if (n_ > 0) {
    const double scale = d.cwiseAbs().maxCoeff();
    if (!(d.minCoeff() > 1e-14 * scale)) {
      throw SolverError("matrix is not positive definite (pivot " + std::to_string(d.minCoeff()) +
                        ")");
    }
  }
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& F) const {
  if (F.size() != n_) throw InvalidArgument("right-hand side has wrong size");
  if (n_ == 0) return Eigen::VectorXd();
  Eigen::VectorXd u = ldlt_.solve(F);
  return u;
}

Eigen::VectorXd solve_spd(const SparseSymmetricMatrix& K, const Eigen::VectorXd& F, double tol) {
  if (F.size() != K.dimension()) throw InvalidArgument("right-hand side has wrong size");
  const double fnorm = F.norm();
  if (fnorm == 0.0) return Eigen::VectorXd::Zero(F.size());

  const SpdSolver solver(K);
  Eigen::VectorXd u = solver.solve(F);
  Eigen::VectorXd r = F - K * u;
  for (int step = 0; step < 3 && r.norm() > tol * fnorm; ++step) {
    u += solver.solve(r);
    r = F - K * u;
  }
  if (r.norm() <= tol * fnorm) return u;

  Eigen::ConjugateGradient<SparseSymmetricMatrix::Storage, Eigen::Lower> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(10 * K.dimension());
  cg.compute(K.lower());
  u = cg.solveWithGuess(F, u);
  r = F - K * u;
  if (cg.info() != Eigen::Success && r.norm() > tol * fnorm) {
    throw SolverError("SPD solve did not reach the requested residual");
  }
  return u;
}

}  // namespace contactdd
