#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "contactdd/material.hpp"
#include "contactdd/mesh.hpp"

namespace contactdd {

/// A vector field over the plane (forces, tractions, displacements).
using Field = std::function<Vec2(const Vec2&)>;

/// Numbering of the free displacement dofs of one body. Full dof 2*n+c is
/// component c of node n; constrained dofs carry their prescribed value.
class DofMap {
 public:
  DofMap() = default;
  DofMap(int node_count, const std::vector<std::array<bool, 2>>& constrained,
         Eigen::VectorXd prescribed);

  int full_size() const noexcept { return static_cast<int>(index_.size()); }
  int free_size() const noexcept { return static_cast<int>(free_to_full_.size()); }
  int constrained_count() const noexcept { return full_size() - free_size(); }

  /// Free index of (node, component), or -1 when the dof is constrained.
  int free_index(int node, int component) const {
    return index_[static_cast<std::size_t>(2 * node + component)];
  }
  int full_index(int free) const { return free_to_full_[static_cast<std::size_t>(free)]; }

  /// Full vector of prescribed values (zero at free dofs).
  const Eigen::VectorXd& prescribed() const noexcept { return prescribed_; }

  Eigen::VectorXd expand(const Eigen::VectorXd& free) const;
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;

 private:
  std::vector<int> index_;
  std::vector<int> free_to_full_;
  Eigen::VectorXd prescribed_;
};

/// One elastic body with its boundary data.
struct SubdomainProblem {
  Mesh mesh;
  Material material;
  Field body_force;                        // empty means zero
  std::map<int, Field> tractions;          // Neumann tag id -> traction
  std::map<int, Field> dirichlet_values;   // Dirichlet tag id -> displacement (default 0)
  DofMap dofs;
};

/// Validates tags and data and builds the dof map.
SubdomainProblem make_subdomain(Mesh mesh, Material material, Field body_force = {},
                                std::map<int, Field> tractions = {},
                                std::map<int, Field> dirichlet_values = {});

/// Symmetric sparse matrix stored as its lower triangle.
class SparseSymmetricMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  SparseSymmetricMatrix() = default;
  explicit SparseSymmetricMatrix(int dimension) : lower_(dimension, dimension) {}
  /// Keeps the lower triangle of `m` and drops exact zeros.
  static SparseSymmetricMatrix from_lower(const Storage& m);

  int dimension() const noexcept { return static_cast<int>(lower_.rows()); }
  const Storage& lower() const noexcept { return lower_; }

  double operator()(int i, int j) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  SparseSymmetricMatrix operator+(const SparseSymmetricMatrix& other) const;
  /// x^T A x
  double quadratic_form(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
  /// One "row col value" line per stored (lower) entry, 0-based.
  void write_coordinate(std::ostream& os) const;

 private:
  Storage lower_;
};

/// Stiffness over all 2N dofs, both triangles, before any elimination.
Eigen::SparseMatrix<double> assemble_full_stiffness(const SubdomainProblem& problem);
/// Stiffness restricted to the free dofs.
SparseSymmetricMatrix assemble_stiffness(const SubdomainProblem& problem);
/// Body force and traction work on the free dofs.
Eigen::VectorXd assemble_load(const SubdomainProblem& problem);
/// -K_fc * u_c: load induced by nonzero prescribed displacements.
Eigen::VectorXd dirichlet_lift(const SubdomainProblem& problem);

/// Geometry of one body's side of a contact pair.
struct TraceGeometry {
  int pair_id = 0;
  int order = 1;
  std::vector<int> nodes;      // mesh nodes sorted along the interface
  std::vector<double> coord;   // coordinate of each node along the interface
  Vec2 normal = Vec2::Zero();  // outward unit normal (the interface is straight)
  /// Local trace indices {start, end, mid}; mid is -1 for linear traces.
  std::vector<std::array<int, 3>> segments;

  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

TraceGeometry trace_geometry(const Mesh& mesh, int pair_id);

/// Gauss point on a trace segment: weight includes the length Jacobian;
/// `shape` holds the values of the segment's {start, end, mid} basis.
struct TracePoint {
  double weight = 0.0;
  double coord = 0.0;
  std::array<double, 3> shape{};
};

/// 2-point (linear) or 3-point (quadratic) Gauss rule on segment `s`.
std::vector<TracePoint> trace_quadrature(const TraceGeometry& trace, int s);

/// Index (into the segment's {start, end, mid}) of the node nearest `coord`.
int nearest_segment_node(const TraceGeometry& trace, int s, double coord);

/// Trace mass matrix int psi phi_i phi_j dS (trace-local indices). psi is
/// taken at each Gauss point from the nearest trace node's weight.
Eigen::SparseMatrix<double> trace_mass(const TraceGeometry& trace,
                                       const Eigen::VectorXd& weights);

/// (1/theta) int psi u_n v_n dS on the free dofs of `problem`.
SparseSymmetricMatrix assemble_contact_edge_mass(const SubdomainProblem& problem,
                                                 const TraceGeometry& trace,
                                                 const Eigen::VectorXd& weights, double theta);
SparseSymmetricMatrix assemble_contact_edge_mass(const SubdomainProblem& problem, int pair_id,
                                                 const Eigen::VectorXd& weights, double theta);

/// Outward normal displacement at every trace node. `u` is a free-dof vector;
/// prescribed values are included.
Eigen::VectorXd trace_normal(const SubdomainProblem& problem, const TraceGeometry& trace,
                             const Eigen::VectorXd& u);
Eigen::VectorXd trace_normal(const SubdomainProblem& problem, int pair_id,
                             const Eigen::VectorXd& u);

/// Scatters per-trace-node normal forces into a free-dof load vector.
Eigen::VectorXd trace_load(const SubdomainProblem& problem, const TraceGeometry& trace,
                           const Eigen::VectorXd& normal_forces);

/// Sparse LDL^T factorization of an SPD matrix, reusable across solves.
class SpdSolver {
 public:
  SpdSolver() = default;
  explicit SpdSolver(const SparseSymmetricMatrix& K) { factorize(K); }

  /// Throws SolverError if the factorization fails or a pivot is not positive.
  void factorize(const SparseSymmetricMatrix& K);
  Eigen::VectorXd solve(const Eigen::VectorXd& F) const;
  int dimension() const noexcept { return n_; }

 private:
  Eigen::SimplicialLDLT<SparseSymmetricMatrix::Storage, Eigen::Lower> ldlt_;
  int n_ = 0;
};

/// Solves K u = F to relative residual `tol`: direct factorization with
/// iterative refinement, conjugate gradients as the fallback.
Eigen::VectorXd solve_spd(const SparseSymmetricMatrix& K, const Eigen::VectorXd& F,
                          double tol = 1e-12);

}  // namespace contactdd
