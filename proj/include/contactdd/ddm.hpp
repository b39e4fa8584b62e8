#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "contactdd/contact.hpp"
#include "contactdd/fem.hpp"

namespace contactdd {

/// Bodies and the contact pairs coupling them.
struct ContactSystem {
  std::vector<SubdomainProblem> bodies;
  std::vector<ContactPair> pairs;
};

/// A contact system with each body's stiffness and load assembled once.
class AssembledSystem {
 public:
  explicit AssembledSystem(ContactSystem system);

  const ContactSystem& system() const noexcept { return system_; }
  int body_count() const noexcept { return static_cast<int>(system_.bodies.size()); }
  int pair_count() const noexcept { return static_cast<int>(system_.pairs.size()); }
  const SubdomainProblem& body(int a) const { return system_.bodies[static_cast<std::size_t>(a)]; }
  const ContactPair& pair(int p) const { return system_.pairs[static_cast<std::size_t>(p)]; }

  const SparseSymmetricMatrix& stiffness(int a) const { return K_[static_cast<std::size_t>(a)]; }
  /// Load including the lift of prescribed displacements.
  const Eigen::VectorXd& load(int a) const { return F_[static_cast<std::size_t>(a)]; }

  /// One contact side of a body: pair index and whether it is side a.
  struct Side {
    int pair = 0;
    bool is_a = true;
  };
  const std::vector<Side>& sides(int body) const { return sides_[static_cast<std::size_t>(body)]; }
  const TraceGeometry& geometry(const Side& s) const;

 private:
  ContactSystem system_;
  std::vector<SparseSymmetricMatrix> K_;
  std::vector<Eigen::VectorXd> F_;
  std::vector<std::vector<Side>> sides_;
};

/// Per-body free-dof displacement vectors u^k.
struct IterationState {
  std::vector<Eigen::VectorXd> u;
  int k = 0;
};

/// Normal traces of one pair, each in its own side ordering.
struct PairTraces {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

std::vector<PairTraces> pair_traces(const AssembledSystem& sys, const IterationState& state);

/// Concatenated normal traces of every contact side of each body (all trace
/// nodes, midside nodes included). These enter the stopping criterion.
std::vector<Eigen::VectorXd> body_traces(const AssembledSystem& sys,
                                         const IterationState& state);

struct ErrorInjection {
  double epsilon = 0.0;  // energy-norm size of each perturbation
  std::uint64_t seed = 0;
};

struct SchemeConfig {
  double theta = 1.0;
  double gamma = 1.0;
  /// One policy per pair; a single entry applies to every pair.
  std::vector<SubareaPolicy> policies{SubareaPolicy::none()};
  double eps_u = 1e-3;
  int max_iter = 200;
  std::optional<ErrorInjection> injection;
  /// Abort after this many consecutive iterations of growing trace change.
  int divergence_window = 10;
  /// Solve the bodies of one iteration on separate threads.
  bool concurrent = false;
};

struct ConvergenceReport {
  int iterations = 0;
  bool converged = false;
  /// rel_change[k][body]: relative trace change of iteration k+1.
  std::vector<std::vector<double>> rel_change;
  /// Energy-norm distance to the reference for u^0, u^1, ..., u^m (empty
  /// without a reference).
  std::vector<double> energy_error;
  /// psi_active[k][pair]: nodes with psi = 1 on side a during iteration k+1.
  std::vector<std::vector<int>> psi_active;
  /// Iterations where psi^{k+1} > psi^k somewhere (nonincreasing psi fails).
  int monotonicity_violations = 0;
  double injected_epsilon = 0.0;
};

/// Relative-change test for every body: |next - prev|_2 <= eps_u |next|_2,
/// and a zero trace passes only with zero change.
bool stopping_criterion(const std::vector<Eigen::VectorXd>& prev,
                        const std::vector<Eigen::VectorXd>& next, double eps_u);

/// psi weights for every pair at `state`.
std::vector<PolicyWeights> evaluate_policies(const AssembledSystem& sys,
                                             const std::vector<SubareaPolicy>& policies,
                                             const IterationState& state);

/// K_a + X_a(psi) for one body.
SparseSymmetricMatrix robin_matrix(const AssembledSystem& sys, int body, double theta,
                                   const std::vector<PolicyWeights>& weights);

/// Right-hand side l_a + X_a(psi) u_a^k + penalty forces at u^k for one body.
Eigen::VectorXd robin_rhs(const AssembledSystem& sys, int body, double theta,
                          const std::vector<PolicyWeights>& weights,
                          const IterationState& state);

/// Unrelaxed subdomain solutions u~^{k+1} for the given psi.
std::vector<Eigen::VectorXd> robin_step(const AssembledSystem& sys, double theta,
                                        const std::vector<PolicyWeights>& weights,
                                        const IterationState& state);

/// sqrt(sum_a (u_a - v_a)^T (K_a + X_a(psi)) (u_a - v_a)).
double energy_norm(const AssembledSystem& sys, double theta,
                   const std::vector<PolicyWeights>& weights, const IterationState& u,
                   const IterationState& v);

struct SchemeResult {
  IterationState state;
  ConvergenceReport report;
};

/// Penalty Robin-Robin iteration. Each step solves every body with its Robin
/// condition on the psi subarea, then relaxes with gamma. With a reference,
/// the energy-norm error (psi of the initial state) is recorded.
/// Throws DivergenceError on non-finite or persistently growing iterates.
SchemeResult run_scheme(const AssembledSystem& sys, const SchemeConfig& config,
                        const IterationState& initial,
                        const IterationState* reference = nullptr);

SchemeResult neumann_neumann(const AssembledSystem& sys, SchemeConfig config,
                             const IterationState& initial,
                             const IterationState* reference = nullptr);
SchemeResult full_robin(const AssembledSystem& sys, SchemeConfig config,
                        const IterationState& initial,
                        const IterationState* reference = nullptr);
SchemeResult dirichlet_dirichlet_active_set(const AssembledSystem& sys, SchemeConfig config,
                                            const IterationState& initial,
                                            const IterationState* reference = nullptr);

/// Runs with a perturbation of energy norm `epsilon` added after every
/// relaxation. epsilon == 0 is exactly run_scheme.
SchemeResult run_with_injected_errors(const AssembledSystem& sys, SchemeConfig config,
                                      const IterationState& initial, double epsilon,
                                      std::uint64_t seed,
                                      const IterationState* reference = nullptr);

/// Direct solution of the coupled penalty problem: damped semismooth Newton
/// on sum_a (u_a^T K_a u_a / 2 - F_a^T u_a) + penalty energy. Serves as the
/// converged reference for the iterative schemes. Throws SolverError if the
/// relative Newton step does not drop below `tol` within `max_iter` steps.
IterationState solve_coupled_penalty(const AssembledSystem& sys, double theta,
                                     const IterationState& initial, double tol = 1e-12,
                                     int max_iter = 100);

struct RateEstimate {
  double q = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log(energy error) against k over the last half of
/// the recorded errors; q = exp(slope).
RateEstimate estimate_rate(const ConvergenceReport& report);
RateEstimate estimate_rate(const std::vector<double>& errors);

/// CSV with columns k, rel_change_body<i>..., energy_error, psi_active_pair<id>...
void write_report_csv(std::ostream& os, const AssembledSystem& sys,
                      const ConvergenceReport& report);

}  // namespace contactdd
