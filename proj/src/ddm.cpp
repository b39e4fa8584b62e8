#include "contactdd/ddm.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

#include "contactdd/errors.hpp"

namespace contactdd {

AssembledSystem::AssembledSystem(ContactSystem system) : system_(std::move(system)) {
  const std::size_t n = system_.bodies.size();
  sides_.resize(n);
  for (std::size_t p = 0; p < system_.pairs.size(); ++p) {
    const auto& pair = system_.pairs[p];
    if (pair.body_a < 0 || pair.body_b < 0 || static_cast<std::size_t>(pair.body_a) >= n ||
        static_cast<std::size_t>(pair.body_b) >= n || pair.body_a == pair.body_b) {
      throw InvalidArgument("contact pair " + std::to_string(pair.id) +
                            " references invalid bodies");
    }
    sides_[static_cast<std::size_t>(pair.body_a)].push_back({static_cast<int>(p), true});
    sides_[static_cast<std::size_t>(pair.body_b)].push_back({static_cast<int>(p), false});
  }
  for (const auto& body : system_.bodies) {
    K_.push_back(assemble_stiffness(body));
    F_.push_back(assemble_load(body) + dirichlet_lift(body));
  }
}

const TraceGeometry& AssembledSystem::geometry(const Side& s) const {
  const auto& pair = this->pair(s.pair);
  return s.is_a ? pair.side_a : pair.side_b;
}

namespace {

void require_state(const AssembledSystem& sys, const IterationState& state) {
  if (static_cast<int>(state.u.size()) != sys.body_count()) {
    throw InvalidArgument("iteration state has the wrong number of bodies");
  }
  for (int a = 0; a < sys.body_count(); ++a) {
    if (state.u[static_cast<std::size_t>(a)].size() != sys.body(a).dofs.free_size()) {
      throw InvalidArgument("iteration state has the wrong size for body " + std::to_string(a));
    }
  }
}

const SubareaPolicy& policy_for(const std::vector<SubareaPolicy>& policies, int pair) {
  if (policies.empty()) throw InvalidArgument("scheme needs at least one subarea policy");
  return policies.size() == 1 ? policies.front() : policies.at(static_cast<std::size_t>(pair));
}

const Eigen::VectorXd& side_weights(const std::vector<PolicyWeights>& w,
                                    const AssembledSystem::Side& s) {
  const auto& pw = w[static_cast<std::size_t>(s.pair)];
  return s.is_a ? pw.a : pw.b;
}

// Concatenated psi of one body; used to decide when to refactor.
Eigen::VectorXd body_weights(const AssembledSystem& sys, int body,
                             const std::vector<PolicyWeights>& w) {
  std::vector<double> all;
  for (const auto& s : sys.sides(body)) {
    const auto& v = side_weights(w, s);
    all.insert(all.end(), v.data(), v.data() + v.size());
  }
  return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

void validate(const AssembledSystem& sys, const SchemeConfig& config) {
  if (!(config.theta > 0.0)) throw InvalidArgument("theta must be positive");
  if (!(config.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(config.eps_u > 0.0)) throw InvalidArgument("eps_u must be positive");
  if (config.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (config.policies.size() != 1 &&
      static_cast<int>(config.policies.size()) != sys.pair_count()) {
    throw InvalidArgument("need one subarea policy per contact pair");
  }
}

bool all_finite(const std::vector<Eigen::VectorXd>& v) {
  for (const auto& x : v) {
    if (!x.allFinite()) return false;
  }
  return true;
}

}  // namespace

std::vector<PairTraces> pair_traces(const AssembledSystem& sys, const IterationState& state) {
  require_state(sys, state);
  std::vector<PairTraces> out;
  for (int p = 0; p < sys.pair_count(); ++p) {
    const auto& pair = sys.pair(p);
    out.push_back({trace_normal(sys.body(pair.body_a), pair.side_a,
                                state.u[static_cast<std::size_t>(pair.body_a)]),
                   trace_normal(sys.body(pair.body_b), pair.side_b,
                                state.u[static_cast<std::size_t>(pair.body_b)])});
  }
  return out;
}

std::vector<Eigen::VectorXd> body_traces(const AssembledSystem& sys,
                                         const IterationState& state) {
  const auto traces = pair_traces(sys, state);
  std::vector<Eigen::VectorXd> out;
  for (int a = 0; a < sys.body_count(); ++a) {
    std::vector<double> all;
    for (const auto& s : sys.sides(a)) {
      const auto& t = traces[static_cast<std::size_t>(s.pair)];
      const auto& v = s.is_a ? t.a : t.b;
      all.insert(all.end(), v.data(), v.data() + v.size());
    }
    out.emplace_back(Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size())));
  }
  return out;
}

bool stopping_criterion(const std::vector<Eigen::VectorXd>& prev,
                        const std::vector<Eigen::VectorXd>& next, double eps_u) {
  if (prev.size() != next.size()) throw InvalidArgument("trace sets differ in body count");
  for (std::size_t a = 0; a < prev.size(); ++a) {
    if (prev[a].size() != next[a].size()) throw InvalidArgument("trace shapes differ");
    const double change = (next[a] - prev[a]).norm();
    const double size = next[a].norm();
    if (size == 0.0) {
      if (change != 0.0) return false;
    } else if (change > eps_u * size) {
      return false;
    }
  }
  return true;
}

std::vector<PolicyWeights> evaluate_policies(const AssembledSystem& sys,
                                             const std::vector<SubareaPolicy>& policies,
                                             const IterationState& state) {
  const auto traces = pair_traces(sys, state);
  std::vector<PolicyWeights> out;
  for (int p = 0; p < sys.pair_count(); ++p) {
    const auto& t = traces[static_cast<std::size_t>(p)];
    out.push_back(evaluate_policy(policy_for(policies, p), sys.pair(p), t.a, t.b));
  }
  return out;
}

SparseSymmetricMatrix robin_matrix(const AssembledSystem& sys, int body, double theta,
                                   const std::vector<PolicyWeights>& weights) {
  SparseSymmetricMatrix G = sys.stiffness(body);
  for (const auto& s : sys.sides(body)) {
    const auto& w = side_weights(weights, s);
    if (w.isZero(0.0)) continue;
    G = G + assemble_contact_edge_mass(sys.body(body), sys.geometry(s), w, theta);
  }
  return G;
}

namespace {

// Robin contribution X_a(psi) u_a plus the penalty forces; `forces` holds the
// per-pair penalty_rhs at the current traces.
Eigen::VectorXd robin_rhs_impl(const AssembledSystem& sys, int body, double theta,
                               const std::vector<PolicyWeights>& weights,
                               const std::vector<PenaltyForces>& forces,
                               const Eigen::VectorXd& u) {
  Eigen::VectorXd rhs = sys.load(body);
  const auto& problem = sys.body(body);
  for (const auto& s : sys.sides(body)) {
    const auto& w = side_weights(weights, s);
    if (!w.isZero(0.0)) {
      rhs += assemble_contact_edge_mass(problem, sys.geometry(s), w, theta) * u;
    }
    const auto& f = forces[static_cast<std::size_t>(s.pair)];
    rhs += trace_load(problem, sys.geometry(s), s.is_a ? f.a : f.b);
  }
  return rhs;
}

std::vector<PenaltyForces> all_penalty_forces(const AssembledSystem& sys, double theta,
                                              const std::vector<PairTraces>& traces) {
  std::vector<PenaltyForces> out;
  for (int p = 0; p < sys.pair_count(); ++p) {
    const auto& t = traces[static_cast<std::size_t>(p)];
    out.push_back(penalty_rhs(sys.pair(p), t.a, t.b, theta));
  }
  return out;
}

}  // namespace

Eigen::VectorXd robin_rhs(const AssembledSystem& sys, int body, double theta,
                          const std::vector<PolicyWeights>& weights,
                          const IterationState& state) {
  const auto forces = all_penalty_forces(sys, theta, pair_traces(sys, state));
  return robin_rhs_impl(sys, body, theta, weights, forces, state.u[static_cast<std::size_t>(body)]);
}

std::vector<Eigen::VectorXd> robin_step(const AssembledSystem& sys, double theta,
                                        const std::vector<PolicyWeights>& weights,
                                        const IterationState& state) {
  const auto forces = all_penalty_forces(sys, theta, pair_traces(sys, state));
  std::vector<Eigen::VectorXd> out;
  for (int a = 0; a < sys.body_count(); ++a) {
    const SpdSolver solver(robin_matrix(sys, a, theta, weights));
    out.push_back(solver.solve(
        robin_rhs_impl(sys, a, theta, weights, forces, state.u[static_cast<std::size_t>(a)])));
  }
  return out;
}

double energy_norm(const AssembledSystem& sys, double theta,
                   const std::vector<PolicyWeights>& weights, const IterationState& u,
                   const IterationState& v) {
  require_state(sys, u);
  require_state(sys, v);
  double sum = 0.0;
  for (int a = 0; a < sys.body_count(); ++a) {
    const Eigen::VectorXd d = u.u[static_cast<std::size_t>(a)] - v.u[static_cast<std::size_t>(a)];
    sum += robin_matrix(sys, a, theta, weights).quadratic_form(d);
  }
  return std::sqrt(std::max(0.0, sum));
}

SchemeResult run_scheme(const AssembledSystem& sys, const SchemeConfig& config,
                        const IterationState& initial, const IterationState* reference) {
  validate(sys, config);
  require_state(sys, initial);
  if (reference) require_state(sys, *reference);
  const int nb = sys.body_count();

  bool stationary = true;
  for (int p = 0; p < sys.pair_count(); ++p) {
    stationary = stationary && policy_for(config.policies, p).stationary();
  }

  SchemeResult result;
  IterationState& state = result.state;
  ConvergenceReport& report = result.report;
  state = initial;
  state.k = 0;

  // Norm matrices from psi at the initial state.
  const auto weights0 = evaluate_policies(sys, config.policies, state);
  std::vector<SparseSymmetricMatrix> G;
  for (int a = 0; a < nb; ++a) G.push_back(robin_matrix(sys, a, config.theta, weights0));
  auto g_norm = [&](const std::vector<Eigen::VectorXd>& d) {
    double s = 0.0;
    for (int a = 0; a < nb; ++a) s += G[static_cast<std::size_t>(a)].quadratic_form(d[static_cast<std::size_t>(a)]);
    return std::sqrt(std::max(0.0, s));
  };
  auto error_to_reference = [&](const IterationState& s) {
    std::vector<Eigen::VectorXd> d;
    for (int a = 0; a < nb; ++a) d.push_back(s.u[static_cast<std::size_t>(a)] - reference->u[static_cast<std::size_t>(a)]);
    return g_norm(d);
  };
  if (reference) report.energy_error.push_back(error_to_reference(state));

  std::optional<std::mt19937_64> rng;
  if (config.injection && config.injection->epsilon > 0.0) {
    rng.emplace(config.injection->seed);
    report.injected_epsilon = config.injection->epsilon;
  }

  std::vector<SpdSolver> solvers(static_cast<std::size_t>(nb));
  std::vector<std::optional<Eigen::VectorXd>> factored_for(static_cast<std::size_t>(nb));
  std::vector<PolicyWeights> previous_weights;

  auto traces = pair_traces(sys, state);
  std::vector<Eigen::VectorXd> btraces = body_traces(sys, state);
  double last_change = std::numeric_limits<double>::infinity();
  int growth = 0;

  for (int k = 0; k < config.max_iter; ++k) {
    std::vector<PolicyWeights> weights;
    for (int p = 0; p < sys.pair_count(); ++p) {
      const auto& t = traces[static_cast<std::size_t>(p)];
      weights.push_back(evaluate_policy(policy_for(config.policies, p), sys.pair(p), t.a, t.b));
    }
    std::vector<int> active;
    bool violated = false;
    for (int p = 0; p < sys.pair_count(); ++p) {
      const auto& w = weights[static_cast<std::size_t>(p)];
      active.push_back(static_cast<int>(w.a.sum()));
      if (!previous_weights.empty()) {
        const auto& old = previous_weights[static_cast<std::size_t>(p)];
        violated = violated || (w.a.array() > old.a.array()).any() ||
                   (w.b.array() > old.b.array()).any();
      }
    }
    if (violated) ++report.monotonicity_violations;
    report.psi_active.push_back(std::move(active));

    const auto forces = all_penalty_forces(sys, config.theta, traces);
    std::vector<Eigen::VectorXd> solved(static_cast<std::size_t>(nb));
    auto solve_body = [&](int a) {
      const auto ia = static_cast<std::size_t>(a);
      const Eigen::VectorXd key = body_weights(sys, a, weights);
      if (!factored_for[ia] || (!stationary && *factored_for[ia] != key)) {
        solvers[ia].factorize(robin_matrix(sys, a, config.theta, weights));
        factored_for[ia] = key;
      }
      solved[ia] = solvers[ia].solve(robin_rhs_impl(sys, a, config.theta, weights, forces, state.u[ia]));
    };
    if (config.concurrent && nb > 1) {
      std::vector<std::thread> workers;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nb));
      for (int a = 0; a < nb; ++a) {
        workers.emplace_back([&, a] {
          try {
            solve_body(a);
          } catch (...) {
            errors[static_cast<std::size_t>(a)] = std::current_exception();
          }
        });
      }
      for (auto& w : workers) w.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    } else {
      for (int a = 0; a < nb; ++a) solve_body(a);
    }

    IterationState next;
    next.k = k + 1;
    for (int a = 0; a < nb; ++a) {
      const auto ia = static_cast<std::size_t>(a);
      next.u.push_back(config.gamma * solved[ia] + (1.0 - config.gamma) * state.u[ia]);
    }
    if (rng) {
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<Eigen::VectorXd> noise;
      for (int a = 0; a < nb; ++a) {
        Eigen::VectorXd x(sys.body(a).dofs.free_size());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(*rng);
        noise.push_back(std::move(x));
      }
      const double scale = config.injection->epsilon / g_norm(noise);
      for (int a = 0; a < nb; ++a) next.u[static_cast<std::size_t>(a)] += scale * noise[static_cast<std::size_t>(a)];
    }
    if (!all_finite(next.u)) throw DivergenceError("iterate became non-finite", k + 1);

    auto next_traces = pair_traces(sys, next);
    auto next_btraces = body_traces(sys, next);
    std::vector<double> rel;
    double change = 0.0;
    for (int a = 0; a < nb; ++a) {
      const auto ia = static_cast<std::size_t>(a);
      const double diff = (next_btraces[ia] - btraces[ia]).norm();
      const double size = next_btraces[ia].norm();
      rel.push_back(size > 0.0 ? diff / size : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()));
      change += diff;
    }
    report.rel_change.push_back(rel);
    const bool done = stopping_criterion(btraces, next_btraces, config.eps_u);

    state = std::move(next);
    traces = std::move(next_traces);
    btraces = std::move(next_btraces);
    previous_weights = std::move(weights);
    report.iterations = k + 1;
    if (reference) report.energy_error.push_back(error_to_reference(state));

    if (done) {
      report.converged = true;
      break;
    }
    growth = change > last_change ? growth + 1 : 0;
    last_change = change;
    if (growth >= config.divergence_window) {
      throw DivergenceError("trace change grew for " + std::to_string(growth) +
                                " consecutive iterations",
                            k + 1);
    }
  }
  return result;
}

namespace {

SchemeResult with_policy(const AssembledSystem& sys, SchemeConfig config, SubareaPolicy policy,
                         const IterationState& initial, const IterationState* reference) {
  config.policies = {policy};
  return run_scheme(sys, config, initial, reference);
}

}  // namespace

SchemeResult neumann_neumann(const AssembledSystem& sys, SchemeConfig config,
                             const IterationState& initial, const IterationState* reference) {
  return with_policy(sys, std::move(config), SubareaPolicy::none(), initial, reference);
}

SchemeResult full_robin(const AssembledSystem& sys, SchemeConfig config,
                        const IterationState& initial, const IterationState* reference) {
  return with_policy(sys, std::move(config), SubareaPolicy::all(), initial, reference);
}

SchemeResult dirichlet_dirichlet_active_set(const AssembledSystem& sys, SchemeConfig config,
                                            const IterationState& initial,
                                            const IterationState* reference) {
  return with_policy(sys, std::move(config), SubareaPolicy::active_set(), initial, reference);
}

SchemeResult run_with_injected_errors(const AssembledSystem& sys, SchemeConfig config,
                                      const IterationState& initial, double epsilon,
                                      std::uint64_t seed, const IterationState* reference) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("injected error size must be nonnegative");
  config.injection.reset();
  if (epsilon > 0.0) config.injection = ErrorInjection{epsilon, seed};
  return run_scheme(sys, config, initial, reference);
}

namespace {

struct CoupledLayout {
  std::vector<int> offset;
  int size = 0;

  explicit CoupledLayout(const AssembledSystem& sys) {
    for (int a = 0; a < sys.body_count(); ++a) {
      offset.push_back(size);
      size += sys.body(a).dofs.free_size();
    }
  }
};

double total_energy(const AssembledSystem& sys, double theta, const IterationState& s) {
  double e = 0.0;
  for (int a = 0; a < sys.body_count(); ++a) {
    const auto& u = s.u[static_cast<std::size_t>(a)];
    e += 0.5 * sys.stiffness(a).quadratic_form(u) - sys.load(a).dot(u);
  }
  const auto traces = pair_traces(sys, s);
  for (int p = 0; p < sys.pair_count(); ++p) {
    const auto& t = traces[static_cast<std::size_t>(p)];
    e += penalty_energy(sys.pair(p), t.a, t.b, theta);
  }
  return e;
}

Eigen::VectorXd coupled_gradient(const AssembledSystem& sys, double theta,
                                 const CoupledLayout& layout, const IterationState& s) {
  const auto forces = all_penalty_forces(sys, theta, pair_traces(sys, s));
  Eigen::VectorXd g(layout.size);
  for (int a = 0; a < sys.body_count(); ++a) {
    const auto ia = static_cast<std::size_t>(a);
    Eigen::VectorXd ga = sys.stiffness(a) * s.u[ia] - sys.load(a);
    for (const auto& side : sys.sides(a)) {
      const auto& f = forces[static_cast<std::size_t>(side.pair)];
      ga -= trace_load(sys.body(a), sys.geometry(side), side.is_a ? f.a : f.b);
    }
    g.segment(layout.offset[ia], ga.size()) = ga;
  }
  return g;
}

SparseSymmetricMatrix coupled_hessian(const AssembledSystem& sys, double theta,
                                      const CoupledLayout& layout, const IterationState& s) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int a = 0; a < sys.body_count(); ++a) {
    const auto& K = sys.stiffness(a).lower();
    const int off = layout.offset[static_cast<std::size_t>(a)];
    for (int col = 0; col < K.outerSize(); ++col) {
      for (SparseSymmetricMatrix::Storage::InnerIterator it(K, col); it; ++it) {
        trip.emplace_back(off + static_cast<int>(it.row()), off + col, it.value());
      }
    }
  }
  const auto traces = pair_traces(sys, s);
  std::vector<std::pair<int, double>> coef;
  for (int p = 0; p < sys.pair_count(); ++p) {
    const auto& pair = sys.pair(p);
    const auto& t = traces[static_cast<std::size_t>(p)];
    const Eigen::VectorXd g = pair.gap - t.a - pair.to_side_a(t.b);
    const auto& side = pair.side_a;
    for (int sg = 0; sg < static_cast<int>(side.segments.size()); ++sg) {
      const auto& seg = side.segments[static_cast<std::size_t>(sg)];
      const int count = seg[2] >= 0 ? 3 : 2;
      for (const auto& q : trace_quadrature(side, sg)) {
        double gq = 0.0;
        for (int k = 0; k < count; ++k) gq += q.shape[static_cast<std::size_t>(k)] * g(seg[static_cast<std::size_t>(k)]);
        if (gq >= 0.0) continue;
        coef.clear();
        for (int k = 0; k < count; ++k) {
          const int ia = seg[static_cast<std::size_t>(k)];
          const double phi = q.shape[static_cast<std::size_t>(k)];
          const int ib = pair.pairing[static_cast<std::size_t>(ia)];
          for (int c = 0; c < 2; ++c) {
            const int fa = sys.body(pair.body_a).dofs.free_index(side.nodes[static_cast<std::size_t>(ia)], c);
            if (fa >= 0 && side.normal(c) != 0.0) {
              coef.emplace_back(layout.offset[static_cast<std::size_t>(pair.body_a)] + fa, phi * side.normal(c));
            }
            const int fb = sys.body(pair.body_b).dofs.free_index(pair.side_b.nodes[static_cast<std::size_t>(ib)], c);
            if (fb >= 0 && pair.side_b.normal(c) != 0.0) {
              coef.emplace_back(layout.offset[static_cast<std::size_t>(pair.body_b)] + fb, phi * pair.side_b.normal(c));
            }
          }
        }
        for (const auto& [i, ci] : coef) {
          for (const auto& [j, cj] : coef) {
            if (i >= j) trip.emplace_back(i, j, q.weight * ci * cj / theta);
          }
        }
      }
    }
  }
  SparseSymmetricMatrix::Storage lower(layout.size, layout.size);
  lower.setFromTriplets(trip.begin(), trip.end());
  return SparseSymmetricMatrix::from_lower(lower);
}

}  // namespace

IterationState solve_coupled_penalty(const AssembledSystem& sys, double theta,
                                     const IterationState& initial, double tol, int max_iter) {
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  require_state(sys, initial);
  const CoupledLayout layout(sys);
  IterationState s = initial;
  s.k = 0;
  double energy = total_energy(sys, theta, s);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd grad = coupled_gradient(sys, theta, layout, s);
    const SpdSolver solver(coupled_hessian(sys, theta, layout, s));
    const Eigen::VectorXd step = solver.solve(-grad);
    double size = 0.0;
    for (const auto& u : s.u) size += u.squaredNorm();
    size = std::sqrt(size);

    // Backtrack on the (convex, C^1) energy.
    double t = 1.0;
    IterationState trial;
    double trial_energy = 0.0;
    const double slope = grad.dot(step);
    for (;;) {
      trial.u.clear();
      for (int a = 0; a < sys.body_count(); ++a) {
        const auto ia = static_cast<std::size_t>(a);
        trial.u.push_back(s.u[ia] + t * step.segment(layout.offset[ia], s.u[ia].size()));
      }
      trial_energy = total_energy(sys, theta, trial);
      if (trial_energy <= energy + 1e-4 * t * slope + 1e-14 * std::abs(energy) || t < 1e-10) break;
      t *= 0.5;
    }
    s.u = std::move(trial.u);
    s.k = it + 1;
    energy = trial_energy;
    if (!all_finite(s.u)) throw SolverError("coupled Newton iterate became non-finite");
    if (t * step.norm() <= tol * std::max(size, std::numeric_limits<double>::min())) return s;
  }
  throw SolverError("coupled penalty Newton solve did not converge in " +
                    std::to_string(max_iter) + " steps");
}

RateEstimate estimate_rate(const std::vector<double>& errors) {
  if (errors.size() < 4) throw InvalidArgument("rate estimate needs at least 4 recorded errors");
  const std::size_t start = errors.size() / 2;
  std::vector<double> ks, ls;
  for (std::size_t k = start; k < errors.size(); ++k) {
    if (errors[k] > 0.0 && std::isfinite(errors[k])) {
      ks.push_back(static_cast<double>(k));
      ls.push_back(std::log(errors[k]));
    }
  }
  if (ks.size() < 2) throw InvalidArgument("rate estimate needs at least 2 positive tail errors");
  const double n = static_cast<double>(ks.size());
  double mk = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    mk += ks[i] / n;
    ml += ls[i] / n;
  }
  double skk = 0.0, skl = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    skk += (ks[i] - mk) * (ks[i] - mk);
    skl += (ks[i] - mk) * (ls[i] - ml);
    sll += (ls[i] - ml) * (ls[i] - ml);
  }
  const double slope = skl / skk;
  const double r2 = sll > 0.0 ? skl * skl / (skk * sll) : 1.0;
  return {std::exp(slope), r2};
}

RateEstimate estimate_rate(const ConvergenceReport& report) {
  return estimate_rate(report.energy_error);
}

void write_report_csv(std::ostream& os, const AssembledSystem& sys,
                      const ConvergenceReport& report) {
  os << "k";
  for (int a = 0; a < sys.body_count(); ++a) os << ",rel_change_body" << a + 1;
  os << ",energy_error";
  for (int p = 0; p < sys.pair_count(); ++p) os << ",psi_active_pair" << sys.pair(p).id;
  os << "\n";
  os.precision(10);
  for (std::size_t k = 0; k < report.rel_change.size(); ++k) {
    os << k + 1;
    for (double r : report.rel_change[k]) os << ',' << r;
    os << ',';
    if (k + 1 < report.energy_error.size()) os << report.energy_error[k + 1];
    for (int c : report.psi_active[k]) os << ',' << c;
    os << "\n";
  }
}

}  // namespace contactdd
