#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contactdd/ddm.hpp"

namespace contactdd {

enum class ProblemKind { HertzTransversal, Groove };

/// Everything needed to build and run one of the two-body experiments.
/// Lengths are in units of b, stresses in units of the reference modulus.
struct ExperimentSpec {
  ProblemKind problem = ProblemKind::HertzTransversal;

  // geometry and loading
  double b = 1.0;
  double r = 1e-3;               // gap amplitude
  double delta_factor = 2.154434;  // Hertz compression = delta_factor * r
  double l = 8.0;                // groove problem: body length
  double h = 8.0;                // groove problem: body height
  double q = 0.01;               // groove problem: load intensity
  std::optional<std::string> gap;  // overrides the built-in gap, e.g. "constant(0)"

  std::vector<Material> materials;  // one per body

  // discretization
  int density = 15;  // elements per contact side
  int order = 2;
  double grading = 1.1;  // cell growth away from the contact zone

  // penalty and iteration
  double c = 0.05;
  std::optional<double> theta;  // explicit penalty parameter, bypasses c
  // Groove problem: weight materials by (1 - nu)^2 instead of (1 - nu^2).
  // The (1 - nu^2) form is the one the bar-model initial guess is built on;
  // with (1 - nu)^2 that guess has no penetration at all.
  bool groove_theta_literal = false;
  SubareaPolicy policy = SubareaPolicy::none();
  double gamma = 0.72;
  double eps_u = 1e-3;
  int max_iter = 200;
  std::uint64_t seed = 1;
  double inject_epsilon = 0.0;  // > 0 adds seeded perturbations every iteration

  // oracle run (finer mesh, smaller penalty)
  double oracle_gamma = 0.5;
  double oracle_eps = 1e-8;
  int oracle_max_iter = 20000;

  // sweeps
  std::vector<std::string> schemes;
  std::vector<double> gammas;
  std::vector<double> c_list;
  std::vector<int> densities;
  std::vector<double> eps_list;
};

/// Two transversely isotropic 4b x 4b bodies with a parabolic gap.
ExperimentSpec hertz_defaults();
/// Two isotropic bodies with a groove; figure 7 (h = l = 8b, q = 0.01E) or
/// figure 8 (l = 8b, h = 2b, q = 0.0075E) setups.
ExperimentSpec groove_defaults(int figure = 7);

/// "parabolic(r,b)", "groove(r,b,l)" or "constant(d0)". Throws ConfigError.
GapFunction parse_gap(const std::string& text);

/// E' of a material (E for isotropic ones).
double transverse_modulus(const Material& m);

ContactSystem problem_hertz_transversal(const ExperimentSpec& spec);
ContactSystem problem_groove(const ExperimentSpec& spec);
ContactSystem build_problem(const ExperimentSpec& spec);

/// Hertz: 4bc (1/E'_1 + 1/E'_2); groove: c h sum (1 - nu_a^2) / E_a, or
/// c h sum (1 - nu_a)^2 / E_a with groove_theta_literal.
double penalty_theta(const ExperimentSpec& spec);

/// Rigid approach of the bodies used by the bar model: delta_factor * r for
/// the Hertz problem, q theta (1 + c) / c for the groove problem.
double compression(const ExperimentSpec& spec, double theta);

/// Bar-model normal traces on both contact sides; interior dofs are zero.
IterationState bar_model_initial_guess(const ExperimentSpec& spec, const AssembledSystem& sys,
                                       double theta);

/// A built experiment ready to iterate.
struct Experiment {
  ExperimentSpec spec;
  std::unique_ptr<AssembledSystem> system;
  double theta = 0.0;
  IterationState initial;

  SchemeConfig config() const;
};

Experiment make_experiment(const ExperimentSpec& spec);

/// Normal contact stress along the first pair's contact side.
struct StressProfile {
  std::vector<double> coord;
  std::vector<double> sigma;       // raw stress
  std::vector<double> normalized;  // sigma / |sigma(0)| (Hertz) or sigma / E (groove)
  std::vector<double> penetration;

  /// Largest coordinate with nonzero contact stress (start of trace if none).
  double contact_end() const;
};

StressProfile stress_profile(const Experiment& exp, const IterationState& state);

/// Converged solution of the experiment's penalty problem.
IterationState reference_solution(const Experiment& exp);

/// Converged solution at 4x mesh density and theta / 4. The coupled problem
/// is solved directly; an active-set run from that solution must then meet
/// oracle_eps in one step. Throws Error otherwise.
StressProfile reference_oracle(const ExperimentSpec& spec);

/// Distance sqrt(int (a - b)^2 dx) between two normalized profiles, with
/// `coarse` interpolated linearly onto the nodes of `fine`.
double profile_l2_distance(const StressProfile& coarse, const StressProfile& fine);

/// Largest |x| over the profile restricted to coord <= `upto`, with `coarse`
/// interpolated onto the nodes of `fine`.
double profile_max_distance(const StressProfile& coarse, const StressProfile& fine, double upto);

struct SolveOutcome {
  Experiment experiment;
  SchemeResult result;
  StressProfile profile;
};

/// Runs the spec's policy at its gamma from the bar-model initial guess.
SolveOutcome solve_experiment(const ExperimentSpec& spec);

struct GammaRow {
  std::string scheme;
  double gamma = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct GammaOptimum {
  std::string scheme;
  double gamma = 0.0;
  int iterations = 0;
};

struct GammaSweep {
  std::vector<GammaRow> rows;
  std::vector<GammaOptimum> optima;  // one per scheme, in input order

  const GammaOptimum& optimum(const std::string& scheme) const;
};

/// Iteration counts over the gamma grid for every scheme. The optimum is the
/// middle of the grid points attaining the minimal count. Divergent runs are
/// reported with iterations = max_iter and converged = false.
GammaSweep sweep_gamma(const ExperimentSpec& spec);

/// Profile quantities refer to the converged penalty solution; iterations,
/// converged and l2_distance_iterate describe the active-set run that
/// approximates it (the iterate's distance is NaN after divergence).
struct PenaltyRow {
  double c = 0.0;
  int density = 0;
  double max_penetration = 0.0;
  double l2_distance = 0.0;
  double oscillation = 0.0;  // largest second difference of the normalized profile
  int iterations = 0;
  bool converged = false;
  double l2_distance_iterate = 0.0;
};

/// Every (c, density) pair against one oracle built from the finest density
/// and smallest c.
std::vector<PenaltyRow> sweep_penalty(const ExperimentSpec& spec);
std::vector<PenaltyRow> sweep_penalty(const ExperimentSpec& spec, const StressProfile& oracle);

struct CompareRow {
  std::string scheme;
  double gamma = 0.0;
  double eps_u = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct CompareSummary {
  std::string scheme;
  double gamma = 0.0;
  double slope = 0.0;      // iterations per decade of eps_u
  double r_squared = 0.0;  // of iterations against -log10(eps_u)
};

struct SchemeComparison {
  std::vector<CompareRow> rows;
  std::vector<CompareSummary> summary;
};

/// Iterations against eps_list at each scheme's optimal gamma.
SchemeComparison compare_schemes(const ExperimentSpec& spec);
SchemeComparison compare_schemes(const ExperimentSpec& spec, const GammaSweep& sweep);

void write_gamma_csv(std::ostream& os, const GammaSweep& sweep);
void write_gamma_optima_csv(std::ostream& os, const GammaSweep& sweep);
void write_penalty_csv(std::ostream& os, const std::vector<PenaltyRow>& rows);
void write_compare_csv(std::ostream& os, const SchemeComparison& cmp);
void write_compare_summary_csv(std::ostream& os, const SchemeComparison& cmp);
void write_profile_csv(std::ostream& os, const StressProfile& profile);

}  // namespace contactdd
