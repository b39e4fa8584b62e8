#include "contactdd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <regex>
#include <sstream>

#include "contactdd/errors.hpp"

namespace contactdd {

namespace {

Material hertz_material() {
  // E' = 1 across the interface, E = 2 in the isotropy plane, G/G' = 2.
  const double E = 2.0, nu = 0.3;
  const double G = E / (2.0 * (1.0 + nu));
  return Material{TransverselyIsotropic{E, 1.0, nu, 0.3, G / 2.0}, Hypothesis::PlaneStrain};
}

double poisson(const Material& m) {
  if (const auto* iso = std::get_if<Isotropic>(&m.law)) return iso->nu;
  return std::get<TransverselyIsotropic>(m.law).nu_t;
}

const Material& material_of(const ExperimentSpec& spec, int body) {
  if (spec.materials.size() != 2) throw ConfigError("experiments need exactly two materials");
  return spec.materials[static_cast<std::size_t>(body)];
}

void check_spec(const ExperimentSpec& spec) {
  if (!(spec.b > 0.0)) throw ConfigError("b must be positive");
  if (spec.density < 4) throw ConfigError("mesh density must be at least 4");
  if (spec.order != 1 && spec.order != 2) throw ConfigError("element order must be 1 or 2");
  if (!(spec.grading >= 1.0)) throw ConfigError("mesh grading must be at least 1");
  if (!(spec.c > 0.0) && !spec.theta) throw ConfigError("penalty coefficient c must be positive");
  if (spec.theta && !(*spec.theta > 0.0)) throw ConfigError("theta must be positive");
  if (spec.problem == ProblemKind::Groove && !(spec.l > 0.0 && spec.h > 0.0)) {
    throw ConfigError("groove body dimensions must be positive");
  }
  material_of(spec, 0);
}

// Graded breakpoints on [lo, hi], finest at hi when fine_at_hi, else at lo.
std::vector<double> graded_towards(double lo, double hi, double first, double growth,
                                   bool fine_at_hi) {
  auto g = graded_breakpoints(0.0, hi - lo, first, growth);
  std::vector<double> out;
  if (fine_at_hi) {
    for (auto it = g.rbegin(); it != g.rend(); ++it) out.push_back(hi - *it);
  } else {
    for (double x : g) out.push_back(lo + x);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> uniform(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(lo + (hi - lo) * i / n);
  out.back() = hi;
  return out;
}

GapFunction gap_for(const ExperimentSpec& spec) {
  if (spec.gap) return parse_gap(*spec.gap);
  if (spec.problem == ProblemKind::HertzTransversal) return parabolic_gap(spec.r, spec.b);
  return groove_gap(spec.r, spec.b, spec.l);
}

double lerp_profile(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - t) * y[i - 1] + t * y[i];
}

std::vector<double> resample(const StressProfile& coarse, const StressProfile& fine) {
  std::vector<double> out;
  for (double x : fine.coord) out.push_back(lerp_profile(coarse.coord, coarse.normalized, x));
  return out;
}

struct RunOutcome {
  int iterations = 0;
  bool converged = false;
  std::optional<IterationState> state;
};

RunOutcome run_guarded(const Experiment& exp, SchemeConfig config) {
  try {
    auto r = run_scheme(*exp.system, config, exp.initial);
    return {r.report.iterations, r.report.converged, std::move(r.state)};
  } catch (const DivergenceError&) {
    return {config.max_iter, false, std::nullopt};
  } catch (const SolverError&) {
    return {config.max_iter, false, std::nullopt};
  }
}

std::vector<std::string> schemes_or_default(const ExperimentSpec& spec) {
  if (!spec.schemes.empty()) return spec.schemes;
  return {spec.policy.name()};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

ExperimentSpec hertz_defaults() {
  ExperimentSpec s;
  s.problem = ProblemKind::HertzTransversal;
  s.r = 1e-3;
  s.materials = {hertz_material(), hertz_material()};
  s.density = 15;
  s.order = 2;
  s.c = 0.05;
  s.policy = SubareaPolicy::segment(0.0, 1.0);
  s.gamma = 0.72;
  s.schemes = {"none", "segment:0:0.5", "segment:0:1", "segment:0:1.5", "all"};
  for (int i = 1; i <= 99; ++i) s.gammas.push_back(0.02 * i);
  s.c_list = {0.1, 0.05, 0.01};
  s.densities = {15};
  s.eps_list = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  return s;
}

ExperimentSpec groove_defaults(int figure) {
  if (figure != 7 && figure != 8) throw ConfigError("groove setup must be figure 7 or 8");
  ExperimentSpec s;
  s.problem = ProblemKind::Groove;
  s.r = 0.05;
  s.l = 8.0;
  s.h = figure == 7 ? 8.0 : 2.0;
  s.q = figure == 7 ? 0.01 : 0.0075;
  const Material iso{Isotropic{1.0, 0.3}, Hypothesis::PlaneStrain};
  s.materials = {iso, iso};
  s.order = 1;
  s.density = figure == 7 ? 64 : 32;
  s.c = 0.1;
  s.policy = SubareaPolicy::active_set();
  s.gamma = 0.55;
  s.schemes = {"active"};
  for (int i = 1; i <= 99; ++i) s.gammas.push_back(0.02 * i);
  if (figure == 7) {
    s.c_list = {0.1, 0.05, 0.01, 0.0025};
    s.densities = {64};
  } else {
    s.c_list = {0.1, 0.01};
    s.densities = {32, 64};
  }
  s.eps_list = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  return s;
}

GapFunction parse_gap(const std::string& text) {
  static const std::regex call(R"(\s*(\w+)\s*\(([^)]*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, call)) throw ConfigError("cannot parse gap '" + text + "'");
  std::vector<double> args;
  std::stringstream ss(m[2].str());
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad gap argument '" + item + "'");
    }
  }
  const std::string name = m[1].str();
  if (name == "parabolic" && args.size() == 2 && args[1] > 0.0) return parabolic_gap(args[0], args[1]);
  if (name == "groove" && args.size() == 3 && args[1] > 0.0) {
    return groove_gap(args[0], args[1], args[2]);
  }
  if (name == "constant" && args.size() == 1) return constant_gap(args[0]);
  throw ConfigError("unknown gap function '" + text + "'");
}

double transverse_modulus(const Material& m) {
  if (const auto* iso = std::get_if<Isotropic>(&m.law)) return iso->E;
  return std::get<TransverselyIsotropic>(m.law).E_t;
}

ContactSystem problem_hertz_transversal(const ExperimentSpec& spec) {
  check_spec(spec);
  const double b = spec.b;
  const double cell = 2.0 * b / spec.density;
  auto xs = uniform(0.0, 2.0 * b, spec.density);
  const auto tail = graded_towards(2.0 * b, 4.0 * b, cell * spec.grading, spec.grading, false);
  xs.insert(xs.end(), tail.begin() + 1, tail.end());
  const auto ys1 = graded_towards(0.0, 4.0 * b, cell, spec.grading, true);
  const auto ys2 = graded_towards(4.0 * b, 8.0 * b, cell, spec.grading, false);
  const double delta = compression(spec, 0.0);

  // Body 1 rests on a fixed base; body 2 is pushed down by delta at its top.
  // The face x1 = 0 is a symmetry plane.
  Mesh m1 = generate_grid_mesh(xs, ys1, spec.order);
  m1 = tag_boundary(std::move(m1), {{0, 0}, {4 * b, 0}}, BoundaryTag::dirichlet(1));
  m1 = tag_boundary(std::move(m1), {{0, 0}, {0, 4 * b}}, BoundaryTag::dirichlet(2, Components::X));
  m1 = tag_boundary(std::move(m1), {{4 * b, 0}, {4 * b, 4 * b}}, BoundaryTag::neumann(1));
  m1 = tag_boundary(std::move(m1), {{2 * b, 4 * b}, {4 * b, 4 * b}}, BoundaryTag::neumann(1));
  m1 = tag_boundary(std::move(m1), {{0, 4 * b}, {2 * b, 4 * b}}, BoundaryTag::contact(12));

  Mesh m2 = generate_grid_mesh(xs, ys2, spec.order);
  m2 = tag_boundary(std::move(m2), {{0, 8 * b}, {4 * b, 8 * b}}, BoundaryTag::dirichlet(1));
  m2 = tag_boundary(std::move(m2), {{0, 4 * b}, {0, 8 * b}}, BoundaryTag::dirichlet(2, Components::X));
  m2 = tag_boundary(std::move(m2), {{4 * b, 4 * b}, {4 * b, 8 * b}}, BoundaryTag::neumann(1));
  m2 = tag_boundary(std::move(m2), {{2 * b, 4 * b}, {4 * b, 4 * b}}, BoundaryTag::neumann(1));
  m2 = tag_boundary(std::move(m2), {{0, 4 * b}, {2 * b, 4 * b}}, BoundaryTag::contact(12));

  const Field zero = [](const Vec2&) { return Vec2(0.0, 0.0); };
  const Field push = [delta](const Vec2&) { return Vec2(0.0, -delta); };
  ContactSystem sys;
  sys.bodies.push_back(make_subdomain(std::move(m1), material_of(spec, 0), {}, {{1, zero}}, {}));
  sys.bodies.push_back(
      make_subdomain(std::move(m2), material_of(spec, 1), {}, {{1, zero}}, {{1, push}}));
  sys.pairs.push_back(build_pair(sys.bodies[0], 0, sys.bodies[1], 1, 12, gap_for(spec)));
  return sys;
}

ContactSystem problem_groove(const ExperimentSpec& spec) {
  check_spec(spec);
  const double l = spec.l, h = spec.h;
  const double cell = l / spec.density;
  const auto xs = uniform(0.0, l, spec.density);
  const auto ys1 = graded_towards(0.0, h, cell, spec.grading, true);
  const auto ys2 = graded_towards(h, 2 * h, cell, spec.grading, false);

  // Rollers on both sides; body 1 slides on its base, body 2 carries the
  // load q on its top face and is held vertically only by contact.
  Mesh m1 = generate_grid_mesh(xs, ys1, spec.order);
  m1 = tag_boundary(std::move(m1), {{0, 0}, {l, 0}}, BoundaryTag::dirichlet(1, Components::Y));
  m1 = tag_boundary(std::move(m1), {{0, 0}, {0, h}}, BoundaryTag::dirichlet(2, Components::X));
  m1 = tag_boundary(std::move(m1), {{l, 0}, {l, h}}, BoundaryTag::dirichlet(3, Components::X));
  m1 = tag_boundary(std::move(m1), {{0, h}, {l, h}}, BoundaryTag::contact(12));

  Mesh m2 = generate_grid_mesh(xs, ys2, spec.order);
  m2 = tag_boundary(std::move(m2), {{0, 2 * h}, {l, 2 * h}}, BoundaryTag::neumann(1));
  m2 = tag_boundary(std::move(m2), {{0, h}, {0, 2 * h}}, BoundaryTag::dirichlet(2, Components::X));
  m2 = tag_boundary(std::move(m2), {{l, h}, {l, 2 * h}}, BoundaryTag::dirichlet(3, Components::X));
  m2 = tag_boundary(std::move(m2), {{0, h}, {l, h}}, BoundaryTag::contact(12));

  const double q = spec.q * transverse_modulus(material_of(spec, 1));
  const Field load = [q](const Vec2&) { return Vec2(0.0, -q); };
  ContactSystem sys;
  sys.bodies.push_back(make_subdomain(std::move(m1), material_of(spec, 0)));
  sys.bodies.push_back(make_subdomain(std::move(m2), material_of(spec, 1), {}, {{1, load}}, {}));
  sys.pairs.push_back(build_pair(sys.bodies[0], 0, sys.bodies[1], 1, 12, gap_for(spec)));
  return sys;
}

ContactSystem build_problem(const ExperimentSpec& spec) {
  return spec.problem == ProblemKind::HertzTransversal ? problem_hertz_transversal(spec)
                                                       : problem_groove(spec);
}

double penalty_theta(const ExperimentSpec& spec) {
  if (spec.theta) return *spec.theta;
  if (!(spec.c > 0.0)) throw ConfigError("penalty coefficient c must be positive");
  if (spec.problem == ProblemKind::HertzTransversal) {
    return 4.0 * spec.b * spec.c *
           (1.0 / transverse_modulus(material_of(spec, 0)) +
            1.0 / transverse_modulus(material_of(spec, 1)));
  }
  double sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    const auto& m = material_of(spec, a);
    const double nu = poisson(m);
    const double w = spec.groove_theta_literal ? (1.0 - nu) * (1.0 - nu) : 1.0 - nu * nu;
    sum += w / transverse_modulus(m);
  }
  return spec.c * spec.h * sum;
}

double compression(const ExperimentSpec& spec, double theta) {
  if (spec.problem == ProblemKind::HertzTransversal) return spec.delta_factor * spec.r;
  const double E = transverse_modulus(material_of(spec, 1));
  return spec.q * E * theta * (1.0 + spec.c) / spec.c;
}

IterationState bar_model_initial_guess(const ExperimentSpec& spec, const AssembledSystem& sys,
                                       double theta) {
  const double delta = compression(spec, theta);
  const double c = spec.c;
  IterationState s;
  for (int a = 0; a < sys.body_count(); ++a) {
    s.u.push_back(Eigen::VectorXd::Zero(sys.body(a).dofs.free_size()));
  }
  for (int p = 0; p < sys.pair_count(); ++p) {
    const auto& pair = sys.pair(p);
    for (int side = 0; side < 2; ++side) {
      const int body = side == 0 ? pair.body_a : pair.body_b;
      const auto& geo = side == 0 ? pair.side_a : pair.side_b;
      const auto& m = material_of(spec, body);
      const Eigen::VectorXd gap_b = pair.to_side_b(pair.gap);
      auto gap_here = [&](int i) { return side == 0 ? pair.gap(i) : gap_b(i); };
      double compliance = 0.0;  // bar length times compliance
      if (spec.problem == ProblemKind::HertzTransversal) {
        compliance = 4.0 * spec.b * c / transverse_modulus(m);
      } else {
        const double nu = poisson(m);
        compliance = c * spec.h * (1.0 - nu * nu) / transverse_modulus(m);
      }
      const auto& dofs = sys.body(body).dofs;
      auto& u = s.u[static_cast<std::size_t>(body)];
      for (int i = 0; i < geo.size(); ++i) {
        const double d = gap_here(i);
        double un = compliance * negative_part(d - delta) / (theta * (1.0 + c));
        if (side == 1) un += delta;
        const int node = geo.nodes[static_cast<std::size_t>(i)];
        for (int comp = 0; comp < 2; ++comp) {
          const int f = dofs.free_index(node, comp);
          if (f >= 0) u(f) = un * geo.normal(comp);
        }
      }
    }
  }
  return s;
}

SchemeConfig Experiment::config() const {
  SchemeConfig c;
  c.theta = theta;
  c.gamma = spec.gamma;
  c.policies = {spec.policy};
  c.eps_u = spec.eps_u;
  c.max_iter = spec.max_iter;
  if (spec.inject_epsilon > 0.0) c.injection = ErrorInjection{spec.inject_epsilon, spec.seed};
  return c;
}

Experiment make_experiment(const ExperimentSpec& spec) {
  Experiment e;
  e.spec = spec;
  e.system = std::make_unique<AssembledSystem>(build_problem(spec));
  e.theta = penalty_theta(spec);
  e.initial = bar_model_initial_guess(spec, *e.system, e.theta);
  return e;
}

double StressProfile::contact_end() const {
  double end = coord.empty() ? 0.0 : coord.front();
  for (std::size_t i = 0; i < coord.size(); ++i) {
    if (sigma[i] < 0.0) end = std::max(end, coord[i]);
  }
  return end;
}

StressProfile stress_profile(const Experiment& exp, const IterationState& state) {
  const auto& sys = *exp.system;
  const auto traces = pair_traces(sys, state);
  const auto& pair = sys.pair(0);
  const auto& t = traces.front();
  const Eigen::VectorXd pen = penetration(pair, t.a, t.b);
  StressProfile out;
  out.coord = pair.side_a.coord;
  double scale = 1.0;
  if (exp.spec.problem == ProblemKind::HertzTransversal) {
    std::size_t at0 = 0;
    for (std::size_t i = 0; i < out.coord.size(); ++i) {
      if (std::abs(out.coord[i]) < std::abs(out.coord[at0])) at0 = i;
    }
    scale = std::abs(pen(static_cast<Eigen::Index>(at0)) / exp.theta);
    if (scale == 0.0) scale = 1.0;
  } else {
    scale = transverse_modulus(material_of(exp.spec, 0));
  }
  for (int i = 0; i < pair.size(); ++i) {
    const double s = pen(i) / exp.theta;
    out.sigma.push_back(s);
    out.normalized.push_back(s / scale);
    out.penetration.push_back(pen(i));
  }
  return out;
}

IterationState reference_solution(const Experiment& exp) {
  return solve_coupled_penalty(*exp.system, exp.theta, exp.initial);
}

StressProfile reference_oracle(const ExperimentSpec& spec) {
  ExperimentSpec fine = spec;
  fine.density = 4 * spec.density;
  fine.theta = penalty_theta(spec) / 4.0;
  fine.c = spec.c / 4.0;
  fine.policy = SubareaPolicy::active_set();
  fine.gamma = spec.oracle_gamma;
  fine.eps_u = spec.oracle_eps;
  const Experiment exp = make_experiment(fine);
  IterationState solution;
  try {
    solution = solve_coupled_penalty(*exp.system, exp.theta, exp.initial, 1e-13,
                                     spec.oracle_max_iter);
  } catch (const SolverError& e) {
    throw Error(std::string("oracle solve failed: ") + e.what());
  }
  SchemeConfig check = exp.config();
  check.max_iter = 1;
  const auto r = run_scheme(*exp.system, check, solution);
  if (!r.report.converged) throw Error("oracle solution is not a fixed point of the active-set scheme");
  return stress_profile(exp, solution);
}

double profile_l2_distance(const StressProfile& coarse, const StressProfile& fine) {
  const auto c = resample(coarse, fine);
  double sum = 0.0;
  for (std::size_t i = 1; i < fine.coord.size(); ++i) {
    const double d0 = c[i - 1] - fine.normalized[i - 1];
    const double d1 = c[i] - fine.normalized[i];
    sum += 0.5 * (d0 * d0 + d1 * d1) * (fine.coord[i] - fine.coord[i - 1]);
  }
  return std::sqrt(sum);
}

double profile_max_distance(const StressProfile& coarse, const StressProfile& fine, double upto) {
  const auto c = resample(coarse, fine);
  double worst = 0.0;
  for (std::size_t i = 0; i < fine.coord.size(); ++i) {
    if (fine.coord[i] <= upto) worst = std::max(worst, std::abs(c[i] - fine.normalized[i]));
  }
  return worst;
}

SolveOutcome solve_experiment(const ExperimentSpec& spec) {
  SolveOutcome out;
  out.experiment = make_experiment(spec);
  out.result = run_scheme(*out.experiment.system, out.experiment.config(), out.experiment.initial);
  out.profile = stress_profile(out.experiment, out.result.state);
  return out;
}

const GammaOptimum& GammaSweep::optimum(const std::string& scheme) const {
  for (const auto& o : optima) {
    if (o.scheme == scheme) return o;
  }
  throw InvalidArgument("no gamma optimum for scheme '" + scheme + "'");
}

GammaSweep sweep_gamma(const ExperimentSpec& spec) {
  if (spec.gammas.empty()) throw ConfigError("gamma grid is empty");
  for (double g : spec.gammas) {
    if (!(g > 0.0 && g < 2.0)) throw ConfigError("gamma grid must lie in (0, 2)");
  }
  Experiment exp = make_experiment(spec);
  GammaSweep out;
  for (const auto& name : schemes_or_default(spec)) {
    const SubareaPolicy policy = parse_policy(name);
    std::vector<GammaRow> rows;
    for (double g : spec.gammas) {
      SchemeConfig config = exp.config();
      config.policies = {policy};
      config.gamma = g;
      const auto r = run_guarded(exp, config);
      rows.push_back({name, g, r.iterations, r.converged});
    }
    int best = -1;
    for (const auto& r : rows) {
      if (r.converged && (best < 0 || r.iterations < best)) best = r.iterations;
    }
    if (best >= 0) {
      std::vector<double> ties;
      for (const auto& r : rows) {
        if (r.converged && r.iterations == best) ties.push_back(r.gamma);
      }
      out.optima.push_back({name, ties[(ties.size() - 1) / 2], best});
    } else {
      out.optima.push_back({name, std::nan(""), spec.max_iter});
    }
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<PenaltyRow> sweep_penalty(const ExperimentSpec& spec) {
  if (spec.c_list.empty() || spec.densities.empty()) {
    throw ConfigError("penalty sweep needs nonempty c and density lists");
  }
  ExperimentSpec base = spec;
  base.theta.reset();
  base.density = *std::max_element(spec.densities.begin(), spec.densities.end());
  base.c = *std::min_element(spec.c_list.begin(), spec.c_list.end());
  return sweep_penalty(spec, reference_oracle(base));
}

std::vector<PenaltyRow> sweep_penalty(const ExperimentSpec& spec, const StressProfile& oracle) {
  std::vector<PenaltyRow> rows;
  for (int density : spec.densities) {
    for (double c : spec.c_list) {
      ExperimentSpec s = spec;
      s.theta.reset();
      s.c = c;
      s.density = density;
      s.policy = SubareaPolicy::active_set();
      const Experiment exp = make_experiment(s);
      const auto r = run_guarded(exp, exp.config());
      PenaltyRow row;
      row.c = c;
      row.density = density;
      row.iterations = r.iterations;
      row.converged = r.converged;
      row.l2_distance_iterate =
          r.state ? profile_l2_distance(stress_profile(exp, *r.state), oracle) : std::nan("");
      const auto prof = stress_profile(exp, reference_solution(exp));
      for (double p : prof.penetration) row.max_penetration = std::max(row.max_penetration, -p);
      row.l2_distance = profile_l2_distance(prof, oracle);
      for (std::size_t i = 1; i + 1 < prof.normalized.size(); ++i) {
        row.oscillation = std::max(row.oscillation,
                                   std::abs(prof.normalized[i - 1] - 2.0 * prof.normalized[i] +
                                            prof.normalized[i + 1]));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

SchemeComparison compare_schemes(const ExperimentSpec& spec) {
  return compare_schemes(spec, sweep_gamma(spec));
}

SchemeComparison compare_schemes(const ExperimentSpec& spec, const GammaSweep& sweep) {
  if (spec.eps_list.empty()) throw ConfigError("accuracy list is empty");
  Experiment exp = make_experiment(spec);
  SchemeComparison out;
  for (const auto& name : schemes_or_default(spec)) {
    const auto& opt = sweep.optimum(name);
    std::vector<double> xs, ys;
    for (double eps : spec.eps_list) {
      CompareRow row{name, opt.gamma, eps, spec.max_iter, false};
      if (std::isfinite(opt.gamma)) {
        SchemeConfig config = exp.config();
        config.policies = {parse_policy(name)};
        config.gamma = opt.gamma;
        config.eps_u = eps;
        const auto r = run_guarded(exp, config);
        row.iterations = r.iterations;
        row.converged = r.converged;
        if (r.converged) {
          xs.push_back(-std::log10(eps));
          ys.push_back(r.iterations);
        }
      }
      out.rows.push_back(row);
    }
    CompareSummary sum{name, opt.gamma, std::nan(""), std::nan("")};
    if (xs.size() >= 2) {
      const double n = static_cast<double>(xs.size());
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
      }
      double sxx = 0.0, sxy = 0.0, syy = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
      }
      if (sxx > 0.0) {
        sum.slope = sxy / sxx;
        sum.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
      }
    }
    out.summary.push_back(sum);
  }
  return out;
}

void write_gamma_csv(std::ostream& os, const GammaSweep& sweep) {
  os << "scheme,gamma,iterations,converged\n";
  for (const auto& r : sweep.rows) {
    os << r.scheme << ',' << fmt(r.gamma) << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
       << "\n";
  }
}

void write_gamma_optima_csv(std::ostream& os, const GammaSweep& sweep) {
  os << "scheme,gamma_opt,iterations\n";
  for (const auto& o : sweep.optima) os << o.scheme << ',' << fmt(o.gamma) << ',' << o.iterations << "\n";
}

void write_penalty_csv(std::ostream& os, const std::vector<PenaltyRow>& rows) {
  os << "c,density,max_penetration,l2_distance,oscillation,iterations,converged,"
        "l2_distance_iterate\n";
  for (const auto& r : rows) {
    os << fmt(r.c) << ',' << r.density << ',' << fmt(r.max_penetration) << ','
       << fmt(r.l2_distance) << ',' << fmt(r.oscillation) << ',' << r.iterations << ','
       << (r.converged ? 1 : 0) << ',' << fmt(r.l2_distance_iterate) << "\n";
  }
}

void write_compare_csv(std::ostream& os, const SchemeComparison& cmp) {
  os << "scheme,gamma,eps_u,iterations,converged\n";
  for (const auto& r : cmp.rows) {
    os << r.scheme << ',' << fmt(r.gamma) << ',' << fmt(r.eps_u) << ',' << r.iterations << ','
       << (r.converged ? 1 : 0) << "\n";
  }
}

void write_compare_summary_csv(std::ostream& os, const SchemeComparison& cmp) {
  os << "scheme,gamma,slope,r_squared\n";
  for (const auto& s : cmp.summary) {
    os << s.scheme << ',' << fmt(s.gamma) << ',' << fmt(s.slope) << ',' << fmt(s.r_squared) << "\n";
  }
}

void write_profile_csv(std::ostream& os, const StressProfile& profile) {
  os << "x,sigma_n,sigma_star,penetration\n";
  for (std::size_t i = 0; i < profile.coord.size(); ++i) {
    os << fmt(profile.coord[i]) << ',' << fmt(profile.sigma[i]) << ','
       << fmt(profile.normalized[i]) << ',' << fmt(profile.penetration[i]) << "\n";
  }
}

}  // namespace contactdd
