#include <sstream>

#include <gtest/gtest.h>

#include "contactdd/errors.hpp"
#include "contactdd/experiments.hpp"

using namespace contactdd;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

ExperimentSpec small_groove() {
  ExperimentSpec s = groove_defaults(8);
  s.density = 8;
  s.densities = {8};
  s.c_list = {0.1};
  return s;
}

}  // namespace

TEST(Experiments, PenaltyParameterExamples) {
  EXPECT_NEAR(penalty_theta(hertz_defaults()), 0.4, 1e-12);
  ExperimentSpec g = groove_defaults(7);
  EXPECT_NEAR(penalty_theta(g), 1.456, 1e-12);
  g.groove_theta_literal = true;
  EXPECT_NEAR(penalty_theta(g), 0.784, 1e-12);
  g.theta = 0.3;
  EXPECT_EQ(penalty_theta(g), 0.3);
}

TEST(Experiments, GrooveCompression) {
  const ExperimentSpec g = groove_defaults(7);
  const double theta = penalty_theta(g);
  // (1 + c) / c = 11 at c = 0.1
  EXPECT_NEAR(compression(g, theta), 11 * g.q * theta, 1e-14);
  const ExperimentSpec h = hertz_defaults();
  EXPECT_NEAR(compression(h, 0.4), 2.154434e-3, 1e-15);
}

TEST(Experiments, HertzMeshSize) {
  const auto sys = build_problem(hertz_defaults());
  ASSERT_EQ(sys.bodies.size(), 2u);
  ASSERT_EQ(sys.pairs.size(), 1u);
  EXPECT_EQ(sys.pairs[0].size(), 31);
  EXPECT_NEAR(sys.pairs[0].gap(sys.pairs[0].size() - 1), 4e-3, 1e-15);
  for (const auto& b : sys.bodies) EXPECT_EQ(b.dofs.free_size(), sys.bodies[0].dofs.free_size());
}

TEST(Experiments, BarModelGuess) {
  const ExperimentSpec spec = hertz_defaults();
  const Experiment exp = make_experiment(spec);
  const ContactPair& pair = exp.system->pair(0);
  const double delta = compression(spec, exp.theta);
  const double compliance = 4 * spec.b * spec.c / transverse_modulus(spec.materials[0]);
  const Eigen::VectorXd ua = trace_normal(exp.system->body(0), pair.side_a, exp.initial.u[0]);
  const Eigen::VectorXd ub =
      pair.to_side_a(trace_normal(exp.system->body(1), pair.side_b, exp.initial.u[1]));
  int open = 0;
  for (int i = 0; i < pair.size(); ++i) {
    const double d = pair.gap(i);
    if (d >= delta) {
      ++open;
      EXPECT_EQ(ua(i), 0.0);
      EXPECT_NEAR(ub(i), delta, 1e-15);
    } else {
      const double expect = compliance * (d - delta) / (exp.theta * (1 + spec.c));
      EXPECT_NEAR(ua(i), expect, 1e-15);
      EXPECT_NEAR(ub(i), delta + expect, 1e-15);
      // the bar model leaves the fraction c / (1 + c) of the overlap
      EXPECT_NEAR(d - ua(i) - ub(i), (d - delta) * spec.c / (1 + spec.c), 1e-15);
    }
  }
  EXPECT_GT(open, 0);
  EXPECT_LT(open, pair.size());
}

TEST(Experiments, GrooveSetupsAreValid) {
  for (int fig : {7, 8}) {
    const auto spec = groove_defaults(fig);
    EXPECT_EQ(spec.l, 8.0);
    const auto sys = build_problem(spec);
    EXPECT_EQ(sys.pairs[0].size(), spec.density + 1);
    // the groove is open at the right end only
    EXPECT_EQ(sys.pairs[0].gap(0), 0.0);
    EXPECT_NEAR(sys.pairs[0].gap(sys.pairs[0].size() - 1), spec.r, 1e-15);
  }
  EXPECT_THROW(groove_defaults(5), ConfigError);
}

TEST(Experiments, InvalidSpecsAreRejected) {
  ExperimentSpec s = hertz_defaults();
  s.density = 3;
  EXPECT_THROW(build_problem(s), ConfigError);
  s = hertz_defaults();
  s.order = 3;
  EXPECT_THROW(build_problem(s), Error);
  s = hertz_defaults();
  s.c = 0.0;
  EXPECT_THROW(penalty_theta(s), ConfigError);
}

TEST(Experiments, ParseGap) {
  EXPECT_NEAR(parse_gap("parabolic(0.001,1)")(Vec2(2, 0)), 4e-3, 1e-15);
  EXPECT_NEAR(parse_gap("groove(0.05, 1, 8)")(Vec2(8, 0)), 0.05, 1e-15);
  EXPECT_EQ(parse_gap("constant(0.5)")(Vec2(1, 1)), 0.5);
  EXPECT_THROW(parse_gap("wavy(1)"), ConfigError);
  EXPECT_THROW(parse_gap("parabolic(1)"), ConfigError);
}

TEST(Experiments, SolveIsDeterministic) {
  const auto spec = small_groove();
  const auto a = solve_experiment(spec);
  const auto b = solve_experiment(spec);
  ASSERT_TRUE(a.result.report.converged);
  EXPECT_EQ(a.result.report.iterations, b.result.report.iterations);
  EXPECT_EQ(a.profile.sigma, b.profile.sigma);
}

TEST(Experiments, StressProfileOfReferenceSolution) {
  const Experiment exp = make_experiment(hertz_defaults());
  const auto ref = reference_solution(exp);
  const auto p = stress_profile(exp, ref);
  ASSERT_EQ(p.coord.size(), 31u);
  EXPECT_NEAR(p.normalized.front(), -1.0, 1e-12);
  for (double s : p.sigma) EXPECT_LE(s, 0.0);
  for (std::size_t i = 0; i < p.coord.size(); ++i) {
    EXPECT_NEAR(p.sigma[i], p.penetration[i] / exp.theta, 1e-15);
  }
  EXPECT_GT(p.contact_end(), 0.5);
  EXPECT_LT(p.contact_end(), 2.0);
  EXPECT_EQ(profile_l2_distance(p, p), 0.0);
  EXPECT_EQ(profile_max_distance(p, p, 1.0), 0.0);
}

TEST(Experiments, ProfileDistances) {
  StressProfile fine, coarse;
  fine.coord = {0, 0.5, 1};
  fine.normalized = {0, 0, 0};
  coarse.coord = {0, 1};
  coarse.normalized = {1, 1};
  EXPECT_NEAR(profile_l2_distance(coarse, fine), 1.0, 1e-14);
  EXPECT_NEAR(profile_max_distance(coarse, fine, 0.6), 1.0, 1e-14);
  coarse.normalized = {0, 2};
  // interpolated value at 0.5 is 1
  EXPECT_NEAR(profile_max_distance(coarse, fine, 0.6), 1.0, 1e-14);
}

TEST(Experiments, GammaSweepOptimaAndCsv) {
  auto spec = small_groove();
  spec.schemes = {"active", "all"};
  spec.gammas = {0.3, 0.5, 0.7};
  const auto sweep = sweep_gamma(spec);
  EXPECT_EQ(sweep.rows.size(), 6u);
  ASSERT_EQ(sweep.optima.size(), 2u);
  for (const auto& o : sweep.optima) {
    int best = 1 << 30;
    for (const auto& r : sweep.rows) {
      if (r.scheme == o.scheme && r.converged) best = std::min(best, r.iterations);
    }
    EXPECT_EQ(o.iterations, best);
  }
  EXPECT_THROW(sweep.optimum("none"), Error);
  std::ostringstream a, b;
  write_gamma_csv(a, sweep);
  write_gamma_optima_csv(b, sweep);
  EXPECT_EQ(first_line(a.str()), "scheme,gamma,iterations,converged");
  EXPECT_EQ(first_line(b.str()), "scheme,gamma_opt,iterations");
}

TEST(Experiments, CompareSchemesCsv) {
  auto spec = small_groove();
  spec.schemes = {"active"};
  spec.gammas = {0.5};
  spec.eps_list = {1e-2, 1e-4, 1e-6};
  const auto cmp = compare_schemes(spec);
  ASSERT_EQ(cmp.rows.size(), 3u);
  EXPECT_LE(cmp.rows[0].iterations, cmp.rows[2].iterations);
  ASSERT_EQ(cmp.summary.size(), 1u);
  EXPECT_GT(cmp.summary[0].slope, 0.0);
  std::ostringstream a, b;
  write_compare_csv(a, cmp);
  write_compare_summary_csv(b, cmp);
  EXPECT_EQ(first_line(a.str()), "scheme,gamma,eps_u,iterations,converged");
  EXPECT_EQ(first_line(b.str()), "scheme,gamma,slope,r_squared");
}

TEST(Experiments, PenaltySweepCsv) {
  auto spec = small_groove();
  spec.c_list = {0.1, 0.05};
  const auto rows = sweep_penalty(spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GT(rows[0].max_penetration, rows[1].max_penetration);
  std::ostringstream os;
  write_penalty_csv(os, rows);
  EXPECT_EQ(first_line(os.str()),
            "c,density,max_penetration,l2_distance,oscillation,iterations,converged,"
            "l2_distance_iterate");
  std::ostringstream ps;
  write_profile_csv(ps, reference_oracle(spec));
  EXPECT_EQ(first_line(ps.str()), "x,sigma_n,sigma_star,penetration");
}
