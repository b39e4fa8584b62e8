#pragma once

// Two stacked unit squares pressed together: body 0 clamped at its base,
// body 1 pushed down by `push` at its top.

#include <random>

#include "contactdd/ddm.hpp"

namespace testing_support {

using namespace contactdd;

inline ContactSystem two_squares(int n, int order, double push = 0.02, double r = 0.01) {
  const Material mat{Isotropic{1.0, 0.3}, Hypothesis::PlaneStrain};

  Mesh m0 = generate_rect_mesh(Vec2(0, 0), 1.0, 1.0, n, n, order);
  m0 = tag_boundary(std::move(m0), {{0, 0}, {1, 0}}, BoundaryTag::dirichlet(1));
  m0 = tag_boundary(std::move(m0), {{0, 0}, {0, 1}}, BoundaryTag::neumann(1));
  m0 = tag_boundary(std::move(m0), {{1, 0}, {1, 1}}, BoundaryTag::neumann(1));
  m0 = tag_boundary(std::move(m0), {{0, 1}, {1, 1}}, BoundaryTag::contact(7));

  Mesh m1 = generate_rect_mesh(Vec2(0, 1), 1.0, 1.0, n, n, order);
  m1 = tag_boundary(std::move(m1), {{0, 2}, {1, 2}}, BoundaryTag::dirichlet(1));
  m1 = tag_boundary(std::move(m1), {{0, 1}, {0, 2}}, BoundaryTag::neumann(1));
  m1 = tag_boundary(std::move(m1), {{1, 1}, {1, 2}}, BoundaryTag::neumann(1));
  m1 = tag_boundary(std::move(m1), {{0, 1}, {1, 1}}, BoundaryTag::contact(7));

  const Field down = [push](const Vec2&) { return Vec2(0.0, -push); };
  ContactSystem sys;
  sys.bodies.push_back(make_subdomain(std::move(m0), mat));
  sys.bodies.push_back(make_subdomain(std::move(m1), mat, {}, {}, {{1, down}}));
  sys.pairs.push_back(build_pair(sys.bodies[0], 0, sys.bodies[1], 1, 7, parabolic_gap(r, 1.0)));
  return sys;
}

inline IterationState zero_state(const AssembledSystem& sys) {
  IterationState s;
  for (int a = 0; a < sys.body_count(); ++a) {
    s.u.push_back(Eigen::VectorXd::Zero(sys.body(a).dofs.free_size()));
  }
  return s;
}

inline IterationState random_state(const AssembledSystem& sys, std::mt19937_64& rng,
                                   double scale = 0.01) {
  std::normal_distribution<double> g(0.0, scale);
  IterationState s = zero_state(sys);
  for (auto& u : s.u) {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = g(rng);
  }
  return s;
}

}  // namespace testing_support
