#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "contactdd/fem.hpp"

namespace contactdd {

/// y^- = min(0, y)
inline double negative_part(double y) { return y < 0.0 ? y : 0.0; }

/// Initial normal distance between the paired surfaces, sampled at points of
/// the first body's contact side. Positive values mean separation.
using GapFunction = std::function<double(const Vec2&)>;

/// r * x1^2 / b^2
GapFunction parabolic_gap(double r, double b);
/// r * ([1 - (x1 - l)^2 / b^2]^+)^(3/2)
GapFunction groove_gap(double r, double b, double l);
GapFunction constant_gap(double d0);

/// Two matched contact sides and the initial gap between them.
struct ContactPair {
  int id = 0;
  int body_a = 0;
  int body_b = 1;
  TraceGeometry side_a;
  TraceGeometry side_b;
  /// side_a local index -> side_b local index (the node projection).
  std::vector<int> pairing;
  /// Gap at each side_a node.
  Eigen::VectorXd gap;

  int size() const noexcept { return side_a.size(); }
  /// Maps a side_a-indexed array into side_b ordering.
  Eigen::VectorXd to_side_b(const Eigen::VectorXd& on_a) const;
  /// Maps a side_b-indexed array into side_a ordering.
  Eigen::VectorXd to_side_a(const Eigen::VectorXd& on_b) const;
};

/// Pairs the contact sides tagged `pair_id` on two bodies. The sides must be
/// node-matching; nodes are identified by their coordinate along the
/// interface.
ContactPair build_pair(const SubdomainProblem& a, int body_a, const SubdomainProblem& b,
                       int body_b, int pair_id, const GapFunction& gap);

/// min(0, d - un_a - un_b) per side_a node. `un_a`, `un_b` are in their own
/// side orderings.
Eigen::VectorXd penetration(const ContactPair& pair, const Eigen::VectorXd& un_a,
                            const Eigen::VectorXd& un_b);

/// (1/2 theta) int [(d - u_an - u_bn)^-]^2 dS over side_a, with the gap
/// function interpolated from nodal values and clipped at Gauss points.
double penalty_energy(const ContactPair& pair, const Eigen::VectorXd& un_a,
                      const Eigen::VectorXd& un_b, double theta);

/// Consistent nodal normal forces (1/theta) int (d - u_an - u_bn)^- v_n dS
/// for each side. They push the bodies apart; on linear traces every
/// entry is nonpositive.
struct PenaltyForces {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};
PenaltyForces penalty_rhs(const ContactPair& pair, const Eigen::VectorXd& un_a,
                          const Eigen::VectorXd& un_b, double theta);

/// Normal contact stress (d - u_an - u_bn)^- / theta per side_a node.
Eigen::VectorXd contact_stress(const ContactPair& pair, const Eigen::VectorXd& un_a,
                               const Eigen::VectorXd& un_b, double theta);

/// How the Robin term selects its subarea on a contact pair.
struct SubareaPolicy {
  enum class Kind { None, All, FixedSegment, ActiveSet };
  Kind kind = Kind::None;
  double lo = 0.0;  // FixedSegment bounds (interface coordinate)
  double hi = 0.0;

  static SubareaPolicy none() { return {Kind::None, 0.0, 0.0}; }
  static SubareaPolicy all() { return {Kind::All, 0.0, 0.0}; }
  static SubareaPolicy segment(double lo, double hi) { return {Kind::FixedSegment, lo, hi}; }
  static SubareaPolicy active_set() { return {Kind::ActiveSet, 0.0, 0.0}; }

  bool stationary() const noexcept { return kind != Kind::ActiveSet; }
  std::string name() const;
};

/// Parses "none", "all", "active", or "segment:<lo>:<hi>".
SubareaPolicy parse_policy(const std::string& text);

struct PolicyWeights {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

/// 0/1 weights psi on both sides of the pair.
PolicyWeights evaluate_policy(const SubareaPolicy& policy, const ContactPair& pair,
                              const Eigen::VectorXd& un_a, const Eigen::VectorXd& un_b);

}  // namespace contactdd
