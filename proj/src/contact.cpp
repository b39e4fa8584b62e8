#include "contactdd/contact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contactdd/errors.hpp"

namespace contactdd {

namespace {

void require_size(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() != n) {
    throw InvalidArgument(std::string(what) + " has " + std::to_string(v.size()) +
                          " entries, trace has " + std::to_string(n));
  }
}

// Nodal gap function d - un_a - un_b in side_a ordering.
Eigen::VectorXd nodal_gap(const ContactPair& pair, const Eigen::VectorXd& un_a,
                          const Eigen::VectorXd& un_b) {
  require_size(un_a, pair.side_a.size(), "un_a");
  require_size(un_b, pair.side_b.size(), "un_b");
  return pair.gap - un_a - pair.to_side_a(un_b);
}

// Consistent integral (1/theta) int g_h^- phi_i over one side.
Eigen::VectorXd side_forces(const TraceGeometry& side, const Eigen::VectorXd& g, double theta) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(side.size());
  for (int s = 0; s < static_cast<int>(side.segments.size()); ++s) {
    const auto& seg = side.segments[static_cast<std::size_t>(s)];
    const int count = seg[2] >= 0 ? 3 : 2;
    for (const auto& q : trace_quadrature(side, s)) {
      double gq = 0.0;
      for (int k = 0; k < count; ++k) gq += q.shape[static_cast<std::size_t>(k)] * g(seg[static_cast<std::size_t>(k)]);
      const double pen = negative_part(gq);
      if (pen == 0.0) continue;
      for (int k = 0; k < count; ++k) {
        r(seg[static_cast<std::size_t>(k)]) += q.weight * pen * q.shape[static_cast<std::size_t>(k)] / theta;
      }
    }
  }
  return r;
}

void require_theta(double theta) {
  if (!(theta > 0.0)) throw InvalidArgument("penalty parameter theta must be positive");
}

}  // namespace

GapFunction parabolic_gap(double r, double b) {
  return [r, b](const Vec2& x) { return r * x.x() * x.x() / (b * b); };
}

GapFunction groove_gap(double r, double b, double l) {
  return [r, b, l](const Vec2& x) {
    const double t = std::max(0.0, 1.0 - (x.x() - l) * (x.x() - l) / (b * b));
    return r * std::pow(t, 1.5);
  };
}

GapFunction constant_gap(double d0) {
  return [d0](const Vec2&) { return d0; };
}

Eigen::VectorXd ContactPair::to_side_b(const Eigen::VectorXd& on_a) const {
  Eigen::VectorXd out(side_b.size());
  for (int i = 0; i < size(); ++i) out(pairing[static_cast<std::size_t>(i)]) = on_a(i);
  return out;
}

Eigen::VectorXd ContactPair::to_side_a(const Eigen::VectorXd& on_b) const {
  Eigen::VectorXd out(side_a.size());
  for (int i = 0; i < size(); ++i) out(i) = on_b(pairing[static_cast<std::size_t>(i)]);
  return out;
}

ContactPair build_pair(const SubdomainProblem& a, int body_a, const SubdomainProblem& b,
                       int body_b, int pair_id, const GapFunction& gap) {
  ContactPair pair;
  pair.id = pair_id;
  pair.body_a = body_a;
  pair.body_b = body_b;
  pair.side_a = trace_geometry(a.mesh, pair_id);
  pair.side_b = trace_geometry(b.mesh, pair_id);
  if (pair.side_a.size() != pair.side_b.size()) {
    throw NonmatchingMeshError("contact pair " + std::to_string(pair_id) + " has " +
                               std::to_string(pair.side_a.size()) + " and " +
                               std::to_string(pair.side_b.size()) + " trace nodes");
  }
  if ((pair.side_a.normal + pair.side_b.normal).norm() > 1e-9) {
    throw GeometryError("contact sides of pair " + std::to_string(pair_id) +
                        " do not face each other");
  }
  const double tol = 1e-9 * std::max(a.mesh.diameter(), b.mesh.diameter());
  pair.pairing.resize(static_cast<std::size_t>(pair.size()));
  pair.gap.resize(pair.size());
  for (int i = 0; i < pair.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (std::abs(pair.side_a.coord[k] - pair.side_b.coord[k]) > tol) {
      throw GeometryError("contact node " + std::to_string(i) + " of pair " +
                          std::to_string(pair_id) + " is not aligned with its partner");
    }
    pair.pairing[k] = i;
    const double d = gap(a.mesh.node(pair.side_a.nodes[k]));
    if (!std::isfinite(d)) throw InvalidArgument("gap function returned a non-finite value");
    pair.gap(i) = d;
  }
  return pair;
}

Eigen::VectorXd penetration(const ContactPair& pair, const Eigen::VectorXd& un_a,
                            const Eigen::VectorXd& un_b) {
  return nodal_gap(pair, un_a, un_b).unaryExpr([](double y) { return negative_part(y); });
}

double penalty_energy(const ContactPair& pair, const Eigen::VectorXd& un_a,
                      const Eigen::VectorXd& un_b, double theta) {
  require_theta(theta);
  const Eigen::VectorXd g = nodal_gap(pair, un_a, un_b);
  double energy = 0.0;
  const auto& side = pair.side_a;
  for (int s = 0; s < static_cast<int>(side.segments.size()); ++s) {
    const auto& seg = side.segments[static_cast<std::size_t>(s)];
    const int count = seg[2] >= 0 ? 3 : 2;
    for (const auto& q : trace_quadrature(side, s)) {
      double gq = 0.0;
      for (int k = 0; k < count; ++k) gq += q.shape[static_cast<std::size_t>(k)] * g(seg[static_cast<std::size_t>(k)]);
      const double pen = negative_part(gq);
      energy += q.weight * pen * pen;
    }
  }
  return energy / (2.0 * theta);
}

PenaltyForces penalty_rhs(const ContactPair& pair, const Eigen::VectorXd& un_a,
                          const Eigen::VectorXd& un_b, double theta) {
  require_theta(theta);
  const Eigen::VectorXd g = nodal_gap(pair, un_a, un_b);
  return {side_forces(pair.side_a, g, theta), side_forces(pair.side_b, pair.to_side_b(g), theta)};
}

Eigen::VectorXd contact_stress(const ContactPair& pair, const Eigen::VectorXd& un_a,
                               const Eigen::VectorXd& un_b, double theta) {
  require_theta(theta);
  return penetration(pair, un_a, un_b) / theta;
}

std::string SubareaPolicy::name() const {
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::All:
      return "all";
    case Kind::ActiveSet:
      return "active";
    case Kind::FixedSegment: {
      std::ostringstream os;
      os << "segment:" << lo << ':' << hi;
      return os.str();
    }
  }
  return "?";
}

SubareaPolicy parse_policy(const std::string& text) {
  if (text == "none" || text == "neumann") return SubareaPolicy::none();
  if (text == "all" || text == "robin") return SubareaPolicy::all();
  if (text == "active" || text == "active-set" || text == "dirichlet") {
    return SubareaPolicy::active_set();
  }
  if (text.rfind("segment:", 0) == 0) {
    std::istringstream is(text.substr(8));
    double lo = 0.0, hi = 0.0;
    char sep = 0;
    if (is >> lo >> sep >> hi && sep == ':' && hi >= lo) return SubareaPolicy::segment(lo, hi);
  }
  throw ConfigError("unknown subarea policy '" + text + "'");
}

PolicyWeights evaluate_policy(const SubareaPolicy& policy, const ContactPair& pair,
                              const Eigen::VectorXd& un_a, const Eigen::VectorXd& un_b) {
  const int n = pair.size();
  PolicyWeights w{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(pair.side_b.size())};
  switch (policy.kind) {
    case SubareaPolicy::Kind::None:
      break;
    case SubareaPolicy::Kind::All:
      w.a.setOnes();
      w.b.setOnes();
      break;
    case SubareaPolicy::Kind::FixedSegment: {
      const auto& c = pair.side_a.coord;
      const double tol = 1e-9 * std::max(1.0, std::abs(c.back() - c.front()));
      if (policy.lo < c.front() - tol || policy.hi > c.back() + tol) {
        throw InvalidArgument("subarea segment lies outside the contact surface");
      }
      for (int i = 0; i < n; ++i) {
        const double x = c[static_cast<std::size_t>(i)];
        if (x >= policy.lo - tol && x <= policy.hi + tol) w.a(i) = 1.0;
      }
      w.b = pair.to_side_b(w.a);
      break;
    }
    case SubareaPolicy::Kind::ActiveSet: {
      const Eigen::VectorXd g = nodal_gap(pair, un_a, un_b);
      for (int i = 0; i < n; ++i) w.a(i) = g(i) < 0.0 ? 1.0 : 0.0;
      w.b = pair.to_side_b(w.a);
      break;
    }
  }
  return w;
}

}  // namespace contactdd
