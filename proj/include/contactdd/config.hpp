#pragma once

#include <iosfwd>
#include <string>

#include "contactdd/experiments.hpp"

namespace contactdd {

/// Reads an INI-style experiment description. Sections:
///   [problem]  kind = hertz | groove, figure, b, r, delta_factor, l, h, q
///   [mesh]     density, order, grading
///   [material.1], [material.2]
///              model = isotropic | transverse, E, nu, E_t, nu_t, G_t,
///              hypothesis = plane_stress | plane_strain
///   [contact]  c, theta, gap, theta_form = consistent | literal
///   [scheme]   policy, gamma, eps_u, max_iter, seed, inject_epsilon,
///              oracle_gamma, oracle_eps, oracle_max_iter
///   [sweep]    schemes, gammas, c_list, densities, eps_list
/// Unset keys keep the problem's defaults. Lists are comma separated; a
/// gamma grid may also be given as start:step:stop.
/// Throws ConfigError on unknown sections or keys and on malformed values.
ExperimentSpec parse_config(std::istream& is);
ExperimentSpec load_config(const std::string& path);

}  // namespace contactdd
