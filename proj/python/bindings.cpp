#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "contactdd/config.hpp"
#include "contactdd/errors.hpp"
#include "contactdd/experiments.hpp"

namespace py = pybind11;
using namespace contactdd;

namespace {

py::dict profile_dict(const StressProfile& p) {
  py::dict d;
  d["x"] = p.coord;
  d["sigma_n"] = p.sigma;
  d["sigma_star"] = p.normalized;
  d["penetration"] = p.penetration;
  d["contact_end"] = p.contact_end();
  return d;
}

py::dict report_dict(const ConvergenceReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["rel_change"] = r.rel_change;
  d["energy_error"] = r.energy_error;
  d["psi_active"] = r.psi_active;
  d["monotonicity_violations"] = r.monotonicity_violations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_contactdd, m) {
  m.doc() = "Penalty Robin-Robin domain decomposition for two-body contact";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<MeshError>(m, "MeshError", base.ptr());
  py::register_exception<InvalidMaterial>(m, "InvalidMaterial", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

  py::enum_<Hypothesis>(m, "Hypothesis")
      .value("PLANE_STRESS", Hypothesis::PlaneStress)
      .value("PLANE_STRAIN", Hypothesis::PlaneStrain);

  py::class_<Material>(m, "Material")
      .def_static(
          "isotropic",
          [](double E, double nu, Hypothesis h) { return Material{Isotropic{E, nu}, h}; },
          py::arg("E"), py::arg("nu"), py::arg("hypothesis") = Hypothesis::PlaneStress)
      .def_static(
          "transverse",
          [](double E, double E_t, double nu, double nu_t, double G_t, Hypothesis h) {
            return Material{TransverselyIsotropic{E, E_t, nu, nu_t, G_t}, h};
          },
          py::arg("E"), py::arg("E_t"), py::arg("nu"), py::arg("nu_t"), py::arg("G_t"),
          py::arg("hypothesis") = Hypothesis::PlaneStress);

  m.def("constitutive_matrix", &constitutive_matrix);
  m.def("spectral_bounds", [](const Material& mat) {
    const auto b = spectral_bounds(mat);
    return py::make_tuple(b.lower, b.upper);
  });
  m.def("negative_part", &negative_part);

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("order", &Mesh::order)
      .def_property_readonly("node_count", &Mesh::node_count)
      .def_property_readonly("element_count", &Mesh::element_count)
      .def_property_readonly("nodes", [](const Mesh& mesh) {
        Eigen::MatrixX2d out(mesh.node_count(), 2);
        for (int i = 0; i < mesh.node_count(); ++i) out.row(i) = mesh.node(i).transpose();
        return out;
      });
  m.def(
      "generate_rect_mesh",
      [](double x0, double y0, double w, double h, int nx, int ny, int order) {
        return generate_rect_mesh(Vec2(x0, y0), w, h, nx, ny, order);
      },
      py::arg("x0"), py::arg("y0"), py::arg("width"), py::arg("height"), py::arg("nx"),
      py::arg("ny"), py::arg("order") = 1);

  py::enum_<ProblemKind>(m, "ProblemKind")
      .value("HERTZ", ProblemKind::HertzTransversal)
      .value("GROOVE", ProblemKind::Groove);

  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def_readwrite("problem", &ExperimentSpec::problem)
      .def_readwrite("b", &ExperimentSpec::b)
      .def_readwrite("r", &ExperimentSpec::r)
      .def_readwrite("l", &ExperimentSpec::l)
      .def_readwrite("h", &ExperimentSpec::h)
      .def_readwrite("q", &ExperimentSpec::q)
      .def_readwrite("materials", &ExperimentSpec::materials)
      .def_readwrite("density", &ExperimentSpec::density)
      .def_readwrite("order", &ExperimentSpec::order)
      .def_readwrite("grading", &ExperimentSpec::grading)
      .def_readwrite("c", &ExperimentSpec::c)
      .def_readwrite("theta", &ExperimentSpec::theta)
      .def_property(
          "policy", [](const ExperimentSpec& s) { return s.policy.name(); },
          [](ExperimentSpec& s, const std::string& p) { s.policy = parse_policy(p); })
      .def_readwrite("gamma", &ExperimentSpec::gamma)
      .def_readwrite("eps_u", &ExperimentSpec::eps_u)
      .def_readwrite("max_iter", &ExperimentSpec::max_iter)
      .def_readwrite("seed", &ExperimentSpec::seed)
      .def_readwrite("inject_epsilon", &ExperimentSpec::inject_epsilon)
      .def_readwrite("schemes", &ExperimentSpec::schemes)
      .def_readwrite("gammas", &ExperimentSpec::gammas)
      .def_readwrite("c_list", &ExperimentSpec::c_list)
      .def_readwrite("densities", &ExperimentSpec::densities)
      .def_readwrite("eps_list", &ExperimentSpec::eps_list);

  m.def("hertz_defaults", &hertz_defaults);
  m.def("groove_defaults", &groove_defaults, py::arg("figure") = 7);
  m.def("load_config", &load_config);
  m.def("penalty_theta", &penalty_theta);

  m.def("solve", [](const ExperimentSpec& spec) {
    const auto out = solve_experiment(spec);
    py::dict d = report_dict(out.result.report);
    d["theta"] = out.experiment.theta;
    d["profile"] = profile_dict(out.profile);
    return d;
  });
  m.def("reference_oracle", [](const ExperimentSpec& spec) {
    return profile_dict(reference_oracle(spec));
  });
  m.def("sweep_gamma", [](const ExperimentSpec& spec) {
    const auto sweep = sweep_gamma(spec);
    py::list rows, optima;
    for (const auto& r : sweep.rows) {
      rows.append(py::make_tuple(r.scheme, r.gamma, r.iterations, r.converged));
    }
    for (const auto& o : sweep.optima) optima.append(py::make_tuple(o.scheme, o.gamma, o.iterations));
    return py::make_tuple(rows, optima);
  });
  m.def("sweep_penalty", [](const ExperimentSpec& spec) {
    py::list rows;
    for (const auto& r : sweep_penalty(spec)) {
      py::dict d;
      d["c"] = r.c;
      d["density"] = r.density;
      d["max_penetration"] = r.max_penetration;
      d["l2_distance"] = r.l2_distance;
      d["oscillation"] = r.oscillation;
      d["iterations"] = r.iterations;
      d["converged"] = r.converged;
      d["l2_distance_iterate"] = r.l2_distance_iterate;
      rows.append(d);
    }
    return rows;
  });
  m.def("compare_schemes", [](const ExperimentSpec& spec) {
    const auto cmp = compare_schemes(spec);
    py::list rows, summary;
    for (const auto& r : cmp.rows) {
      rows.append(py::make_tuple(r.scheme, r.gamma, r.eps_u, r.iterations, r.converged));
    }
    for (const auto& s : cmp.summary) {
      summary.append(py::make_tuple(s.scheme, s.gamma, s.slope, s.r_squared));
    }
    return py::make_tuple(rows, summary);
  });
  m.def(
      "estimate_rate",
      [](const std::vector<double>& errors) {
        const auto r = estimate_rate(errors);
        return py::make_tuple(r.q, r.r_squared);
      },
      "Fitted contraction factor and R^2 from an energy-error history.");
}
