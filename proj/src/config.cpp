#include "contactdd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "contactdd/errors.hpp"

namespace contactdd {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(text), &used);
    if (used != trim(text).size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> doubles(const std::string& key, const std::string& text) {
  const auto parts = split(text);
  if (parts.size() == 1 && parts[0].find(':') != std::string::npos) {
    std::vector<std::string> r;
    std::stringstream ss(parts[0]);
    std::string item;
    while (std::getline(ss, item, ':')) r.push_back(item);
    if (r.size() != 3) throw ConfigError("'" + key + "' range must be start:step:stop");
    const double a = to_double(key, r[0]), h = to_double(key, r[1]), b = to_double(key, r[2]);
    if (!(h > 0.0) || b < a) throw ConfigError("'" + key + "' range is empty");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((b - a) / h + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(a + h * i);
    return out;
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(to_double(key, p));
  if (out.empty()) throw ConfigError("'" + key + "' list is empty");
  return out;
}

void check_keys(const pt::ptree& section, const std::string& name,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
  }
}

Material read_material(const pt::ptree& sec, const std::string& name, Material m) {
  check_keys(sec, name, {"model", "E", "nu", "E_t", "nu_t", "G_t", "hypothesis"});
  auto num = [&](const char* k) -> std::optional<double> {
    if (auto v = sec.get_optional<std::string>(k)) return to_double(k, *v);
    return std::nullopt;
  };
  std::string model = std::holds_alternative<Isotropic>(m.law) ? "isotropic" : "transverse";
  if (auto v = sec.get_optional<std::string>("model")) model = trim(*v);
  if (model == "isotropic") {
    Isotropic iso = std::holds_alternative<Isotropic>(m.law) ? std::get<Isotropic>(m.law)
                                                              : Isotropic{};
    if (auto v = num("E")) iso.E = *v;
    if (auto v = num("nu")) iso.nu = *v;
    if (num("E_t") || num("nu_t") || num("G_t")) {
      throw ConfigError("[" + name + "]: E_t, nu_t, G_t need model = transverse");
    }
    m.law = iso;
  } else if (model == "transverse") {
    TransverselyIsotropic t = std::holds_alternative<TransverselyIsotropic>(m.law)
                                  ? std::get<TransverselyIsotropic>(m.law)
                                  : TransverselyIsotropic{};
    if (auto v = num("E")) t.E = *v;
    if (auto v = num("nu")) t.nu = *v;
    if (auto v = num("E_t")) t.E_t = *v;
    if (auto v = num("nu_t")) t.nu_t = *v;
    if (auto v = num("G_t")) t.G_t = *v;
    m.law = t;
  } else {
    throw ConfigError("[" + name + "]: unknown model '" + model + "'");
  }
  if (auto v = sec.get_optional<std::string>("hypothesis")) {
    const auto h = trim(*v);
    if (h == "plane_stress") {
      m.hypothesis = Hypothesis::PlaneStress;
    } else if (h == "plane_strain") {
      m.hypothesis = Hypothesis::PlaneStrain;
    } else {
      throw ConfigError("[" + name + "]: unknown hypothesis '" + h + "'");
    }
  }
  try {
    constitutive_matrix(m);
  } catch (const InvalidMaterial& e) {
    throw ConfigError("[" + name + "]: " + e.what());
  }
  return m;
}

}  // namespace

ExperimentSpec parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (const auto& [name, sec] : tree) {
    static const std::set<std::string> known{"problem", "mesh",   "material.1", "material.2",
                                             "contact", "scheme", "sweep"};
    if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
    if (sec.empty() && !sec.data().empty()) {
      throw ConfigError("key '" + name + "' outside of a section");
    }
  }
  auto section = [&](const std::string& name) -> pt::ptree {
    if (auto s = tree.get_child_optional(pt::ptree::path_type(name, '/'))) return *s;
    return {};
  };

  const pt::ptree problem = section("problem");
  check_keys(problem, "problem", {"kind", "figure", "b", "r", "delta_factor", "l", "h", "q"});
  const std::string kind = trim(problem.get<std::string>("kind", "hertz"));
  ExperimentSpec spec;
  if (kind == "hertz") {
    if (problem.get_optional<std::string>("figure")) {
      throw ConfigError("[problem] figure applies to the groove problem only");
    }
    spec = hertz_defaults();
  } else if (kind == "groove") {
    int figure = 7;
    if (auto v = problem.get_optional<std::string>("figure")) figure = to_int("figure", *v);
    spec = groove_defaults(figure);
  } else {
    throw ConfigError("unknown problem kind '" + kind + "'");
  }

  auto set_double = [](const pt::ptree& sec, const char* key, double& target) {
    if (auto v = sec.get_optional<std::string>(key)) target = to_double(key, *v);
  };
  auto set_int = [](const pt::ptree& sec, const char* key, int& target) {
    if (auto v = sec.get_optional<std::string>(key)) target = to_int(key, *v);
  };

  set_double(problem, "b", spec.b);
  set_double(problem, "r", spec.r);
  set_double(problem, "delta_factor", spec.delta_factor);
  set_double(problem, "l", spec.l);
  set_double(problem, "h", spec.h);
  set_double(problem, "q", spec.q);

  const pt::ptree mesh = section("mesh");
  check_keys(mesh, "mesh", {"density", "order", "grading"});
  set_int(mesh, "density", spec.density);
  set_int(mesh, "order", spec.order);
  set_double(mesh, "grading", spec.grading);

  for (int a = 0; a < 2; ++a) {
    const std::string name = "material." + std::to_string(a + 1);
    spec.materials[static_cast<std::size_t>(a)] =
        read_material(section(name), name, spec.materials[static_cast<std::size_t>(a)]);
  }

  const pt::ptree contact = section("contact");
  check_keys(contact, "contact", {"c", "theta", "gap", "theta_form"});
  set_double(contact, "c", spec.c);
  if (auto v = contact.get_optional<std::string>("theta")) spec.theta = to_double("theta", *v);
  if (auto v = contact.get_optional<std::string>("theta_form")) {
    const auto f = trim(*v);
    if (f != "consistent" && f != "literal") {
      throw ConfigError("theta_form must be 'consistent' or 'literal'");
    }
    spec.groove_theta_literal = f == "literal";
  }
  if (auto v = contact.get_optional<std::string>("gap")) {
    spec.gap = trim(*v);
    parse_gap(*spec.gap);
  }

  const pt::ptree scheme = section("scheme");
  check_keys(scheme, "scheme", {"policy", "gamma", "eps_u", "max_iter", "seed", "oracle_gamma",
                                "oracle_eps", "oracle_max_iter", "inject_epsilon"});
  if (auto v = scheme.get_optional<std::string>("policy")) spec.policy = parse_policy(trim(*v));
  set_double(scheme, "gamma", spec.gamma);
  set_double(scheme, "eps_u", spec.eps_u);
  set_int(scheme, "max_iter", spec.max_iter);
  if (auto v = scheme.get_optional<std::string>("seed")) {
    const int s = to_int("seed", *v);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    spec.seed = static_cast<std::uint64_t>(s);
  }
  set_double(scheme, "oracle_gamma", spec.oracle_gamma);
  set_double(scheme, "oracle_eps", spec.oracle_eps);
  set_int(scheme, "oracle_max_iter", spec.oracle_max_iter);
  set_double(scheme, "inject_epsilon", spec.inject_epsilon);
  if (spec.inject_epsilon < 0.0) throw ConfigError("inject_epsilon must be nonnegative");

  const pt::ptree sweep = section("sweep");
  check_keys(sweep, "sweep", {"schemes", "gammas", "c_list", "densities", "eps_list"});
  if (auto v = sweep.get_optional<std::string>("schemes")) {
    spec.schemes = split(*v);
    for (const auto& s : spec.schemes) parse_policy(s);
    if (spec.schemes.empty()) throw ConfigError("scheme list is empty");
  }
  if (auto v = sweep.get_optional<std::string>("gammas")) spec.gammas = doubles("gammas", *v);
  if (auto v = sweep.get_optional<std::string>("c_list")) spec.c_list = doubles("c_list", *v);
  if (auto v = sweep.get_optional<std::string>("eps_list")) spec.eps_list = doubles("eps_list", *v);
  if (auto v = sweep.get_optional<std::string>("densities")) {
    spec.densities.clear();
    for (const auto& p : split(*v)) spec.densities.push_back(to_int("densities", p));
    if (spec.densities.empty()) throw ConfigError("density list is empty");
  }

  if (!(spec.gamma > 0.0 && spec.gamma < 2.0)) throw ConfigError("gamma must lie in (0, 2)");
  if (!(spec.eps_u > 0.0)) throw ConfigError("eps_u must be positive");
  if (spec.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(spec.c > 0.0)) throw ConfigError("c must be positive");
  if (spec.theta && !(*spec.theta > 0.0)) throw ConfigError("theta must be positive");
  if (spec.density < 4) throw ConfigError("density must be at least 4");
  if (spec.order != 1 && spec.order != 2) throw ConfigError("order must be 1 or 2");
  if (!(spec.grading >= 1.0)) throw ConfigError("grading must be at least 1");
  for (double g : spec.gammas) {
    if (!(g > 0.0 && g < 2.0)) throw ConfigError("gamma grid must lie in (0, 2)");
  }
  for (double c : spec.c_list) {
    if (!(c > 0.0)) throw ConfigError("c_list entries must be positive");
  }
  for (int d : spec.densities) {
    if (d < 4) throw ConfigError("densities must be at least 4");
  }
  for (double e : spec.eps_list) {
    if (!(e > 0.0)) throw ConfigError("eps_list entries must be positive");
  }
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace contactdd
