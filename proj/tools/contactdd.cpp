// Command line front end for the contact experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "contactdd/config.hpp"
#include "contactdd/errors.hpp"
#include "contactdd/experiments.hpp"

namespace fs = std::filesystem;
using namespace contactdd;

namespace {

enum Exit { kOk = 0, kConfig = 2, kDivergence = 3, kSolver = 4 };

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iter;
};

ExperimentSpec load(const Options& opt) {
  ExperimentSpec spec = load_config(opt.config);
  if (opt.seed) spec.seed = *opt.seed;
  if (opt.max_iter) {
    if (*opt.max_iter < 1) throw ConfigError("--max-iter must be at least 1");
    spec.max_iter = *opt.max_iter;
  }
  return spec;
}

std::ofstream open_csv(const Options& opt, const std::string& name) {
  fs::create_directories(opt.out);
  const fs::path path = fs::path(opt.out) / name;
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  std::cout << "wrote " << path.string() << "\n";
  return os;
}

int cmd_solve(const Options& opt) {
  const ExperimentSpec spec = load(opt);
  const auto out = solve_experiment(spec);
  const auto& rep = out.result.report;
  {
    auto os = open_csv(opt, "history.csv");
    write_report_csv(os, *out.experiment.system, rep);
  }
  {
    auto os = open_csv(opt, "profile.csv");
    write_profile_csv(os, out.profile);
  }
  std::cout << "policy " << spec.policy.name() << ", gamma " << spec.gamma << ", theta "
            << out.experiment.theta << ": " << rep.iterations << " iterations, "
            << (rep.converged ? "converged" : "not converged") << ", contact zone ends at "
            << out.profile.contact_end() << "\n";
  if (!rep.converged) {
    std::cerr << "error: no convergence within " << spec.max_iter << " iterations\n";
    return kDivergence;
  }
  return kOk;
}

int cmd_sweep_gamma(const Options& opt) {
  const ExperimentSpec spec = load(opt);
  const auto sweep = sweep_gamma(spec);
  {
    auto os = open_csv(opt, "gamma_sweep.csv");
    write_gamma_csv(os, sweep);
  }
  {
    auto os = open_csv(opt, "gamma_optima.csv");
    write_gamma_optima_csv(os, sweep);
  }
  for (const auto& o : sweep.optima) {
    std::cout << o.scheme << ": gamma " << o.gamma << ", " << o.iterations << " iterations\n";
  }
  return kOk;
}

int cmd_sweep_penalty(const Options& opt) {
  const ExperimentSpec spec = load(opt);
  const auto rows = sweep_penalty(spec);
  auto os = open_csv(opt, "penalty_sweep.csv");
  write_penalty_csv(os, rows);
  return kOk;
}

int cmd_compare(const Options& opt) {
  const ExperimentSpec spec = load(opt);
  const auto sweep = sweep_gamma(spec);
  const auto cmp = compare_schemes(spec, sweep);
  {
    auto os = open_csv(opt, "gamma_optima.csv");
    write_gamma_optima_csv(os, sweep);
  }
  {
    auto os = open_csv(opt, "compare_schemes.csv");
    write_compare_csv(os, cmp);
  }
  {
    auto os = open_csv(opt, "compare_summary.csv");
    write_compare_summary_csv(os, cmp);
  }
  for (const auto& s : cmp.summary) {
    std::cout << s.scheme << ": " << s.slope << " iterations per decade, R^2 " << s.r_squared
              << "\n";
  }
  return kOk;
}

int cmd_oracle(const Options& opt) {
  const ExperimentSpec spec = load(opt);
  const auto profile = reference_oracle(spec);
  auto os = open_csv(opt, "oracle_profile.csv");
  write_profile_csv(os, profile);
  std::cout << "oracle contact zone ends at " << profile.contact_end() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalty domain decomposition for two-body unilateral contact"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"solve", "run one scheme and write its history and contact stress", cmd_solve},
      {"sweep-gamma", "iteration counts over the relaxation grid", cmd_sweep_gamma},
      {"sweep-penalty", "penalty coefficient and mesh study against the oracle",
       cmd_sweep_penalty},
      {"compare-schemes", "iterations against accuracy at each scheme's optimal gamma",
       cmd_compare},
      {"oracle", "fine-mesh, small-penalty reference contact stress", cmd_oracle},
  };
  int (*chosen)(const Options&) = nullptr;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("config", opt.config, "experiment file")->required();
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "seed for injected perturbations");
    sub->add_option("--max-iter", opt.max_iter, "iteration cap per run");
    sub->callback([&chosen, run = c.run] { chosen = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    return chosen(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidMaterial& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged at iteration " << e.iteration() << ": " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  }
}
