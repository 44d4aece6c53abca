#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "walks/experiment.hpp"
#include "walks/measures.hpp"
#include "walks/polytope.hpp"

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string config;
  std::string out_dir = ".";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_output) {
  cmd->add_option("-c,--config", opts.config, "experiment configuration (JSON)")
      ->required();
  if (with_output) {
    cmd->add_option("-o,--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("-f,--format", opts.format, "trajectory file format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
}

walks::ExperimentConfig load_classical(const std::string& path) {
  walks::ExperimentConfig config = walks::ExperimentConfig::load(path);
  if (config.is_quantum())
    throw walks::validation_error("this subcommand needs a classical configuration");
  return config;
}

int run_and_write(const CommonOptions& opts, bool quantum_expected) {
  walks::ExperimentConfig config = walks::ExperimentConfig::load(opts.config);
  if (config.is_quantum() != quantum_expected)
    throw walks::validation_error(quantum_expected
                                      ? "the quantum subcommand needs a \"quantum\" block"
                                      : "use the quantum subcommand for quantum configurations");
  const walks::TrajectoryReport report = walks::run_experiment(config);

  const std::filesystem::path out_dir(opts.out_dir);
  std::filesystem::create_directories(out_dir);
  const std::string stem = std::filesystem::path(opts.config).stem().string();

  const std::filesystem::path trajectory_path =
      out_dir / (stem + ".trajectory." + opts.format);
  walks::write_file_atomic(trajectory_path, opts.format == "csv"
                                                ? walks::trajectory_csv(report)
                                                : walks::trajectory_json(report));
  const std::filesystem::path report_path = out_dir / (stem + ".report.json");
  walks::write_file_atomic(report_path, walks::report_json(report));

  std::cout << "trajectory: " << trajectory_path.string() << "\n"
            << "report: " << report_path.string() << "\n";
  return 0;
}

int run_spectrum(const CommonOptions& opts) {
  const walks::ExperimentConfig config = load_classical(opts.config);
  const walks::StepDistribution p(*config.group, *config.step);
  const walks::Spectrum s = walks::spectrum(p);

  json eig = json::array();
  for (const auto& e : s.eigenvalues) eig.push_back({e.real(), e.imag()});
  json j = {{"e_max", s.e_max},
            {"ergodic", walks::is_ergodic(s)},
            {"eigenvalues", eig},
            {"labels", s.labels}};
  if (walks::is_ergodic(s))
    j["mixing_time_heuristic"] = walks::mixing_time_heuristic(s, config.epsilon);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_polytope(const CommonOptions& opts) {
  const walks::ExperimentConfig config = load_classical(opts.config);
  const walks::TrajectoryReport report = walks::run_experiment(config);

  const walks::ProbabilityVector q0 =
      walks::ProbabilityVector::renormalized(report.rows.front().q);
  const walks::ProbPolytope hull = walks::ProbPolytope::subgroup(report.group, q0);
  const walks::ProbabilityVector u = walks::ProbabilityVector::uniform(report.group.order());

  json vertices = json::array();
  for (const auto& v : hull.vertices()) vertices.push_back(v.entries());
  json j = {{"vertices", vertices},
            {"dimension", hull.dimension()},
            {"contains_uniform", hull.contains(u)},
            {"circumradius_about_uniform", hull.circumradius_about(u)},
            {"vertex_counts", report.polytope.vertex_counts},
            {"subset_chain", report.polytope.subset_chain}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_verify(const CommonOptions& opts, bool as_json) {
  const walks::ExperimentConfig config = walks::ExperimentConfig::load(opts.config);
  const walks::VerifySummary summary = walks::verify_experiment(config);
  if (as_json) {
    std::cout << walks::verify_json(summary);
  } else {
    for (const walks::VerifyCheck& check : summary.checks) {
      std::cout << (check.pass ? "[ok]   " : "[FAIL] ") << check.name;
      if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
      std::cout << "\n";
    }
    std::cout << (summary.all_pass ? "verification passed" : "verification failed") << "\n";
  }
  return summary.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on finite Abelian groups inside Birkhoff subpolytopes"};
  app.require_subcommand(1);

  CommonOptions walk_opts, quantum_opts, spectrum_opts, polytope_opts, verify_opts;
  bool verify_as_json = false;

  CLI::App* walk = app.add_subcommand("walk", "run a classical walk and write trajectory + report");
  add_common(walk, walk_opts, true);
  CLI::App* quantum = app.add_subcommand(
      "quantum", "run a measurement-driven quantum walk and write trajectory + report");
  add_common(quantum, quantum_opts, true);
  CLI::App* spectrum = app.add_subcommand("spectrum", "print the character spectrum of the walk");
  add_common(spectrum, spectrum_opts, false);
  CLI::App* polytope =
      app.add_subcommand("polytope", "print the reachable-polytope vertices and nesting verdicts");
  add_common(polytope, polytope_opts, false);
  CLI::App* verify = app.add_subcommand("verify", "re-derive the structural guarantees of a run");
  add_common(verify, verify_opts, false);
  verify->add_flag("--json", verify_as_json, "emit the verification result as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (walk->parsed()) return run_and_write(walk_opts, false);
    if (quantum->parsed()) return run_and_write(quantum_opts, true);
    if (spectrum->parsed()) return run_spectrum(spectrum_opts);
    if (polytope->parsed()) return run_polytope(polytope_opts);
    if (verify->parsed()) return run_verify(verify_opts, verify_as_json);
  } catch (const walks::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const walks::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 4;
  } catch (const walks::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const walks::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const walks::unsupported_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
