#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "povmkit/json_io.hpp"
#include "povmkit/svg.hpp"

namespace {

using namespace povmkit;

struct CommonOptions {
  std::string povm_a;
  std::string povm_b;
  std::string builtin;
  std::string model = "uniform";
  long long samples = 50000;
  std::uint64_t seed = 42;
  int resolution = 101;
  std::string out_dir = ".";
  double tol = 0.0;  // 0 keeps the library defaults
  bool zoom = false;
  int threads = 0;
};

std::pair<Povm, Povm> load_pair(const CommonOptions& opt) {
  if (!opt.builtin.empty()) {
    if (opt.builtin == "fourier") return fourier_example();
    if (opt.builtin == "qubit-mub") return qubit_mub_example();
    throw Error(Errc::bad_parameter, "unknown builtin '" + opt.builtin + "'");
  }
  if (opt.povm_a.empty() || opt.povm_b.empty())
    throw Error(Errc::bad_parameter,
                "provide --povm-a and --povm-b, or --builtin");
  return {load_povm_file(opt.povm_a), load_povm_file(opt.povm_b)};
}

std::vector<NoiseKind> selected_models(const std::string& name) {
  if (name == "all")
    return {NoiseKind::uniform, NoiseKind::depolarizing, NoiseKind::physical};
  return {noise_kind_from_string(name)};
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::parse_error, "cannot write " + path.string());
  out << body;
}

int cmd_verify(const CommonOptions& opt) {
  Povm two_outcome;
  if (!opt.povm_a.empty()) {
    two_outcome = load_povm_file(opt.povm_a);
    if (two_outcome.outcomes() != 2)
      throw Error(Errc::bad_parameter,
                  "verification needs a two-outcome POVM for the probe checks");
  } else {
    two_outcome = fourier_example().first;
  }
  Rng seeder(opt.seed);
  Rng povm_rng = seeder.split(7);
  Povm three_outcome = sample_random_povm(3, 3, povm_rng);

  json checks = json::object();
  bool all_pass = true;

  // Averaged two-outcome dilations against the closed-form channel.
  {
    UnitarySampler sampler =
        UnitarySampler::haar_two_outcome(two_outcome, seeder.split(1).seed());
    MonteCarloReport r = monte_carlo_average(
        sampler, probe_state(ProbeKind::probabilistic, 0.3), opt.samples);
    checks["two_outcome_averaging"] = report_to_json(r);
    all_pass = all_pass && r.pass;
  }
  // General averaging under the right-invariant dilation measure.
  {
    BlockUnitary u0 = complete_dilation(three_outcome);
    UnitarySampler sampler =
        UnitarySampler::nice(u0, three_outcome, seeder.split(2).seed());
    ComplexMatrix beta = ComplexMatrix::Zero(3, 3);
    beta(0, 0) = 0.8;
    beta(1, 1) = 0.1;
    beta(2, 2) = 0.1;
    MonteCarloReport r =
        monte_carlo_average(sampler, probe_state(beta), opt.samples);
    checks["general_averaging"] = report_to_json(r);
    all_pass = all_pass && r.pass;
  }
  // Vanishing cross moments of the off-column blocks.
  {
    BlockUnitary u0 = complete_dilation(three_outcome);
    ZeroMomentReport r = nice_zero_moment_check(
        u0, std::min<long long>(opt.samples, 10000), seeder.split(3).seed());
    checks["zero_moments"] = report_to_json(r);
    all_pass = all_pass && r.pass;
  }
  // Probabilistic vs cat probe.
  {
    json probes = json::array();
    int stream = 4;
    for (double t : {0.2, 0.5, 0.8}) {
      ProbeEquivalenceReport r = probe_equivalence_check(
          two_outcome, t, opt.samples, seeder.split(stream++).seed());
      probes.push_back(report_to_json(r));
      all_pass = all_pass && r.pass;
    }
    checks["probe_equivalence"] = std::move(probes);
  }

  json report{{"samples", opt.samples},
              {"seed", opt.seed},
              {"checks", std::move(checks)},
              {"pass", all_pass}};
  std::filesystem::create_directories(opt.out_dir);
  write_file(std::filesystem::path(opt.out_dir) / "verify_report.json",
             report.dump(2) + "\n");
  std::cout << report.dump(2) << std::endl;
  return all_pass ? 0 : 1;
}

int cmd_robustness(const CommonOptions& opt) {
  auto [a, b] = load_pair(opt);
  SdpOptions sdp_opts;
  if (opt.tol > 0.0) {
    sdp_opts.residual_tol = opt.tol;
    sdp_opts.gap_tol = opt.tol;
  }
  json results = json::array();
  for (NoiseKind model : selected_models(opt.model)) {
    RobustnessResult r = robustness(a, b, model, sdp_opts);
    Povm noisy_a = apply_noise(a, model, r.alpha_star);
    Povm noisy_b = apply_noise(b, model, r.alpha_star);
    MarginalReport marginals = check_marginals(r.joint, noisy_a, noisy_b, 1e-6);
    if (!marginals.pass)
      throw Error(Errc::solver_failure,
                  "joint marginals deviate by " +
                      std::to_string(marginals.max_deviation()));
    results.push_back(robustness_to_json(r));
  }
  json out = results.size() == 1 ? results.at(0) : json{{"models", results}};
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_region(const CommonOptions& opt) {
  auto [a, b] = load_pair(opt);
  SdpOptions sdp_opts;
  if (opt.tol > 0.0) {
    sdp_opts.residual_tol = opt.tol;
    sdp_opts.gap_tol = opt.tol;
  }
  std::filesystem::create_directories(opt.out_dir);
  std::vector<CompatibilityRegion> regions;
  for (NoiseKind model : selected_models(opt.model)) {
    CompatibilityRegion region = compatibility_region(
        a, b, model, opt.resolution, opt.threads, sdp_opts);
    double worst = 0.0;
    for (int pi = 0; pi < region.resolution; ++pi)
      for (int qi = 0; qi < region.resolution; ++qi)
        worst = std::max(worst, region.marginal_deviation_at(pi, qi));
    if (worst > 1e-6)
      throw Error(Errc::solver_failure,
                  "grid joint marginals deviate by " + std::to_string(worst));
    write_file(std::filesystem::path(opt.out_dir) /
                   ("region_" + to_string(model) + ".csv"),
               region_to_csv(region));
    regions.push_back(std::move(region));
  }
  write_file(std::filesystem::path(opt.out_dir) / "region.svg",
             regions_to_svg(regions, opt.zoom));
  std::cout << "wrote " << regions.size() << " region grid(s) to "
            << opt.out_dir << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Indirect-measurement noise models for quantum measurements: Monte "
      "Carlo verification of the averaged channels, incompatibility "
      "robustness, and compatibility regions."};
  app.require_subcommand(1);

  CommonOptions opt;
  auto add_pair_options = [&](CLI::App* cmd) {
    cmd->add_option("--povm-a", opt.povm_a, "POVM JSON file (first measurement)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--povm-b", opt.povm_b, "POVM JSON file (second measurement)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--builtin", opt.builtin,
                    "built-in pair: fourier or qubit-mub");
    cmd->add_option("--model", opt.model,
                    "noise model: uniform, depolarizing, physical, all");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--tol", opt.tol, "SDP tolerance override");
  };

  CLI::App* verify =
      app.add_subcommand("verify", "Monte Carlo checks of the averaged noise model");
  verify->add_option("--povm-a", opt.povm_a, "two-outcome POVM JSON file")
      ->check(CLI::ExistingFile);
  verify->add_option("--samples", opt.samples, "Monte Carlo sample count")
      ->check(CLI::Range(100LL, 100000000LL));
  verify->add_option("--seed", opt.seed, "RNG seed");
  verify->add_option("--out", opt.out_dir, "output directory");

  CLI::App* rob = app.add_subcommand("robustness",
                                     "incompatibility robustness of a POVM pair");
  add_pair_options(rob);

  CLI::App* region = app.add_subcommand("region", "compatibility region sweep");
  add_pair_options(region);
  region->add_option("--resolution", opt.resolution, "grid resolution per axis")
      ->check(CLI::Range(2, 2001));
  region->add_option("--threads", opt.threads, "worker threads (0 = auto)");
  region->add_flag("--zoom", opt.zoom, "add a zoom panel over [0.7,1]^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(opt);
    if (rob->parsed()) return cmd_robustness(opt);
    if (region->parsed()) return cmd_region(opt);
  } catch (const povmkit::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    switch (e.code()) {
      case povmkit::Errc::parse_error:
      case povmkit::Errc::bad_parameter:
      case povmkit::Errc::level_out_of_range:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
