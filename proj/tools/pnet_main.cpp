// Command-line front end: bounds, schedule design, verification, and
// Monte-Carlo simulation for photonic sensor-network function estimation.
//
// Exit codes: 0 success, 2 validation error, 3 infeasible, 4 inconclusive
// (search budget), 5 verification failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "pnet/bounds.hpp"
#include "pnet/estimation.hpp"
#include "pnet/gaussian.hpp"
#include "pnet/io.hpp"
#include "pnet/protocol.hpp"
#include "pnet/schedule_sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInconclusive = 4;
constexpr int kExitVerification = 5;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed_override;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("--config", opts.config_path, "experiment config JSON");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_path, "output path (stdout when omitted)");
  cmd->add_option("--seed", opts.seed_override, "override the config seed");
  cmd->add_flag("--verbose", opts.verbose, "emit per-run JSON detail");
}

pnet::ExperimentConfig load(const CommonOpts& opts) {
  pnet::ExperimentConfig config = pnet::load_config(opts.config_path);
  if (opts.seed_override) config.seed = *opts.seed_override;
  if (!opts.out_path.empty()) config.out_path = opts.out_path;
  if (const char* env = std::getenv("PNET_NODE_BUDGET")) {
    config.node_budget = std::strtoull(env, nullptr, 10);
  }
  return config;
}

void emit(const pnet::ExperimentConfig& config, const std::string& text) {
  if (config.out_path) {
    pnet::write_text_file(*config.out_path, text);
  } else {
    std::cout << text;
  }
}

std::uint64_t require_seed(const pnet::ExperimentConfig& config) {
  if (!config.seed)
    throw std::invalid_argument("config: seed is mandatory for sampling subcommands");
  return *config.seed;
}

int run_bounds(const CommonOpts& opts) {
  const pnet::ExperimentConfig config = load(opts);
  if (!config.n_photons && !config.nbar)
    throw std::invalid_argument("config: bounds needs N and/or N_bar");
  const pnet::CoefficientVector alpha = config.coefficient_vector();
  const pnet::BoundReport report = pnet::bound_report(
      alpha, config.n_photons, config.nbar, config.effective_t(), config.passes);
  const pnet::Json j = pnet::to_json(report);
  emit(config, j.dump(2) + "\n");
  if (config.out_path) {
    std::string csv_path = *config.out_path;
    const auto dot = csv_path.rfind('.');
    csv_path = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".csv";
    pnet::write_text_file(csv_path, pnet::bound_report_csv(report));
  }
  return kExitOk;
}

int solve_from_config(const pnet::ExperimentConfig& config, pnet::SolveResult& result) {
  const pnet::CoefficientVector alpha = config.coefficient_vector();
  if (!config.n_photons) throw std::invalid_argument("config: design needs N");
  if (!pnet::feasibility_precheck(alpha, *config.n_photons, config.passes)) {
    std::cerr << "infeasible: N M alpha / ||alpha||_{1,P} is not an integer vector\n";
    return kExitInfeasible;
  }
  const pnet::OmegaSet w =
      pnet::build_omega_set(alpha, *config.n_photons, config.support_cap, config.omega_limit);
  result = pnet::solve_schedule(w, config.passes, config.node_budget);
  if (result.status == pnet::SolveStatus::Infeasible) {
    std::cerr << "infeasible: exhaustive search found no repetition vector\n";
    return kExitInfeasible;
  }
  if (result.status == pnet::SolveStatus::Inconclusive) {
    std::cerr << "inconclusive: node budget exhausted after " << result.nodes_visited
              << " nodes\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

int run_design(const CommonOpts& opts) {
  const pnet::ExperimentConfig config = load(opts);
  pnet::SolveResult result;
  const int rc = solve_from_config(config, result);
  if (rc != kExitOk) return rc;
  const pnet::ProtocolSchedule& schedule = *result.schedule;
  const pnet::QfiMatrix qfi = pnet::schedule_qfi_analytic(schedule);
  const double residual = pnet::check_saturation_phase(
      qfi, schedule.omega_set.alpha, schedule.omega_set.n_photons, schedule.passes);
  emit(config, pnet::schedule_to_json(schedule, qfi, residual).dump(2) + "\n");
  return kExitOk;
}

int run_verify(const CommonOpts& opts, const std::string& schedule_path) {
  (void)opts;
  const pnet::Json j = pnet::Json::parse(pnet::read_text_file(schedule_path));
  const pnet::ProtocolSchedule schedule = pnet::schedule_from_json(j);
  const auto& alpha = schedule.omega_set.alpha;
  const long long n = schedule.omega_set.n_photons;
  const long long m = schedule.passes;
  const double nm = static_cast<double>(n) * static_cast<double>(m);

  long long reps = 0;
  for (long long r : schedule.repetitions) reps += r;
  const auto wr = schedule.weighted_sum();
  double target_residual = 0.0;
  for (std::size_t i = 0; i < wr.size(); ++i) {
    const double diff = (wr[i] - schedule.target[i]).convert_to<double>();
    target_residual = std::max(target_residual, std::fabs(diff) / (nm * nm));
  }
  if (reps != m || target_residual > 0.0) {
    std::cout << "W r residual: " << pnet::format_double(target_residual) << " (passes "
              << reps << "/" << m << ")\n";
    std::cerr << "verification failed: W r does not reach the target\n";
    return kExitVerification;
  }

  const pnet::QfiMatrix analytic = pnet::schedule_qfi_analytic(schedule);
  const pnet::QfiMatrix numeric = pnet::qfi_numeric_schedule(schedule);
  const double deviation = pnet::QfiMatrix::relative_deviation(analytic, numeric);
  const double residual = pnet::check_saturation_phase(analytic, alpha, n, m);
  const double residual_numeric = pnet::check_saturation_phase(numeric, alpha, n, m);

  std::cout << "analytic vs numeric QFI max relative deviation: "
            << pnet::format_double(deviation) << "\n";
  std::cout << "saturation residual (analytic): " << pnet::format_double(residual) << "\n";
  std::cout << "saturation residual (numeric): " << pnet::format_double(residual_numeric)
            << "\n";
  if (deviation > 1e-6 || residual > 1e-6 || residual_numeric > 1e-6) {
    std::cerr << "verification failed: residual above 1e-6\n";
    return kExitVerification;
  }
  std::cout << "ok\n";
  return kExitOk;
}

int run_simulate_phase(const CommonOpts& opts) {
  const pnet::ExperimentConfig config = load(opts);
  const std::uint64_t seed = require_seed(config);
  pnet::SolveResult result;
  const int rc = solve_from_config(config, result);
  if (rc != kExitOk) return rc;
  const pnet::ProtocolSchedule& schedule = *result.schedule;
  const pnet::CoefficientVector& alpha = schedule.omega_set.alpha;

  std::vector<double> theta = config.theta_true;
  if (theta.empty()) theta.assign(alpha.dim(), 0.0);
  if (static_cast<int>(theta.size()) != alpha.dim())
    throw std::invalid_argument("config: theta_true length must match alpha");

  std::string alpha_cell;
  for (int i = 0; i < alpha.dim(); ++i) {
    if (i) alpha_cell += '|';
    alpha_cell += alpha.entry(i).str();
  }

  struct Row {
    int stages;
    long long total;
    pnet::EstimationResult res;
  };
  std::vector<Row> data;
  std::vector<std::pair<double, double>> points;
  std::ostringstream verbose;
  for (std::size_t b = 0; b < config.phase_budgets.size(); ++b) {
    const long long budget = config.phase_budgets[b];
    const pnet::RpeSchedule rpe = pnet::rpe_schedule_for_budget(
        budget, schedule.omega_set.n_photons, config.rpe_nu_base, config.rpe_nu_step);
    pnet::RngStream rng(pnet::substream_seed(seed, "phase-sweep", b));
    const pnet::EstimationResult res =
        pnet::estimate_function_phase(schedule, theta, rpe, config.phase_trials, rng);
    data.push_back({rpe.stages(), rpe.total_photons(), res});
    points.emplace_back(static_cast<double>(rpe.total_photons()), res.mse_empirical);
    if (opts.verbose) {
      verbose << pnet::Json{{"budget", budget},
                            {"stages", rpe.stages()},
                            {"q_hat", res.q_hat},
                            {"mse", res.mse_empirical},
                            {"std_error", res.std_error},
                            {"bound", res.bound},
                            {"ratio", res.ratio},
                            {"wrap_flagged", res.wrap_flagged}}
                     .dump()
              << "\n";
    }
  }
  const pnet::FitResult fit = pnet::scaling_fit(points);

  std::ostringstream csv;
  csv << "alpha,N,M,K,total_photons,trials,mse_empirical,bound,ratio,slope_context\n";
  for (const Row& row : data) {
    csv << alpha_cell << ',' << schedule.omega_set.n_photons << ',' << schedule.passes << ','
        << row.stages << ',' << row.total << ',' << config.phase_trials << ','
        << pnet::format_double(row.res.mse_empirical) << ','
        << pnet::format_double(row.res.bound) << ',' << pnet::format_double(row.res.ratio)
        << ',' << pnet::format_double(fit.slope) << '\n';
  }
  emit(config, csv.str());
  if (opts.verbose) std::cout << verbose.str();
  return kExitOk;
}

int run_simulate_displacement(const CommonOpts& opts) {
  const pnet::ExperimentConfig config = load(opts);
  const std::uint64_t seed = require_seed(config);
  const pnet::CoefficientVector alpha = config.coefficient_vector();

  std::vector<double> theta = config.theta_true;
  if (theta.empty()) theta.assign(alpha.dim(), 0.0);
  if (static_cast<int>(theta.size()) != alpha.dim())
    throw std::invalid_argument("config: theta_true length must match alpha");

  std::ostringstream csv;
  csv << "N_bar,M,d,mse_empirical,mse_bound_leading,mse_bound_exact,ratio,stderr\n";
  for (std::size_t i = 0; i < config.displacement_nbars.size(); ++i) {
    const double nbar = config.displacement_nbars[i];
    const auto protocol = pnet::DisplacementProtocol::make(alpha, nbar, config.passes);
    pnet::RngStream rng(pnet::substream_seed(seed, "displacement-sweep", i));
    const pnet::McEstimate mc =
        pnet::estimate_q_displacement(protocol, theta, config.displacement_shots, rng);
    const double leading =
        pnet::entangled_displacement_bound(alpha, nbar, config.effective_t(), false);
    const double exact =
        pnet::entangled_displacement_bound(alpha, nbar, config.effective_t(), true);
    csv << pnet::format_double(nbar) << ',' << config.passes << ',' << alpha.dim() << ','
        << pnet::format_double(mc.mse) << ',' << pnet::format_double(leading) << ','
        << pnet::format_double(exact) << ',' << pnet::format_double(mc.mse / leading) << ','
        << pnet::format_double(mc.std_error) << '\n';
  }
  emit(config, csv.str());
  return kExitOk;
}

int run_qfi(const CommonOpts& opts, const std::string& state_path, long long passes,
            bool oracle) {
  const pnet::FockState state =
      pnet::fock_state_from_json(pnet::Json::parse(pnet::read_text_file(state_path)));
  const pnet::QfiMatrix f = pnet::qfi_numeric_static(state, passes);
  pnet::Json j = pnet::qfi_to_json(f);
  j["M"] = passes;
  if (oracle) {
    auto protocol = [&](std::span<const double> theta) {
      std::vector<double> scaled(theta.begin(), theta.end());
      for (double& x : scaled) x *= static_cast<double>(passes);
      return pnet::apply_encoding(state, scaled);
    };
    const std::vector<double> theta0(state.sensing_modes(), 0.0);
    const pnet::QfiMatrix g = pnet::qfi_fidelity_oracle(protocol, theta0, 1e-3);
    j["oracle_deviation"] = pnet::QfiMatrix::relative_deviation(f, g);
  }
  const std::string text = j.dump(2) + "\n";
  if (!opts.out_path.empty()) {
    pnet::write_text_file(opts.out_path, text);
  } else {
    std::cout << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonic sensor-network function estimation toolkit"};
  app.require_subcommand(1);

  CommonOpts bounds_opts, design_opts, verify_opts, phase_opts, disp_opts, qfi_opts;
  std::string schedule_path, state_path;
  long long qfi_passes = 1;
  bool qfi_oracle = false;

  auto* cmd_bounds = app.add_subcommand("bounds", "closed-form precision bounds");
  add_common(cmd_bounds, bounds_opts);
  auto* cmd_design = app.add_subcommand("design", "solve for an optimal probe schedule");
  add_common(cmd_design, design_opts);
  auto* cmd_verify = app.add_subcommand("verify", "check a schedule file end to end");
  add_common(cmd_verify, verify_opts, /*config_required=*/false);
  cmd_verify->add_option("schedule", schedule_path, "schedule JSON file")->required();
  auto* cmd_phase = app.add_subcommand("simulate-phase", "robust phase estimation sweep");
  add_common(cmd_phase, phase_opts);
  auto* cmd_disp =
      app.add_subcommand("simulate-displacement", "Gaussian displacement sensing sweep");
  add_common(cmd_disp, disp_opts);
  auto* cmd_qfi = app.add_subcommand("qfi", "QFI of a Fock state JSON file");
  add_common(cmd_qfi, qfi_opts, /*config_required=*/false);
  cmd_qfi->add_option("state", state_path, "Fock state JSON file")->required();
  cmd_qfi->add_option("--passes", qfi_passes, "number of passes M");
  cmd_qfi->add_flag("--oracle", qfi_oracle, "cross-check with the fidelity oracle");

  try {
    app.parse(argc, argv);
    if (cmd_bounds->parsed()) return run_bounds(bounds_opts);
    if (cmd_design->parsed()) return run_design(design_opts);
    if (cmd_verify->parsed()) return run_verify(verify_opts, schedule_path);
    if (cmd_phase->parsed()) return run_simulate_phase(phase_opts);
    if (cmd_disp->parsed()) return run_simulate_displacement(disp_opts);
    if (cmd_qfi->parsed()) return run_qfi(qfi_opts, state_path, qfi_passes, qfi_oracle);
    return kExitValidation;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
