#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnet/bounds.hpp"
#include "pnet/fock.hpp"
#include "pnet/protocol.hpp"

namespace pnet {

using Json = nlohmann::ordered_json;

/// Experiment configuration shared by all CLI subcommands. Rationals travel
/// as strings ("p/q" or "p") to preserve exactness.
struct ExperimentConfig {
  std::vector<std::string> alpha;
  std::optional<std::string> coupling;  // "phase" | "displacement"
  std::optional<long long> n_photons;
  std::optional<double> nbar;
  long long passes = 1;
  std::optional<double> t;  // defaults to M
  std::optional<std::uint64_t> seed;
  std::optional<long long> support_cap;
  std::uint64_t node_budget = 100000000ULL;
  std::size_t omega_limit = 1000000;
  std::vector<double> theta_true;

  // simulate-phase sweep
  std::vector<long long> phase_budgets = {16, 32, 64, 128, 256, 512};
  long long phase_trials = 500;
  long long rpe_nu_base = 2;
  long long rpe_nu_step = 2;

  // simulate-displacement sweep
  std::vector<double> displacement_nbars = {10.0, 100.0, 1000.0};
  long long displacement_shots = 100000;

  std::optional<std::string> out_path;

  CoefficientVector coefficient_vector() const;
  double effective_t() const { return t ? *t : static_cast<double>(passes); }
};

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

Json to_json(const BoundReport& report);
std::string bound_report_csv(const BoundReport& report);

Json schedule_to_json(const ProtocolSchedule& schedule, const QfiMatrix& qfi, double residual);
/// Rebuilds a schedule from its JSON form, revalidating the omega-set
/// constraints and the W r = target identity.
ProtocolSchedule schedule_from_json(const Json& j);

Json fock_state_to_json(const FockState& state);
FockState fock_state_from_json(const Json& j);

Json qfi_to_json(const QfiMatrix& f);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Fixed-format float for CSV cells: shortest representation that round
/// trips (printf %.17g trimmed).
std::string format_double(double x);

}  // namespace pnet
