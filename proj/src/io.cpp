#include "pnet/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pnet {

CoefficientVector ExperimentConfig::coefficient_vector() const {
  std::vector<Rational> entries;
  entries.reserve(alpha.size());
  for (const auto& s : alpha) entries.push_back(Rational::parse(s));
  return partition_signs(std::move(entries));
}

ExperimentConfig parse_config(const Json& j) {
  ExperimentConfig c;
  if (!j.contains("alpha") || !j["alpha"].is_array() || j["alpha"].empty())
    throw std::invalid_argument("config: alpha must be a nonempty array of rational strings");
  for (const auto& e : j["alpha"]) c.alpha.push_back(e.get<std::string>());

  if (j.contains("coupling") && !j["coupling"].is_null()) {
    const std::string coupling = j["coupling"].get<std::string>();
    if (coupling != "phase" && coupling != "displacement")
      throw std::invalid_argument("config: coupling must be 'phase' or 'displacement'");
    c.coupling = coupling;
  }
  if (j.contains("N") && !j["N"].is_null()) c.n_photons = j["N"].get<long long>();
  if (j.contains("N_bar") && !j["N_bar"].is_null()) c.nbar = j["N_bar"].get<double>();
  if (j.contains("M") && !j["M"].is_null()) c.passes = j["M"].get<long long>();
  if (j.contains("t") && !j["t"].is_null()) c.t = j["t"].get<double>();
  if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("support_cap") && !j["support_cap"].is_null())
    c.support_cap = j["support_cap"].get<long long>();
  if (j.contains("node_budget") && !j["node_budget"].is_null())
    c.node_budget = j["node_budget"].get<std::uint64_t>();
  if (j.contains("omega_limit") && !j["omega_limit"].is_null())
    c.omega_limit = j["omega_limit"].get<std::size_t>();
  if (j.contains("theta_true") && !j["theta_true"].is_null())
    for (const auto& e : j["theta_true"]) c.theta_true.push_back(e.get<double>());

  if (j.contains("phase_sweep") && !j["phase_sweep"].is_null()) {
    const auto& s = j["phase_sweep"];
    if (s.contains("budgets")) {
      c.phase_budgets.clear();
      for (const auto& e : s["budgets"]) c.phase_budgets.push_back(e.get<long long>());
    }
    if (s.contains("trials")) c.phase_trials = s["trials"].get<long long>();
  }
  if (j.contains("rpe") && !j["rpe"].is_null()) {
    const auto& s = j["rpe"];
    if (s.contains("nu_base")) c.rpe_nu_base = s["nu_base"].get<long long>();
    if (s.contains("nu_step")) c.rpe_nu_step = s["nu_step"].get<long long>();
  }
  if (j.contains("displacement_sweep") && !j["displacement_sweep"].is_null()) {
    const auto& s = j["displacement_sweep"];
    if (s.contains("nbars")) {
      c.displacement_nbars.clear();
      for (const auto& e : s["nbars"]) c.displacement_nbars.push_back(e.get<double>());
    }
    if (s.contains("shots")) c.displacement_shots = s["shots"].get<long long>();
  }
  if (j.contains("out") && !j["out"].is_null()) c.out_path = j["out"].get<std::string>();

  if (c.passes < 1) throw std::invalid_argument("config: M must be >= 1");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(Json::parse(read_text_file(path)));
}

namespace {

Json coupling_report_json(const CouplingReport& c, bool displacement) {
  Json j;
  j[displacement ? "N_bar" : "N"] = c.budget;
  j["mse_entangled"] = c.entangled_mse;
  if (displacement) j["mse_entangled_exact"] = c.entangled_mse_exact;
  j["mse_separable"] = c.separable_mse;
  j["ratio_separable_over_entangled"] = c.ratio;
  j["entanglement_discrete"] = c.entanglement_discrete;
  j["entanglement_arbitrary"] = c.entanglement_arbitrary;
  return j;
}

}  // namespace

Json to_json(const BoundReport& report) {
  Json j;
  j["alpha"] = report.alpha;
  j["flipped"] = report.flipped;
  j["d"] = report.dim;
  j["t"] = report.t;
  j["M"] = report.passes;
  if (report.phase) j["phase"] = coupling_report_json(*report.phase, false);
  if (report.displacement) j["displacement"] = coupling_report_json(*report.displacement, true);
  const QubitReference q;
  j["qubit_reference"] = Json{{"mse_separable", q.mse_separable},
                              {"mse_entangled", q.mse_entangled},
                              {"entanglement_discrete", q.entanglement_discrete},
                              {"entanglement_arbitrary", q.entanglement_arbitrary},
                              {"k_partite_protocol_always_exists",
                               q.k_partite_protocol_always_exists}};
  return j;
}

std::string bound_report_csv(const BoundReport& report) {
  std::ostringstream out;
  out << "alpha,d,coupling,budget,t,M,mse_entangled,mse_separable,ratio\n";
  std::string alpha_cell;
  for (std::size_t i = 0; i < report.alpha.size(); ++i) {
    if (i) alpha_cell += '|';
    alpha_cell += report.alpha[i];
  }
  auto row = [&](const CouplingReport& c, const char* coupling) {
    out << alpha_cell << ',' << report.dim << ',' << coupling << ','
        << format_double(c.budget) << ',' << format_double(report.t) << ',' << report.passes
        << ',' << format_double(c.entangled_mse) << ',' << format_double(c.separable_mse)
        << ',' << format_double(c.ratio) << '\n';
  };
  if (report.phase) row(*report.phase, "phase");
  if (report.displacement) row(*report.displacement, "displacement");
  return out.str();
}

Json schedule_to_json(const ProtocolSchedule& schedule, const QfiMatrix& qfi, double residual) {
  Json j;
  std::vector<std::string> alpha;
  for (const auto& r : schedule.omega_set.alpha.entries()) alpha.push_back(r.str());
  j["alpha"] = alpha;
  j["N"] = schedule.omega_set.n_photons;
  j["M"] = schedule.passes;
  if (schedule.omega_set.support_cap) j["support_cap"] = *schedule.omega_set.support_cap;
  j["columns"] = schedule.omega_set.columns;
  j["r"] = schedule.repetitions;
  std::vector<std::vector<double>> qfi_rows(qfi.dim(), std::vector<double>(qfi.dim()));
  for (int i = 0; i < qfi.dim(); ++i)
    for (int k = 0; k < qfi.dim(); ++k) qfi_rows[i][k] = qfi(i, k);
  j["qfi"] = qfi_rows;
  j["residual"] = residual;
  return j;
}

ProtocolSchedule schedule_from_json(const Json& j) {
  std::vector<Rational> entries;
  for (const auto& e : j.at("alpha")) entries.push_back(Rational::parse(e.get<std::string>()));
  CoefficientVector alpha = partition_signs(std::move(entries));
  const long long n = j.at("N").get<long long>();
  const long long m = j.at("M").get<long long>();

  OmegaSet w;
  w.alpha = alpha;
  w.n_photons = n;
  if (j.contains("support_cap") && !j["support_cap"].is_null())
    w.support_cap = j["support_cap"].get<long long>();
  for (const auto& col : j.at("columns")) {
    std::vector<long long> column;
    for (const auto& e : col) column.push_back(e.get<long long>());
    ProbeFamilySpec spec{column, 0.0};
    validate_probe_spec(alpha, spec, n);  // family-set column constraints
    w.columns.push_back(std::move(column));
  }

  ProtocolSchedule schedule;
  schedule.omega_set = std::move(w);
  for (const auto& e : j.at("r")) schedule.repetitions.push_back(e.get<long long>());
  if (schedule.repetitions.size() != schedule.omega_set.columns.size())
    throw std::invalid_argument("schedule: r length must match columns");
  schedule.passes = m;
  schedule.target = schedule_target(alpha, n, m);
  return schedule;
}

Json fock_state_to_json(const FockState& state) {
  Json entries = Json::array();
  for (const auto& [occ, amp] : state.amplitudes()) {
    entries.push_back(Json{{"occupation", occ}, {"re", amp.real()}, {"im", amp.imag()}});
  }
  return entries;
}

FockState fock_state_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("fock state JSON: expected a nonempty list");
  AmplitudeMap amps;
  for (const auto& e : j) {
    Occupation occ;
    for (const auto& c : e.at("occupation")) occ.push_back(c.get<int>());
    amps[occ] = Amplitude(e.at("re").get<double>(), e.at("im").get<double>());
  }
  int total = 0;
  for (int c : amps.begin()->first) total += c;
  return FockState(total, std::move(amps));
}

Json qfi_to_json(const QfiMatrix& f) {
  std::vector<std::vector<double>> rows(f.dim(), std::vector<double>(f.dim()));
  for (int i = 0; i < f.dim(); ++i)
    for (int k = 0; k < f.dim(); ++k) rows[i][k] = f(i, k);
  return Json{{"dim", f.dim()}, {"entries", rows}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string format_double(double x) {
  char buf[64];
  if (x == static_cast<long long>(x) && std::fabs(x) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(x));
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

}  // namespace pnet
