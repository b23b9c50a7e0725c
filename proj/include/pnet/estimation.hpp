#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pnet/protocol.hpp"
#include "pnet/rng.hpp"

namespace pnet {

/// Probability of the +1 parity outcome given total interbranch phase and a
/// control phase: (1 + cos(phi_tot + delta)) / 2.
double parity_outcome_prob(double phi_tot, double delta);

/// Multi-stage schedule for robust phase estimation. Stage j uses
/// stage_photons[j]-photon probes, repeated repetitions[j] times (split
/// across the two control phases). Photon numbers must be strictly
/// increasing; the default geometry doubles each stage.
struct RpeSchedule {
  std::vector<long long> stage_photons;
  std::vector<long long> repetitions;

  int stages() const { return static_cast<int>(stage_photons.size()); }
  long long total_photons() const;
  void validate() const;  // throws "invalid RPE schedule"
};

/// Default schedule for a photon budget: stage photons n_base * 2^(j-1),
/// repetitions nu_j = nu_base + nu_step * (K - j) with K the largest stage
/// count fitting the budget; leftover photons pad the first stage. The
/// budget must be a positive multiple of n_base and at least nu_base *
/// n_base.
RpeSchedule rpe_schedule_for_budget(long long budget, long long n_base = 1,
                                    long long nu_base = 2, long long nu_step = 2);

/// Outcome sampler: given a stage photon number and control phase, returns
/// +1/-1 distributed per parity_outcome_prob at that stage's total phase.
using PhaseOracle = std::function<int(long long stage_photons, double delta, RngStream&)>;

/// Non-adaptive robust phase estimation: per stage, frequency estimates at
/// control phases 0 and pi/2 give the stage phase by arctangent; interval
/// halving against the running estimate removes the winding ambiguity.
/// Returns the phase-per-photon estimate mapped to [0, 2pi).
double rpe_estimate(const PhaseOracle& oracle, const RpeSchedule& schedule, RngStream& rng);

struct EstimationResult {
  double q_hat = 0.0;
  double mse_empirical = 0.0;
  double std_error = 0.0;
  long long trials = 0;
  double bound = 0.0;   // entangled phase bound at the total photon budget
  double ratio = 0.0;   // mse_empirical / bound
  bool wrap_flagged = false;  // |q| N1 M / ||alpha||_{1,P} >= pi at stage 1
};

/// End-to-end phase estimation of q = alpha . theta through a protocol
/// schedule: stage j runs the schedule scaled to stage_photons[j] (which
/// must be multiples of the schedule's N), accumulating interbranch phase
/// (W r) . theta * N_j / N per shot; RPE extracts the phase, and the
/// estimate is unwound to q (with the canonicalization flip undone).
EstimationResult estimate_function_phase(const ProtocolSchedule& schedule,
                                         std::span<const double> theta_true,
                                         const RpeSchedule& rpe, long long trials,
                                         RngStream& rng);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log(mse) against log(resource). Slope near -2
/// certifies Heisenberg scaling; near -1, standard scaling.
FitResult scaling_fit(std::span<const std::pair<double, double>> points);

/// Difference a - b wrapped to (-pi, pi].
double wrap_angle(double x);

}  // namespace pnet
