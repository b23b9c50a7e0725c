#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pnet/coefficient_vector.hpp"

namespace pnet {

enum class Coupling { Phase, Displacement };
enum class Control { Discrete, Arbitrary };

/// Optimal dual vector for the phase-sensing minimax problem. beta is equal
/// across the P set and across the N set, satisfies alpha . beta = 1 exactly
/// and alpha_j beta_j >= 0 for all j. The objective is the minimized
/// Fock-restricted seminorm N * (beta_max - beta_min).
struct DualVector {
  std::vector<Rational> beta;
  Rational objective_exact;
  double objective = 0.0;
};

/// Entangled phase-sensing bound max{||a||_{1,P}, ||a||_{1,N}}^2 / (N t)^2.
double entangled_phase_bound(const CoefficientVector& alpha, long long n_photons, double t);

/// Exact rational numerator max{||a||_{1,P}, ||a||_{1,N}}^2 of the entangled
/// phase bound; reduces to ||a||_1^2 when the N set is empty.
Rational entangled_phase_bound_numerator(const CoefficientVector& alpha);

/// Separable phase-sensing bound ||a||_{2/3}^2 / (N t)^2 with the optimal
/// per-mode photon split eta_j proportional to |a_j|^{2/3}.
double separable_phase_bound(const CoefficientVector& alpha, long long n_photons, double t);

/// Entangled displacement bound. Leading order: ||a||_2^2 / (4 Nbar t^2).
/// Exact mode: ||a||_2^2 / (t^2 (sqrt(Nbar) + sqrt(Nbar+1))^2), the
/// single-mode-tight refinement aggregated over modes.
double entangled_displacement_bound(const CoefficientVector& alpha, double nbar, double t,
                                    bool exact);

/// Separable displacement bound ||a||_1^2 / (4 Nbar t^2).
double separable_displacement_bound(const CoefficientVector& alpha, double nbar, double t);

/// Solves the two-boundary-candidate minimization of N (beta_max - beta_min)
/// subject to alpha . beta = 1. Ties between the P-side and N-side
/// candidates break toward the P side.
DualVector solve_beta_star_phase(const CoefficientVector& alpha, long long n_photons);

/// Per-mode photon allocation. Phase: weights proportional to |a_j|^{2/3},
/// reported exactly plus a largest-remainder integer rounding with a flag
/// raised when rounding worsens the achievable bound by more than 1%.
/// Displacement: Nbar_j = |a_j| Nbar / ||a||_1, no rounding.
struct Allocation {
  std::vector<double> exact;
  std::vector<long long> rounded;  // empty for displacement coupling
  bool rounding_degrades_bound = false;
};
Allocation separable_photon_allocation(const CoefficientVector& alpha, double budget,
                                       Coupling coupling);

/// Minimum k-mode entanglement an optimal protocol needs.
/// Phase/discrete: ceil(||a||_0 / M) + 1. Displacement/discrete:
/// ceil(||a||_0 / M). Phase/arbitrary: 2. Displacement/arbitrary: 1
/// (no entanglement).
long long min_entanglement(const CoefficientVector& alpha, long long passes, Coupling coupling,
                           Control control);

/// Aggregated bound summary for one coefficient vector. Populates whichever
/// couplings have a budget supplied. Qubit-network formulas are carried as
/// static reference strings, never evaluated.
struct CouplingReport {
  double budget = 0.0;             // N (phase) or Nbar (displacement)
  double entangled_mse = 0.0;      // displacement: leading order
  double entangled_mse_exact = 0.0;  // displacement only; phase: same value
  double separable_mse = 0.0;
  double ratio = 0.0;              // separable / entangled (leading)
  long long entanglement_discrete = 0;
  long long entanglement_arbitrary = 0;
};

struct BoundReport {
  std::vector<std::string> alpha;  // rational strings, canonical orientation
  bool flipped = false;
  int dim = 0;
  double t = 0.0;
  long long passes = 1;
  std::optional<CouplingReport> phase;
  std::optional<CouplingReport> displacement;
};

BoundReport bound_report(const CoefficientVector& alpha, std::optional<long long> n_photons,
                         std::optional<double> nbar, double t, long long passes);

/// Table of qubit sensor-network reference formulas (documentation
/// constants; the qubit network itself is out of scope).
struct QubitReference {
  std::string mse_separable = "||alpha||_2^2 / t^2";
  std::string mse_entangled = "||alpha||_inf^2 / t^2";
  std::string entanglement_discrete =
      "k >= max(ceil(||alpha||_1/||alpha||_inf), ceil(||alpha||_0/M))";
  std::string entanglement_arbitrary = "||alpha||_1/||alpha||_inf in (k-1, k]";
  std::string k_partite_protocol_always_exists = "yes";
};

}  // namespace pnet
