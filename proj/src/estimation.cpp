#include "pnet/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pnet/bounds.hpp"
#include "pnet/schedule_sim.hpp"

namespace pnet {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double parity_outcome_prob(double phi_tot, double delta) {
  return 0.5 * (1.0 + std::cos(phi_tot + delta));
}

double wrap_angle(double x) {
  x = std::fmod(x, kTwoPi);
  if (x > std::numbers::pi) x -= kTwoPi;
  if (x <= -std::numbers::pi) x += kTwoPi;
  return x;
}

long long RpeSchedule::total_photons() const {
  long long total = 0;
  for (int j = 0; j < stages(); ++j) total += stage_photons[j] * repetitions[j];
  return total;
}

void RpeSchedule::validate() const {
  if (stage_photons.empty() || stage_photons.size() != repetitions.size())
    throw std::invalid_argument("invalid RPE schedule");
  for (int j = 0; j < stages(); ++j) {
    if (stage_photons[j] < 1 || repetitions[j] < 1)
      throw std::invalid_argument("invalid RPE schedule");
    if (j > 0 && stage_photons[j] <= stage_photons[j - 1])
      throw std::invalid_argument("invalid RPE schedule");
  }
}

RpeSchedule rpe_schedule_for_budget(long long budget, long long n_base, long long nu_base,
                                    long long nu_step) {
  if (n_base < 1 || nu_base < 2 || nu_step < 0)
    throw std::invalid_argument("invalid RPE schedule");
  if (budget < nu_base * n_base || budget % n_base != 0)
    throw std::invalid_argument("invalid RPE schedule");

  auto base_total = [&](int k) {
    long long total = 0;
    for (int j = 1; j <= k; ++j)
      total += (nu_base + nu_step * (k - j)) * (n_base << (j - 1));
    return total;
  };
  int k = 1;
  while (base_total(k + 1) <= budget) ++k;

  RpeSchedule s;
  for (int j = 1; j <= k; ++j) {
    s.stage_photons.push_back(n_base << (j - 1));
    s.repetitions.push_back(nu_base + nu_step * (k - j));
  }
  // Leftover budget pads the cheapest (first) stage.
  s.repetitions[0] += (budget - base_total(k)) / n_base;
  s.validate();
  if (s.total_photons() != budget)
    throw std::logic_error("rpe_schedule_for_budget: accounting error");
  return s;
}

double rpe_estimate(const PhaseOracle& oracle, const RpeSchedule& schedule, RngStream& rng) {
  schedule.validate();
  for (long long nu : schedule.repetitions) {
    if (nu < 2) throw std::invalid_argument("invalid RPE schedule");
  }
  const int stages = schedule.stages();
  const long long unit = schedule.stage_photons[0];
  for (long long n_j : schedule.stage_photons) {
    if (n_j % unit != 0) throw std::invalid_argument("invalid RPE schedule");
  }

  // Per-stage counts at the two control phases. The phase-per-photon u is
  // identifiable only modulo 2 pi / N_1; all candidates live on that window.
  std::vector<long long> plus_cos(stages, 0), plus_sin(stages, 0);
  std::vector<long long> shots_cos(stages, 0), shots_sin(stages, 0);
  std::vector<double> psi_hat(stages, 0.0);

  // Exact binomial log-likelihood of all counts collected through stage
  // `upto` at phase-per-photon u; the model is parity_outcome_prob.
  auto neg_log_lik = [&](double u, int upto) {
    double cost = 0.0;
    for (int i = 0; i <= upto; ++i) {
      const double psi = static_cast<double>(schedule.stage_photons[i]) * u;
      const double p0 = std::clamp(0.5 * (1.0 + std::cos(psi)), 1e-12, 1.0 - 1e-12);
      const double p1 = std::clamp(0.5 * (1.0 - std::sin(psi)), 1e-12, 1.0 - 1e-12);
      cost -= static_cast<double>(plus_cos[i]) * std::log(p0) +
              static_cast<double>(shots_cos[i] - plus_cos[i]) * std::log(1.0 - p0);
      cost -= static_cast<double>(plus_sin[i]) * std::log(p1) +
              static_cast<double>(shots_sin[i] - plus_sin[i]) * std::log(1.0 - p1);
    }
    return cost;
  };

  double estimate = 0.0;  // phase per photon
  for (int j = 0; j < stages; ++j) {
    const long long n_j = schedule.stage_photons[j];
    const long long shots = schedule.repetitions[j];
    shots_cos[j] = (shots + 1) / 2;
    shots_sin[j] = shots / 2;
    for (long long s = 0; s < shots_cos[j]; ++s)
      plus_cos[j] += oracle(n_j, 0.0, rng) > 0 ? 1 : 0;
    for (long long s = 0; s < shots_sin[j]; ++s)
      plus_sin[j] += oracle(n_j, std::numbers::pi / 2.0, rng) > 0 ? 1 : 0;

    // P(+|0) = (1 + cos psi)/2 and P(+|pi/2) = (1 - sin psi)/2.
    const double c =
        2.0 * static_cast<double>(plus_cos[j]) / static_cast<double>(shots_cos[j]) - 1.0;
    const double s_val =
        1.0 - 2.0 * static_cast<double>(plus_sin[j]) / static_cast<double>(shots_sin[j]);
    psi_hat[j] = std::atan2(s_val, c);  // stage phase mod 2 pi

    if (j == 0) {
      estimate = psi_hat[0] / static_cast<double>(n_j);
      continue;
    }

    // Interval halving: the stage phase pins u up to n_j / unit windings.
    // Candidates are scored with the accumulated likelihood; the last stage
    // blends them with a likelihood-weighted circular mean, which softens
    // near-tie disambiguations.
    const long long windings = n_j / unit;
    std::vector<double> candidate(windings), cost(windings);
    double min_cost = std::numeric_limits<double>::infinity();
    int best = 0;
    for (long long k = 0; k < windings; ++k) {
      candidate[k] = (psi_hat[j] + kTwoPi * static_cast<double>(k)) / static_cast<double>(n_j);
      cost[k] = neg_log_lik(candidate[k], j);
      if (cost[k] < min_cost) {
        min_cost = cost[k];
        best = static_cast<int>(k);
      }
    }
    if (j < stages - 1) {
      estimate = candidate[best];
    } else {
      std::complex<double> z(0.0, 0.0);
      for (long long k = 0; k < windings; ++k) {
        z += std::exp(-(cost[k] - min_cost)) *
             std::polar(1.0, candidate[k] * static_cast<double>(unit));
      }
      double angle = std::arg(z);
      if (angle < 0.0) angle += kTwoPi;
      estimate = angle / static_cast<double>(unit);
    }
  }

  // Fold into the stage-1 window [0, 2 pi / unit).
  double phi = estimate * static_cast<double>(unit);
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  return phi / static_cast<double>(unit);
}

EstimationResult estimate_function_phase(const ProtocolSchedule& schedule,
                                         std::span<const double> theta_true,
                                         const RpeSchedule& rpe, long long trials,
                                         RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  rpe.validate();
  const CoefficientVector& alpha = schedule.omega_set.alpha;
  const long long n_base = schedule.omega_set.n_photons;
  for (long long n_j : rpe.stage_photons) {
    if (n_j % n_base != 0) throw std::invalid_argument("invalid RPE schedule");
  }

  // Interbranch phase per shot at the base photon number; stages scale it
  // by N_j / N. The flip recorded at canonicalization is undone at the end.
  const double base_phase = relative_phase(schedule, theta_true);
  const double u_true = base_phase / static_cast<double>(n_base);

  const double pos_norm = alpha.pos_one_norm().to_double();
  const double m = static_cast<double>(schedule.passes);
  double q_true = 0.0;
  {
    const std::vector<double> a = alpha.to_doubles();
    for (int j = 0; j < alpha.dim(); ++j) q_true += a[j] * theta_true[j];
  }

  EstimationResult out;
  out.trials = trials;
  out.wrap_flagged =
      std::fabs(u_true) * static_cast<double>(rpe.stage_photons[0]) >= std::numbers::pi;

  const PhaseOracle oracle = [&](long long n_j, double delta, RngStream& r) {
    const double phi_tot = u_true * static_cast<double>(n_j);
    return r.pm_one(parity_outcome_prob(phi_tot, delta));
  };

  Welford q_acc, err2_acc;
  const long long unit = rpe.stage_photons[0];
  for (long long trial = 0; trial < trials; ++trial) {
    const double u_hat = rpe_estimate(oracle, rpe, rng);
    // Circular error on the stage-1 window, then unwound to q units.
    const double u_err =
        wrap_angle((u_hat - u_true) * static_cast<double>(unit)) / static_cast<double>(unit);
    const double q_err = u_err * pos_norm / m;
    double q_hat = q_true + q_err;
    q_acc.add(alpha.flipped() ? -q_hat : q_hat);
    err2_acc.add(q_err * q_err);
  }

  out.q_hat = q_acc.mean();
  out.mse_empirical = err2_acc.mean();
  out.std_error = err2_acc.std_error_of_mean();
  out.bound = entangled_phase_bound(alpha, rpe.total_photons(), m);
  out.ratio = out.mse_empirical / out.bound;
  return out;
}

FitResult scaling_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("scaling_fit: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [resource, mse] : points) {
    if (!(resource > 0.0) || !(mse > 0.0))
      throw std::invalid_argument("scaling_fit: values must be positive");
    const double x = std::log(resource);
    const double y = std::log(mse);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  FitResult fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double sst = syy - sy * sy / n;
  double sse = 0.0;
  for (const auto& [resource, mse] : points) {
    const double resid = std::log(mse) - (fit.intercept + fit.slope * std::log(resource));
    sse += resid * resid;
  }
  fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  return fit;
}

}  // namespace pnet
