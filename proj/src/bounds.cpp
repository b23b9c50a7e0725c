#include "pnet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace pnet {

namespace {

void require_positive_budget(double b, const char* what) {
  if (!(b > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

}  // namespace

Rational entangled_phase_bound_numerator(const CoefficientVector& alpha) {
  const Rational p = alpha.pos_one_norm();
  const Rational n = alpha.neg_one_norm();
  const Rational m = std::max(p, n);
  return m * m;
}

double entangled_phase_bound(const CoefficientVector& alpha, long long n_photons, double t) {
  if (n_photons < 1) throw std::invalid_argument("photon number must be >= 1");
  require_positive_budget(t, "t");
  const double num = entangled_phase_bound_numerator(alpha).to_double();
  const double nt = static_cast<double>(n_photons) * t;
  return num / (nt * nt);
}

double separable_phase_bound(const CoefficientVector& alpha, long long n_photons, double t) {
  if (n_photons < 1) throw std::invalid_argument("photon number must be >= 1");
  require_positive_budget(t, "t");
  const std::vector<double> v = alpha.to_doubles();
  const double norm = schatten_p(v, 2.0 / 3.0);
  const double nt = static_cast<double>(n_photons) * t;
  return norm * norm / (nt * nt);
}

double entangled_displacement_bound(const CoefficientVector& alpha, double nbar, double t,
                                    bool exact) {
  require_positive_budget(t, "t");
  if (nbar < 0.0) throw std::invalid_argument("Nbar must be nonnegative");
  const double two_norm_sq = alpha.two_norm_squared().to_double();
  if (exact) {
    const double s = std::sqrt(nbar) + std::sqrt(nbar + 1.0);
    return two_norm_sq / (t * t * s * s);
  }
  require_positive_budget(nbar, "Nbar");
  return two_norm_sq / (4.0 * nbar * t * t);
}

double separable_displacement_bound(const CoefficientVector& alpha, double nbar, double t) {
  require_positive_budget(nbar, "Nbar");
  require_positive_budget(t, "t");
  const double one_norm = alpha.one_norm().to_double();
  return one_norm * one_norm / (4.0 * nbar * t * t);
}

DualVector solve_beta_star_phase(const CoefficientVector& alpha, long long n_photons) {
  if (n_photons < 1) throw std::invalid_argument("photon number must be >= 1");
  const Rational norm_p = alpha.pos_one_norm();
  const Rational norm_n = alpha.neg_one_norm();
  // Two boundary candidates: all weight on the P set, or all weight on the
  // N set. Objective N * (beta_max - beta_min); minimum wins, P side on tie.
  const bool use_p_side = norm_n.is_zero() || norm_p >= norm_n;

  DualVector out;
  out.beta.assign(alpha.dim(), Rational(0));
  Rational span(0);
  if (use_p_side) {
    const Rational beta_max = Rational(1) / norm_p;
    for (int j : alpha.pos_set()) out.beta[j] = beta_max;
    span = beta_max;
  } else {
    const Rational beta_min = Rational(-1) / norm_n;
    for (int j : alpha.neg_set()) out.beta[j] = beta_min;
    span = -beta_min;
  }
  out.objective_exact = Rational(n_photons) * span;
  out.objective = out.objective_exact.to_double();

  Rational dot(0);
  for (int j = 0; j < alpha.dim(); ++j) dot += alpha.entry(j) * out.beta[j];
  if (dot != Rational(1))
    throw std::logic_error("solve_beta_star_phase: dual constraint violated");
  return out;
}

Allocation separable_photon_allocation(const CoefficientVector& alpha, double budget,
                                       Coupling coupling) {
  require_positive_budget(budget, "budget");
  const int d = alpha.dim();
  Allocation out;
  out.exact.assign(d, 0.0);

  std::vector<double> weights(d, 0.0);
  double weight_sum = 0.0;
  for (int j = 0; j < d; ++j) {
    const double aj = std::fabs(alpha.entry(j).to_double());
    if (aj == 0.0) continue;  // zero-coefficient modes get nothing
    weights[j] = coupling == Coupling::Phase ? std::cbrt(aj * aj) : aj;
    weight_sum += weights[j];
  }
  for (int j = 0; j < d; ++j) out.exact[j] = budget * weights[j] / weight_sum;

  if (coupling != Coupling::Phase) return out;

  // Largest-remainder rounding of the exact allocation to integers.
  const long long n = static_cast<long long>(std::llround(budget));
  if (static_cast<double>(n) != budget)
    throw std::invalid_argument("phase allocation needs an integer photon budget");
  out.rounded.assign(d, 0);
  std::vector<std::pair<double, int>> remainders;
  long long assigned = 0;
  for (int j = 0; j < d; ++j) {
    out.rounded[j] = static_cast<long long>(std::floor(out.exact[j] + 1e-12));
    assigned += out.rounded[j];
    remainders.emplace_back(out.exact[j] - static_cast<double>(out.rounded[j]), j);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (long long k = 0; k < n - assigned; ++k) out.rounded[remainders[k % d].second] += 1;

  // Achievable separable MSE (up to the common 1/t^2): sum_j a_j^2 / eta_j^2.
  auto achievable = [&](auto&& eta) {
    double mse = 0.0;
    for (int j = 0; j < d; ++j) {
      const double aj = alpha.entry(j).to_double();
      if (aj == 0.0) continue;
      const double e = static_cast<double>(eta[j]);
      if (e <= 0.0) return std::numeric_limits<double>::infinity();
      mse += aj * aj / (e * e);
    }
    return mse;
  };
  const double ideal = achievable(out.exact);
  const double rounded = achievable(out.rounded);
  out.rounding_degrades_bound = rounded > ideal * 1.01;
  return out;
}

long long min_entanglement(const CoefficientVector& alpha, long long passes, Coupling coupling,
                           Control control) {
  if (passes < 1) throw std::invalid_argument("passes must be >= 1");
  if (control == Control::Arbitrary) return coupling == Coupling::Phase ? 2 : 1;
  const long long support = alpha.support_size();
  const long long base = ceil_div(support, passes);
  return coupling == Coupling::Phase ? base + 1 : base;
}

BoundReport bound_report(const CoefficientVector& alpha, std::optional<long long> n_photons,
                         std::optional<double> nbar, double t, long long passes) {
  if (!n_photons && !nbar)
    throw std::invalid_argument("bound_report: supply N and/or Nbar");
  BoundReport rep;
  for (const auto& r : alpha.entries()) rep.alpha.push_back(r.str());
  rep.flipped = alpha.flipped();
  rep.dim = alpha.dim();
  rep.t = t;
  rep.passes = passes;

  if (n_photons) {
    CouplingReport c;
    c.budget = static_cast<double>(*n_photons);
    c.entangled_mse = entangled_phase_bound(alpha, *n_photons, t);
    c.entangled_mse_exact = c.entangled_mse;
    c.separable_mse = separable_phase_bound(alpha, *n_photons, t);
    c.ratio = c.separable_mse / c.entangled_mse;
    c.entanglement_discrete = min_entanglement(alpha, passes, Coupling::Phase, Control::Discrete);
    c.entanglement_arbitrary = min_entanglement(alpha, passes, Coupling::Phase, Control::Arbitrary);
    rep.phase = c;
  }
  if (nbar) {
    CouplingReport c;
    c.budget = *nbar;
    c.entangled_mse = entangled_displacement_bound(alpha, *nbar, t, /*exact=*/false);
    c.entangled_mse_exact = entangled_displacement_bound(alpha, *nbar, t, /*exact=*/true);
    c.separable_mse = separable_displacement_bound(alpha, *nbar, t);
    c.ratio = c.separable_mse / c.entangled_mse;
    c.entanglement_discrete =
        min_entanglement(alpha, passes, Coupling::Displacement, Control::Discrete);
    c.entanglement_arbitrary =
        min_entanglement(alpha, passes, Coupling::Displacement, Control::Arbitrary);
    rep.displacement = c;
  }
  return rep;
}

}  // namespace pnet
