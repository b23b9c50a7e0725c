#pragma once

#include <random>
#include <vector>

#include "pnet/bounds.hpp"
#include "pnet/coefficient_vector.hpp"
#include "pnet/protocol.hpp"

namespace pnet::testing {

inline CoefficientVector coeffs(std::initializer_list<const char*> entries) {
  std::vector<Rational> raw;
  for (const char* e : entries) raw.push_back(Rational::parse(e));
  return partition_signs(std::move(raw));
}

/// Random rational with numerator in [lo, hi] and denominator in [1, 9].
inline Rational random_rational(std::mt19937_64& gen, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, 9);
  return Rational(BigInt(num(gen)), BigInt(den(gen)));
}

inline CoefficientVector random_coeffs(std::mt19937_64& gen, int dim, bool nonnegative) {
  while (true) {
    std::vector<Rational> raw;
    bool any = false;
    for (int j = 0; j < dim; ++j) {
      Rational r = random_rational(gen, nonnegative ? 0 : -9, 9);
      any = any || !r.is_zero();
      raw.push_back(std::move(r));
    }
    if (any) return partition_signs(std::move(raw));
  }
}

/// Independent grid/LP oracle for the dual problem: minimizes
/// N (beta_max - beta_min) over beta_max >= 0 >= beta_min with
/// beta_max ||a||_{1,P} - beta_min ||a||_{1,N} = 1, by scanning a dense
/// grid of beta_min values (the objective is linear, so the minimum sits at
/// an endpoint the grid contains exactly).
inline double lp_oracle_objective(const CoefficientVector& alpha, long long n_photons,
                                  int grid = 100001) {
  const double norm_p = alpha.pos_one_norm().to_double();
  const double norm_n = alpha.neg_one_norm().to_double();
  double best = std::numeric_limits<double>::infinity();
  if (norm_n == 0.0) {
    return static_cast<double>(n_photons) / norm_p;
  }
  for (int k = 0; k < grid; ++k) {
    const double beta_min = -1.0 / norm_n * static_cast<double>(k) / (grid - 1);
    const double beta_max = (1.0 + beta_min * norm_n) / norm_p;
    if (beta_max < -1e-15) continue;
    best = std::min(best, static_cast<double>(n_photons) * (beta_max - beta_min));
  }
  return best;
}

/// Exhaustive multiset enumeration over the omega-set columns: is there a
/// size-M multiset whose sum hits the target? Independent of the DFS
/// solver's pruning and ordering.
inline bool brute_force_feasible(const OmegaSet& w, long long passes) {
  if (!feasibility_precheck(w.alpha, w.n_photons, passes)) return false;
  const auto target = schedule_target(w.alpha, w.n_photons, passes);
  const int d = w.alpha.dim();
  const int n_cols = static_cast<int>(w.columns.size());
  std::vector<int> pick(passes, 0);  // nondecreasing column indices

  auto sum_matches = [&]() {
    std::vector<BigInt> sum(d, BigInt(0));
    for (long long m = 0; m < passes; ++m)
      for (int j = 0; j < d; ++j) sum[j] += BigInt(w.columns[pick[m]][j]);
    return sum == target;
  };

  while (true) {
    if (n_cols == 0) return false;
    if (sum_matches()) return true;
    int pos = static_cast<int>(passes) - 1;
    while (pos >= 0 && pick[pos] == n_cols - 1) --pos;
    if (pos < 0) return false;
    const int next = pick[pos] + 1;
    for (int i = pos; i < static_cast<int>(passes); ++i) pick[i] = next;
  }
}

}  // namespace pnet::testing
