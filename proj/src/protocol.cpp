#include "pnet/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pnet {

long long entanglement_per_pass(std::span<const long long> omega,
                                const CoefficientVector& alpha, long long n_photons) {
  if (static_cast<int>(omega.size()) != alpha.dim())
    throw std::invalid_argument("entanglement_per_pass: dimension mismatch");
  long long support = 0;
  long long neg_norm = 0;
  for (int j = 0; j < alpha.dim(); ++j) {
    if (omega[j] != 0) ++support;
    if (!alpha.in_pos_set(j)) neg_norm += std::llabs(omega[j]);
  }
  const long long count = support + (neg_norm < n_photons ? 1 : 0);
  return std::max<long long>(count, 1);
}

bool feasibility_precheck(const CoefficientVector& alpha, long long n_photons, long long passes) {
  if (n_photons < 1 || passes < 1) throw std::invalid_argument("N and M must be >= 1");
  const Rational scale = Rational(n_photons) * Rational(passes) / alpha.pos_one_norm();
  for (int j = 0; j < alpha.dim(); ++j) {
    if ((alpha.entry(j) * scale).den() != 1) return false;
  }
  return true;
}

std::vector<BigInt> schedule_target(const CoefficientVector& alpha, long long n_photons,
                                    long long passes) {
  if (!feasibility_precheck(alpha, n_photons, passes))
    throw std::invalid_argument("schedule_target: N M alpha / ||alpha||_{1,P} is not integral");
  const Rational scale = Rational(n_photons) * Rational(passes) / alpha.pos_one_norm();
  std::vector<BigInt> target;
  target.reserve(alpha.dim());
  for (int j = 0; j < alpha.dim(); ++j) target.push_back((alpha.entry(j) * scale).num());
  return target;
}

namespace {

struct OmegaEnumerator {
  const CoefficientVector& alpha;
  long long n_photons;
  std::optional<long long> support_cap;
  std::size_t limit;
  std::vector<std::vector<long long>> out;
  std::vector<long long> current;
  long long pos_remaining;  // photons still to place on P modes
  long long neg_remaining;  // slack for photons on N modes
  int last_pos_mode = -1;

  OmegaEnumerator(const CoefficientVector& a, long long n, std::optional<long long> cap,
                  std::size_t lim)
      : alpha(a), n_photons(n), support_cap(cap), limit(lim),
        current(a.dim(), 0), pos_remaining(n), neg_remaining(n) {
    for (int j = 0; j < a.dim(); ++j) {
      if (a.in_pos_set(j)) last_pos_mode = j;
    }
  }

  void run() { recurse(0); }

  void recurse(int mode) {
    if (mode == alpha.dim()) {
      if (pos_remaining != 0) return;
      if (support_cap &&
          entanglement_per_pass(current, alpha, n_photons) > *support_cap)
        return;
      out.push_back(current);
      if (out.size() > limit)
        throw std::runtime_error("omega set too large; supply support_cap");
      return;
    }
    if (alpha.in_pos_set(mode)) {
      // Remaining P modes must absorb pos_remaining exactly.
      const long long hi = pos_remaining;
      const long long lo = mode == last_pos_mode ? pos_remaining : 0;
      for (long long v = hi; v >= lo; --v) {
        current[mode] = v;
        pos_remaining -= v;
        recurse(mode + 1);
        pos_remaining += v;
      }
    } else {
      for (long long v = 0; v >= -neg_remaining; --v) {
        current[mode] = v;
        neg_remaining += v;
        recurse(mode + 1);
        neg_remaining -= v;
      }
    }
    current[mode] = 0;
  }
};

}  // namespace

OmegaSet build_omega_set(const CoefficientVector& alpha, long long n_photons,
                         std::optional<long long> support_cap, std::size_t limit) {
  if (n_photons < 1) throw std::invalid_argument("N must be >= 1");
  OmegaEnumerator en(alpha, n_photons, support_cap, limit);
  en.run();
  return OmegaSet{alpha, n_photons, std::move(en.out), support_cap};
}

std::vector<int> ProtocolSchedule::pass_columns() const {
  std::vector<int> seq;
  seq.reserve(passes);
  for (std::size_t n = 0; n < repetitions.size(); ++n) {
    for (long long k = 0; k < repetitions[n]; ++k) seq.push_back(static_cast<int>(n));
  }
  return seq;
}

std::vector<BigInt> ProtocolSchedule::weighted_sum() const {
  std::vector<BigInt> sum(omega_set.alpha.dim(), BigInt(0));
  for (std::size_t n = 0; n < repetitions.size(); ++n) {
    if (repetitions[n] == 0) continue;
    for (int j = 0; j < omega_set.alpha.dim(); ++j)
      sum[j] += BigInt(repetitions[n]) * BigInt(omega_set.columns[n][j]);
  }
  return sum;
}

namespace {

struct DfsSolver {
  const OmegaSet& w;
  long long passes;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool budget_hit = false;

  std::vector<BigInt> need;  // target minus partial sum
  std::vector<long long> reps;
  bool signs_fixed;          // no zero coefficients: componentwise monotone

  DfsSolver(const OmegaSet& omega_set, long long m, std::uint64_t node_budget,
            std::vector<BigInt> target)
      : w(omega_set), passes(m), budget(node_budget), need(std::move(target)),
        reps(omega_set.columns.size(), 0) {
    signs_fixed = true;
    for (const auto& a : w.alpha.entries()) signs_fixed = signs_fixed && !a.is_zero();
  }

  bool feasible_remainder(long long passes_left) const {
    // Sum over P modes of each column's |omega| is exactly N.
    BigInt pos_need(0);
    for (int j = 0; j < w.alpha.dim(); ++j) {
      const bool pos = w.alpha.in_pos_set(j);
      if (signs_fixed) {
        if (pos) {
          if (need[j] < 0) return false;
          pos_need += need[j];
        } else {
          if (need[j] > 0) return false;
        }
        // No single column moves a mode by more than N per pass.
        if (abs(need[j]) > BigInt(passes_left) * w.n_photons) return false;
      } else {
        if (abs(need[j]) > BigInt(passes_left) * w.n_photons) return false;
        if (pos) pos_need += need[j];
      }
    }
    if (signs_fixed && pos_need != BigInt(passes_left) * w.n_photons) return false;
    return true;
  }

  bool solve(std::size_t col, long long passes_left) {
    if (++nodes > budget) {
      budget_hit = true;
      return false;
    }
    if (passes_left == 0) {
      for (const auto& x : need)
        if (x != 0) return false;
      return true;
    }
    if (col == w.columns.size()) return false;
    if (!feasible_remainder(passes_left)) return false;

    for (long long r = passes_left; r >= 0; --r) {
      reps[col] = r;
      if (r > 0) {
        for (int j = 0; j < w.alpha.dim(); ++j)
          need[j] -= BigInt(r) * BigInt(w.columns[col][j]);
      }
      if (solve(col + 1, passes_left - r)) return true;
      if (r > 0) {
        for (int j = 0; j < w.alpha.dim(); ++j)
          need[j] += BigInt(r) * BigInt(w.columns[col][j]);
      }
      reps[col] = 0;
      if (budget_hit) return false;
    }
    return false;
  }
};

}  // namespace

SolveResult solve_schedule(const OmegaSet& omega_set, long long passes,
                           std::uint64_t node_budget) {
  if (passes < 1) throw std::invalid_argument("M must be >= 1");
  SolveResult result;
  if (!feasibility_precheck(omega_set.alpha, omega_set.n_photons, passes)) {
    result.status = SolveStatus::Infeasible;
    return result;
  }
  DfsSolver solver(omega_set, passes, node_budget,
                   schedule_target(omega_set.alpha, omega_set.n_photons, passes));
  const bool found = solver.solve(0, passes);
  result.nodes_visited = solver.nodes;
  if (found) {
    result.status = SolveStatus::Found;
    result.schedule = ProtocolSchedule{
        omega_set, solver.reps, passes,
        schedule_target(omega_set.alpha, omega_set.n_photons, passes)};
  } else if (solver.budget_hit) {
    result.status = SolveStatus::Inconclusive;
  } else {
    result.status = SolveStatus::Infeasible;
  }
  return result;
}

QfiMatrix schedule_qfi_analytic(const ProtocolSchedule& schedule) {
  const CoefficientVector& alpha = schedule.omega_set.alpha;
  const int d = alpha.dim();
  // s_i = sum over passes of |omega_i|, i.e. (|W| r)_i.
  std::vector<BigInt> s(d, BigInt(0));
  for (std::size_t n = 0; n < schedule.repetitions.size(); ++n) {
    if (schedule.repetitions[n] == 0) continue;
    for (int j = 0; j < d; ++j)
      s[j] += BigInt(schedule.repetitions[n]) *
              abs(BigInt(schedule.omega_set.columns[n][j]));
  }
  Eigen::MatrixXd f(d, d);
  for (int i = 0; i < d; ++i) {
    const double sign_i = alpha.in_pos_set(i) ? 1.0 : -1.0;
    for (int j = 0; j < d; ++j) {
      const double sign_j = alpha.in_pos_set(j) ? 1.0 : -1.0;
      f(i, j) = sign_i * sign_j * s[i].convert_to<double>() * s[j].convert_to<double>();
    }
  }
  return QfiMatrix(f);
}

double check_saturation_phase(const QfiMatrix& f, const CoefficientVector& alpha,
                              long long n_photons, long long passes) {
  if (f.dim() != alpha.dim())
    throw std::invalid_argument("check_saturation_phase: dimension mismatch");
  const double nm = static_cast<double>(n_photons) * static_cast<double>(passes);
  const double scale = nm * nm / alpha.pos_one_norm().to_double();
  double worst = 0.0;
  for (int j = 0; j < alpha.dim(); ++j) {
    double col_sum = 0.0;
    for (int i : alpha.pos_set()) col_sum += f(i, j);
    worst = std::max(worst, std::fabs(col_sum - scale * alpha.entry(j).to_double()));
  }
  return worst / (nm * nm);
}

double check_saturation_quad(const QfiMatrix& f, const CoefficientVector& alpha, double nbar,
                             long long passes) {
  if (f.dim() != alpha.dim())
    throw std::invalid_argument("check_saturation_quad: dimension mismatch");
  const std::vector<double> a = alpha.to_doubles();
  const double two_norm_sq = alpha.two_norm_squared().to_double();
  const double scale = 4.0 * static_cast<double>(passes) * static_cast<double>(passes) * nbar /
                       two_norm_sq;
  double num = 0.0, target_max = 0.0;
  for (int i = 0; i < f.dim(); ++i) {
    for (int j = 0; j < f.dim(); ++j) {
      const double target = scale * a[i] * a[j];
      num = std::max(num, std::fabs(f(i, j) - target));
      target_max = std::max(target_max, std::fabs(target));
    }
  }
  const double den = std::max({target_max, f.max_abs(), 1e-300});
  return num / den;
}

}  // namespace pnet
