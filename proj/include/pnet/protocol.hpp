#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pnet/coefficient_vector.hpp"
#include "pnet/qfi_matrix.hpp"

namespace pnet {

/// Enumerated probe-family weight vectors: every column omega satisfies
/// ||omega||_{1,P} = N, ||omega||_{1,N} <= N and omega_j alpha_j >= 0,
/// with omega_j >= 0 on the P set. Columns are distinct, in descending
/// lexicographic order. When support_cap is set, every column's per-pass
/// entanglement is at most the cap.
struct OmegaSet {
  CoefficientVector alpha;
  long long n_photons = 0;
  std::vector<std::vector<long long>> columns;
  std::optional<long long> support_cap;
};

/// Number of modes of the family state |psi(omega; phi)> that are not
/// tensor factors: |supp(omega)|, plus one when the reference mode is
/// occupied in branch 2 (i.e. ||omega||_{1,N} < N).
long long entanglement_per_pass(std::span<const long long> omega,
                                const CoefficientVector& alpha, long long n_photons);

/// True iff N M alpha / ||alpha||_{1,P} is an integer vector (exact test).
bool feasibility_precheck(const CoefficientVector& alpha, long long n_photons, long long passes);

/// The right-hand side N M alpha / ||alpha||_{1,P}. Throws when the
/// precheck fails.
std::vector<BigInt> schedule_target(const CoefficientVector& alpha, long long n_photons,
                                    long long passes);

/// Enumerates the full omega set (optionally filtered by a per-pass
/// entanglement cap). Throws "omega set too large; supply support_cap" when
/// more than `limit` columns would be stored.
OmegaSet build_omega_set(const CoefficientVector& alpha, long long n_photons,
                         std::optional<long long> support_cap = std::nullopt,
                         std::size_t limit = 1000000);

/// A repetition vector over the omega-set columns: W r equals the target
/// exactly, ||r||_1 = M, r >= 0.
struct ProtocolSchedule {
  OmegaSet omega_set;
  std::vector<long long> repetitions;  // aligned with omega_set.columns
  long long passes = 0;                // M
  std::vector<BigInt> target;          // N M alpha / ||alpha||_{1,P}

  /// Column indices of the M passes in enumeration order.
  std::vector<int> pass_columns() const;
  /// W r (equals target for a valid schedule).
  std::vector<BigInt> weighted_sum() const;
};

enum class SolveStatus { Found, Infeasible, Inconclusive };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<ProtocolSchedule> schedule;
  std::uint64_t nodes_visited = 0;
};

/// Exact depth-first search over column multiplicities, columns in
/// enumeration order, higher multiplicities tried first; the first complete
/// solution is returned. An Infeasible verdict is definitive for the given
/// omega set (the search is exhaustive). Exceeding the node budget yields
/// Inconclusive instead.
SolveResult solve_schedule(const OmegaSet& omega_set, long long passes,
                           std::uint64_t node_budget = 100000000ULL);

/// Closed-form family QFI: F_ij = s_i s_j (sum_m |omega_i^(m)|)(sum_m
/// |omega_j^(m)|) with sign + inside P x P and N x N and - across.
QfiMatrix schedule_qfi_analytic(const ProtocolSchedule& schedule);

/// Sup-norm residual of sum_{i in P} F_ij - N^2 M^2 alpha_j / ||alpha||_{1,P},
/// normalized by (N M)^2. Zero certifies an optimal phase protocol.
double check_saturation_phase(const QfiMatrix& f, const CoefficientVector& alpha,
                              long long n_photons, long long passes);

/// Relative sup-norm residual of F - 4 M^2 Nbar alpha alpha^T / ||alpha||_2^2.
/// Approaches zero only asymptotically in Nbar.
double check_saturation_quad(const QfiMatrix& f, const CoefficientVector& alpha, double nbar,
                             long long passes);

}  // namespace pnet
