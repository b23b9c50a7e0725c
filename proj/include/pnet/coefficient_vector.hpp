#pragma once

#include <span>
#include <vector>

#include "pnet/rational.hpp"

namespace pnet {

/// The rational coefficient vector of the target function q = alpha . theta,
/// canonicalized so that the positive-part one-norm dominates the negative
/// part. Indices are 0-based. Entries with alpha_j >= 0 belong to the P set,
/// entries with alpha_j < 0 to the N set.
class CoefficientVector {
 public:
  /// Canonicalizes a raw coefficient sequence: flips the overall sign when
  /// the negative one-norm exceeds the positive one (flag recorded), and
  /// partitions indices by sign. Throws "degenerate function" when all
  /// entries are zero, and on empty input.
  static CoefficientVector from_rationals(std::vector<Rational> raw);

  int dim() const { return static_cast<int>(entries_.size()); }
  const Rational& entry(int j) const { return entries_.at(j); }
  const std::vector<Rational>& entries() const { return entries_; }

  const std::vector<int>& pos_set() const { return pos_; }
  const std::vector<int>& neg_set() const { return neg_; }
  bool in_pos_set(int j) const { return entry(j) >= Rational(0); }
  bool flipped() const { return flipped_; }

  Rational pos_one_norm() const;   // ||alpha||_{1,P}
  Rational neg_one_norm() const;   // ||alpha||_{1,N}
  Rational one_norm() const;       // ||alpha||_1
  Rational two_norm_squared() const;
  int support_size() const;        // ||alpha||_0, exact nonzero count

  std::vector<double> to_doubles() const;

  friend bool operator==(const CoefficientVector& a, const CoefficientVector& b) {
    return a.entries_ == b.entries_ && a.flipped_ == b.flipped_;
  }

 private:
  std::vector<Rational> entries_;
  std::vector<int> pos_;
  std::vector<int> neg_;
  bool flipped_ = false;
};

/// Sum of |alpha_i| over the index set S. Empty S gives 0; out-of-range
/// indices throw.
Rational restricted_one_norm(const CoefficientVector& alpha, std::span<const int> s);

/// Canonicalizing constructor, exposed under the name used by callers.
CoefficientVector partition_signs(std::vector<Rational> raw);

/// (sum_i |v_i|^p)^{1/p}. Requires p > 0; throws "empty input" on an empty
/// vector. A norm for p >= 1; for p in (0,1) a convenient shorthand.
double schatten_p(std::span<const double> v, double p);

}  // namespace pnet
