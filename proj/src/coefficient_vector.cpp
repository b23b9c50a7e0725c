#include "pnet/coefficient_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace pnet {

CoefficientVector CoefficientVector::from_rationals(std::vector<Rational> raw) {
  if (raw.empty()) throw std::invalid_argument("degenerate function");
  bool any_nonzero = false;
  for (const auto& r : raw) any_nonzero = any_nonzero || !r.is_zero();
  if (!any_nonzero) throw std::invalid_argument("degenerate function");

  Rational pos(0), neg(0);
  for (const auto& r : raw) {
    if (r >= Rational(0)) pos += r; else neg += -r;
  }

  CoefficientVector out;
  out.flipped_ = neg > pos;
  out.entries_ = std::move(raw);
  if (out.flipped_) {
    for (auto& r : out.entries_) r = -r;
  }
  for (int j = 0; j < out.dim(); ++j) {
    if (out.entries_[j] >= Rational(0)) out.pos_.push_back(j);
    else out.neg_.push_back(j);
  }
  return out;
}

Rational CoefficientVector::pos_one_norm() const {
  return restricted_one_norm(*this, pos_);
}

Rational CoefficientVector::neg_one_norm() const {
  return restricted_one_norm(*this, neg_);
}

Rational CoefficientVector::one_norm() const {
  Rational sum(0);
  for (const auto& r : entries_) sum += r.abs();
  return sum;
}

Rational CoefficientVector::two_norm_squared() const {
  Rational sum(0);
  for (const auto& r : entries_) sum += r * r;
  return sum;
}

int CoefficientVector::support_size() const {
  int n = 0;
  for (const auto& r : entries_) n += r.is_zero() ? 0 : 1;
  return n;
}

std::vector<double> CoefficientVector::to_doubles() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& r : entries_) out.push_back(r.to_double());
  return out;
}

Rational restricted_one_norm(const CoefficientVector& alpha, std::span<const int> s) {
  Rational sum(0);
  for (int j : s) {
    if (j < 0 || j >= alpha.dim())
      throw std::out_of_range("restricted_one_norm: index out of range");
    sum += alpha.entry(j).abs();
  }
  return sum;
}

CoefficientVector partition_signs(std::vector<Rational> raw) {
  return CoefficientVector::from_rationals(std::move(raw));
}

double schatten_p(std::span<const double> v, double p) {
  if (v.empty()) throw std::invalid_argument("empty input");
  if (!(p > 0.0)) throw std::invalid_argument("schatten_p: p must be positive");
  double sum = 0.0;
  for (double x : v) sum += std::pow(std::fabs(x), p);
  return std::pow(sum, 1.0 / p);
}

}  // namespace pnet
