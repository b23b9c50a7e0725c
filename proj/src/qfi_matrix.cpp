#include "pnet/qfi_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace pnet {

QfiMatrix::QfiMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
    throw std::invalid_argument("QfiMatrix: must be square and nonempty");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw std::invalid_argument("QfiMatrix: not symmetric");
  entries_ = ((entries_ + entries_.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9 * scale)
    throw std::invalid_argument("QfiMatrix: not positive semidefinite");
}

double QfiMatrix::relative_deviation(const QfiMatrix& a, const QfiMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("QfiMatrix: dimension mismatch");
  const double num = (a.entries_ - b.entries_).cwiseAbs().maxCoeff();
  const double den = std::max({a.max_abs(), b.max_abs(), 1e-300});
  return num / den;
}

}  // namespace pnet
