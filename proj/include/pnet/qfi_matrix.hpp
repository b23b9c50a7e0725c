#pragma once

#include <Eigen/Dense>

namespace pnet {

/// Real symmetric PSD quantum Fisher information matrix for the d sensing
/// parameters. Symmetry is required to 1e-12 relative; eigenvalues may dip
/// to -1e-9 * ||F|| before construction fails.
class QfiMatrix {
 public:
  explicit QfiMatrix(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

  /// Sup-norm difference scaled by the larger of the two matrices' sup
  /// norms (or 1 when both vanish).
  static double relative_deviation(const QfiMatrix& a, const QfiMatrix& b);

 private:
  Eigen::MatrixXd entries_;
};

}  // namespace pnet
