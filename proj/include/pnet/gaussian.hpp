#pragma once

#include <span>

#include <Eigen/Dense>

#include "pnet/coefficient_vector.hpp"
#include "pnet/qfi_matrix.hpp"
#include "pnet/rng.hpp"

namespace pnet {

/// Gaussian state of d' optical modes, first moments plus covariance in the
/// ordering (x1, p1, x2, p2, ...). Conventions: x = (a^dag + a)/2,
/// p = i(a^dag - a)/2, so [x, p] = i/2, vacuum variances are 1/4 and the
/// uncertainty product floor is 1/16.
struct GaussianState {
  int num_modes = 0;
  Eigen::VectorXd mean;  // length 2 d'
  Eigen::MatrixXd cov;   // 2 d' x 2 d'

  int x_index(int mode) const { return 2 * mode; }
  int p_index(int mode) const { return 2 * mode + 1; }
  double var_x(int mode) const { return cov(x_index(mode), x_index(mode)); }
  double var_p(int mode) const { return cov(p_index(mode), p_index(mode)); }
};

/// Checks symmetry, per-mode uncertainty Var(x)Var(p) >= 1/16, within
/// tolerance. Throws on violation.
void validate_gaussian(const GaussianState& state);

/// det(4 cov) == 1 within tolerance, the purity condition in this
/// convention.
bool is_pure(const GaussianState& state, double tol = 1e-9);

/// Mean photon number sum_j (Var(x_j) + Var(p_j) + <x_j>^2 + <p_j>^2) - d/2.
double mean_photon_number(const GaussianState& state);

/// Single-mode squeezed vacuum with mean photon number nbar:
/// Var(p) = (sqrt(nbar) + sqrt(nbar+1))^2 / 4, Var(x) = 1/(16 Var(p)).
GaussianState squeezed_vacuum(double nbar);

/// Spreads a single-mode state across d modes through an orthogonal mixing
/// network whose first column is the unit vector w: mode j's quadratures
/// carry coefficient w_j of the input mode. Photon number is preserved.
GaussianState distribute(const GaussianState& single_mode, const Eigen::VectorXd& w);

/// M passes of exp(-i theta_j p_j) per sensing mode: mean x_j shifts by
/// -M theta_j / 2; the covariance is untouched.
GaussianState apply_displacement_encoding(const GaussianState& state,
                                          std::span<const double> theta, long long passes);

struct Quadrature {
  int mode = 0;
  enum Kind { X, P } kind = X;
};

/// One homodyne outcome: a draw from the selected quadrature's normal
/// marginal.
double homodyne_sample(const GaussianState& state, Quadrature quad, RngStream& rng);

/// Joint x-homodyne outcome across all modes (the x quadratures commute, so
/// they are measured simultaneously); Cholesky-correlated draw.
Eigen::VectorXd sample_x_vector(const GaussianState& state, RngStream& rng);

/// Entangled displacement-sensing protocol: squeezed vacuum of nbar photons
/// distributed with weights w = alpha / ||alpha||_2.
struct DisplacementProtocol {
  CoefficientVector alpha;
  double nbar = 0.0;
  long long passes = 1;
  Eigen::VectorXd weights;  // unit vector alpha / ||alpha||_2

  static DisplacementProtocol make(const CoefficientVector& alpha, double nbar,
                                   long long passes);
};

/// 4 M^2 times the p-quadrature covariance block of the distributed probe.
QfiMatrix gaussian_qfi(const DisplacementProtocol& protocol);

struct McEstimate {
  double q_hat = 0.0;        // mean of the per-shot estimates
  double mse = 0.0;          // mean squared per-shot error
  double std_error = 0.0;    // standard error of the mse estimate
  long long shots = 0;
};

/// Monte-Carlo run of the entangled protocol. Per shot, all x quadratures
/// are homodyned jointly and combined as q_hat = -(2/M) sum_j alpha_j
/// (x_j - x0_j), which is unbiased for q = alpha . theta. An optional probe
/// displacement (applied before encoding) exercises displacement invariance.
McEstimate estimate_q_displacement(const DisplacementProtocol& protocol,
                                   std::span<const double> theta_true, long long shots,
                                   RngStream& rng,
                                   const Eigen::VectorXd* probe_offset = nullptr);

/// Separable benchmark: one squeezed mode per coefficient with the
/// |alpha_j|/||alpha||_1 photon split, independent homodynes, classical
/// combination.
McEstimate separable_displacement_protocol(const CoefficientVector& alpha, double nbar,
                                           long long passes, std::span<const double> theta_true,
                                           long long shots, RngStream& rng);

}  // namespace pnet
