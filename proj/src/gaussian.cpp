#include "pnet/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace pnet {

namespace {

Eigen::MatrixXd orthogonal_with_first_column(const Eigen::VectorXd& w) {
  const int d = static_cast<int>(w.size());
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
  e1[0] = 1.0;
  const Eigen::VectorXd u = e1 - w;
  const double uu = u.squaredNorm();
  if (uu < 1e-24) return Eigen::MatrixXd::Identity(d, d);
  // Householder reflection mapping e1 to w; symmetric orthogonal.
  return Eigen::MatrixXd::Identity(d, d) - (2.0 / uu) * u * u.transpose();
}

}  // namespace

void validate_gaussian(const GaussianState& state) {
  const int n = 2 * state.num_modes;
  if (state.mean.size() != n || state.cov.rows() != n || state.cov.cols() != n)
    throw std::invalid_argument("GaussianState: shape mismatch");
  const double scale = std::max(1.0, state.cov.cwiseAbs().maxCoeff());
  if ((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("GaussianState: covariance not symmetric");
  for (int m = 0; m < state.num_modes; ++m) {
    if (state.var_x(m) * state.var_p(m) < 1.0 / 16.0 - 1e-12 * scale * scale)
      throw std::invalid_argument("GaussianState: uncertainty violated");
  }
}

bool is_pure(const GaussianState& state, double tol) {
  const double det = (4.0 * state.cov).determinant();
  return std::fabs(det - 1.0) <= tol;
}

double mean_photon_number(const GaussianState& state) {
  double total = 0.0;
  for (int m = 0; m < state.num_modes; ++m) {
    total += state.var_x(m) + state.var_p(m);
    total += state.mean[state.x_index(m)] * state.mean[state.x_index(m)];
    total += state.mean[state.p_index(m)] * state.mean[state.p_index(m)];
  }
  return total - 0.5 * state.num_modes;
}

GaussianState squeezed_vacuum(double nbar) {
  if (nbar < 0.0) throw std::invalid_argument("squeezed_vacuum: Nbar must be nonnegative");
  const double s = std::sqrt(nbar) + std::sqrt(nbar + 1.0);
  const double var_p = s * s / 4.0;
  GaussianState state;
  state.num_modes = 1;
  state.mean = Eigen::VectorXd::Zero(2);
  state.cov = Eigen::MatrixXd::Zero(2, 2);
  state.cov(0, 0) = 1.0 / (16.0 * var_p);  // x squeezed
  state.cov(1, 1) = var_p;                 // p antisqueezed
  validate_gaussian(state);
  return state;
}

GaussianState distribute(const GaussianState& single_mode, const Eigen::VectorXd& w) {
  if (single_mode.num_modes != 1)
    throw std::invalid_argument("distribute: input must be single mode");
  if (std::fabs(w.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("distribute: weights must be a unit vector");
  const int d = static_cast<int>(w.size());
  const Eigen::MatrixXd r = orthogonal_with_first_column(w);

  // The network acts identically on the x and p blocks (real orthogonal
  // point transformation); modes 2..d enter in vacuum.
  Eigen::MatrixXd cov_x = Eigen::MatrixXd::Identity(d, d) * 0.25;
  Eigen::MatrixXd cov_p = Eigen::MatrixXd::Identity(d, d) * 0.25;
  cov_x(0, 0) = single_mode.var_x(0);
  cov_p(0, 0) = single_mode.var_p(0);
  cov_x = (r * cov_x * r.transpose()).eval();
  cov_p = (r * cov_p * r.transpose()).eval();

  Eigen::VectorXd mean_x = r.col(0) * single_mode.mean[0];
  Eigen::VectorXd mean_p = r.col(0) * single_mode.mean[1];

  GaussianState out;
  out.num_modes = d;
  out.mean = Eigen::VectorXd::Zero(2 * d);
  out.cov = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    out.mean[out.x_index(i)] = mean_x[i];
    out.mean[out.p_index(i)] = mean_p[i];
    for (int j = 0; j < d; ++j) {
      out.cov(out.x_index(i), out.x_index(j)) = cov_x(i, j);
      out.cov(out.p_index(i), out.p_index(j)) = cov_p(i, j);
    }
  }
  validate_gaussian(out);
  return out;
}

GaussianState apply_displacement_encoding(const GaussianState& state,
                                          std::span<const double> theta, long long passes) {
  if (static_cast<int>(theta.size()) != state.num_modes)
    throw std::invalid_argument("apply_displacement_encoding: theta length mismatch");
  if (passes < 1) throw std::invalid_argument("passes must be >= 1");
  GaussianState out = state;
  // exp(-i theta p) shifts x by -theta/2 under [x, p] = i/2.
  for (int m = 0; m < state.num_modes; ++m)
    out.mean[out.x_index(m)] -= 0.5 * static_cast<double>(passes) * theta[m];
  return out;
}

double homodyne_sample(const GaussianState& state, Quadrature quad, RngStream& rng) {
  const int idx = quad.kind == Quadrature::X ? state.x_index(quad.mode)
                                             : state.p_index(quad.mode);
  return state.mean[idx] + std::sqrt(state.cov(idx, idx)) * rng.normal();
}

Eigen::VectorXd sample_x_vector(const GaussianState& state, RngStream& rng) {
  const int d = state.num_modes;
  Eigen::MatrixXd cov_x(d, d);
  Eigen::VectorXd mean_x(d);
  for (int i = 0; i < d; ++i) {
    mean_x[i] = state.mean[state.x_index(i)];
    for (int j = 0; j < d; ++j) cov_x(i, j) = state.cov(state.x_index(i), state.x_index(j));
  }
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(cov_x).matrixL();
  Eigen::VectorXd z(d);
  for (int i = 0; i < d; ++i) z[i] = rng.normal();
  return mean_x + l * z;
}

DisplacementProtocol DisplacementProtocol::make(const CoefficientVector& alpha, double nbar,
                                                long long passes) {
  if (nbar < 0.0) throw std::invalid_argument("DisplacementProtocol: Nbar must be nonnegative");
  if (passes < 1) throw std::invalid_argument("DisplacementProtocol: passes must be >= 1");
  DisplacementProtocol p;
  p.alpha = alpha;
  p.nbar = nbar;
  p.passes = passes;
  const std::vector<double> a = alpha.to_doubles();
  p.weights = Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
  p.weights /= p.weights.norm();
  return p;
}

QfiMatrix gaussian_qfi(const DisplacementProtocol& protocol) {
  const GaussianState probe = distribute(squeezed_vacuum(protocol.nbar), protocol.weights);
  const int d = probe.num_modes;
  Eigen::MatrixXd cov_p(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      cov_p(i, j) = probe.cov(probe.p_index(i), probe.p_index(j));
  const double m2 = static_cast<double>(protocol.passes) * static_cast<double>(protocol.passes);
  return QfiMatrix(4.0 * m2 * cov_p);
}

namespace {

McEstimate run_x_homodyne_estimator(const GaussianState& encoded,
                                    const Eigen::VectorXd& probe_mean_x,
                                    const std::vector<double>& alpha, double passes,
                                    double q_true, long long shots, RngStream& rng) {
  if (shots < 2) throw std::invalid_argument("shots must be >= 2");
  const int d = encoded.num_modes;
  Eigen::MatrixXd cov_x(d, d);
  Eigen::VectorXd mean_x(d);
  for (int i = 0; i < d; ++i) {
    mean_x[i] = encoded.mean[encoded.x_index(i)];
    for (int j = 0; j < d; ++j)
      cov_x(i, j) = encoded.cov(encoded.x_index(i), encoded.x_index(j));
  }
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(cov_x).matrixL();

  Welford q_acc, err2_acc;
  Eigen::VectorXd z(d);
  for (long long s = 0; s < shots; ++s) {
    for (int i = 0; i < d; ++i) z[i] = rng.normal();
    const Eigen::VectorXd x = mean_x + l * z;
    double q_shot = 0.0;
    for (int j = 0; j < d; ++j) q_shot += alpha[j] * (x[j] - probe_mean_x[j]);
    q_shot *= -2.0 / passes;
    q_acc.add(q_shot);
    const double e = q_shot - q_true;
    err2_acc.add(e * e);
  }
  McEstimate out;
  out.q_hat = q_acc.mean();
  out.mse = err2_acc.mean();
  out.std_error = err2_acc.std_error_of_mean();
  out.shots = shots;
  return out;
}

}  // namespace

McEstimate estimate_q_displacement(const DisplacementProtocol& protocol,
                                   std::span<const double> theta_true, long long shots,
                                   RngStream& rng, const Eigen::VectorXd* probe_offset) {
  GaussianState probe = distribute(squeezed_vacuum(protocol.nbar), protocol.weights);
  if (probe_offset != nullptr) {
    if (probe_offset->size() != probe.mean.size())
      throw std::invalid_argument("estimate_q_displacement: offset shape mismatch");
    probe.mean += *probe_offset;
  }
  Eigen::VectorXd probe_mean_x(probe.num_modes);
  for (int i = 0; i < probe.num_modes; ++i) probe_mean_x[i] = probe.mean[probe.x_index(i)];

  const GaussianState encoded =
      apply_displacement_encoding(probe, theta_true, protocol.passes);
  const std::vector<double> a = protocol.alpha.to_doubles();
  double q_true = 0.0;
  for (int j = 0; j < protocol.alpha.dim(); ++j) q_true += a[j] * theta_true[j];
  return run_x_homodyne_estimator(encoded, probe_mean_x, a,
                                  static_cast<double>(protocol.passes), q_true, shots, rng);
}

McEstimate separable_displacement_protocol(const CoefficientVector& alpha, double nbar,
                                           long long passes, std::span<const double> theta_true,
                                           long long shots, RngStream& rng) {
  if (shots < 2) throw std::invalid_argument("shots must be >= 2");
  if (passes < 1) throw std::invalid_argument("passes must be >= 1");
  const int d = alpha.dim();
  if (static_cast<int>(theta_true.size()) != d)
    throw std::invalid_argument("separable_displacement_protocol: theta length mismatch");

  const std::vector<double> a = alpha.to_doubles();
  const double one_norm = alpha.one_norm().to_double();
  std::vector<double> sigma(d, 0.0);
  double q_true = 0.0;
  for (int j = 0; j < d; ++j) {
    q_true += a[j] * theta_true[j];
    if (a[j] == 0.0) continue;  // zero-coefficient modes get no photons
    const double nbar_j = std::fabs(a[j]) / one_norm * nbar;
    const GaussianState mode = squeezed_vacuum(nbar_j);
    sigma[j] = std::sqrt(mode.var_x(0));
  }

  Welford q_acc, err2_acc;
  for (long long s = 0; s < shots; ++s) {
    double q_shot = 0.0;
    for (int j = 0; j < d; ++j) {
      if (a[j] == 0.0) continue;
      const double x = -0.5 * static_cast<double>(passes) * theta_true[j] +
                       sigma[j] * rng.normal();
      q_shot += a[j] * x;
    }
    q_shot *= -2.0 / static_cast<double>(passes);
    q_acc.add(q_shot);
    const double e = q_shot - q_true;
    err2_acc.add(e * e);
  }
  McEstimate out;
  out.q_hat = q_acc.mean();
  out.mse = err2_acc.mean();
  out.std_error = err2_acc.std_error_of_mean();
  out.shots = shots;
  return out;
}

}  // namespace pnet
