#include "pnet/fock.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pnet {

namespace {

constexpr double kNormTol = 1e-12;

int checked_occupation(long long v) {
  if (v < 0) throw std::invalid_argument("invalid omega");
  return static_cast<int>(v);
}

}  // namespace

FockState::FockState(int total_photons, AmplitudeMap amplitudes)
    : total_photons_(total_photons), amplitudes_(std::move(amplitudes)) {
  if (total_photons_ < 1) throw std::invalid_argument("FockState: need at least one photon");
  if (amplitudes_.empty()) throw std::invalid_argument("FockState: empty amplitude map");
  num_modes_ = static_cast<int>(amplitudes_.begin()->first.size());
  if (num_modes_ < 2) throw std::invalid_argument("FockState: need one sensing + one reference mode");
  for (const auto& [occ, amp] : amplitudes_) {
    if (static_cast<int>(occ.size()) != num_modes_)
      throw std::invalid_argument("FockState: ragged occupation keys");
    int total = 0;
    for (int c : occ) {
      if (c < 0) throw std::invalid_argument("FockState: negative occupation");
      total += c;
    }
    if (total != total_photons_)
      throw std::invalid_argument("FockState: photon number mismatch across keys");
    (void)amp;
  }
  if (std::fabs(norm_squared() - 1.0) > kNormTol)
    throw std::invalid_argument("FockState: not normalized");
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& [occ, amp] : amplitudes_) s += std::norm(amp);
  return s;
}

void validate_probe_spec(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                         long long n_photons) {
  if (static_cast<int>(spec.omega.size()) != alpha.dim())
    throw std::invalid_argument("invalid omega");
  if (n_photons < 1) throw std::invalid_argument("invalid omega");
  long long pos_norm = 0, neg_norm = 0;
  for (int j = 0; j < alpha.dim(); ++j) {
    const long long w = spec.omega[j];
    const int sign = alpha.entry(j).sign();
    if (sign > 0 && w < 0) throw std::invalid_argument("invalid omega");
    if (sign < 0 && w > 0) throw std::invalid_argument("invalid omega");
    if (sign == 0 && w < 0) throw std::invalid_argument("invalid omega");
    if (alpha.in_pos_set(j)) pos_norm += std::llabs(w); else neg_norm += std::llabs(w);
  }
  if (pos_norm != n_photons || neg_norm > n_photons)
    throw std::invalid_argument("invalid omega");
}

Occupation probe_branch1_key(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                             long long n_photons) {
  validate_probe_spec(alpha, spec, n_photons);
  Occupation key(alpha.dim() + 1, 0);
  for (int j : alpha.pos_set()) key[j] = checked_occupation(spec.omega[j]);
  return key;
}

Occupation probe_branch2_key(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                             long long n_photons) {
  validate_probe_spec(alpha, spec, n_photons);
  Occupation key(alpha.dim() + 1, 0);
  long long neg = 0;
  for (int j : alpha.neg_set()) {
    key[j] = checked_occupation(-spec.omega[j]);
    neg += -spec.omega[j];
  }
  key[alpha.dim()] = static_cast<int>(n_photons - neg);
  return key;
}

FockState make_probe(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                     long long n_photons) {
  const Occupation b1 = probe_branch1_key(alpha, spec, n_photons);
  const Occupation b2 = probe_branch2_key(alpha, spec, n_photons);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  AmplitudeMap amps;
  amps[b1] = Amplitude(inv_sqrt2, 0.0);
  amps[b2] = std::polar(inv_sqrt2, spec.phi);
  return FockState(static_cast<int>(n_photons), std::move(amps));
}

FockState apply_encoding(const FockState& state, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != state.sensing_modes())
    throw std::invalid_argument("apply_encoding: theta length must match sensing modes");
  AmplitudeMap amps;
  for (const auto& [occ, amp] : state.amplitudes()) {
    double phase = 0.0;
    for (int j = 0; j < state.sensing_modes(); ++j) phase += occ[j] * theta[j];
    amps[occ] = amp * std::polar(1.0, -phase);
  }
  return FockState(state.total_photons(), std::move(amps));
}

FockState switch_family(const CoefficientVector& alpha, const FockState& state,
                        const ProbeFamilySpec& next, long long n_photons) {
  if (state.amplitudes().size() != 2 || state.total_photons() != n_photons ||
      state.sensing_modes() != alpha.dim())
    throw std::invalid_argument("not an omega-family state");

  // Branch 1 carries all photons on the P modes; branch 2 none. Both
  // branches carry equal weight 1/2.
  const Occupation* key1 = nullptr;
  const Occupation* key2 = nullptr;
  for (const auto& [occ, amp] : state.amplitudes()) {
    if (std::fabs(std::norm(amp) - 0.5) > 1e-9)
      throw std::invalid_argument("not an omega-family state");
    long long pos_count = 0;
    for (int j : alpha.pos_set()) pos_count += occ[j];
    if (pos_count == n_photons && occ[alpha.dim()] == 0) {
      bool clean = true;
      for (int j : alpha.neg_set()) clean = clean && occ[j] == 0;
      if (clean && key1 == nullptr) { key1 = &occ; continue; }
    }
    if (pos_count == 0 && key2 == nullptr) { key2 = &occ; continue; }
    throw std::invalid_argument("not an omega-family state");
  }
  if (key1 == nullptr || key2 == nullptr)
    throw std::invalid_argument("not an omega-family state");

  const Amplitude a1 = state.amplitudes().at(*key1);
  const Amplitude a2 = state.amplitudes().at(*key2);
  AmplitudeMap amps;
  amps[probe_branch1_key(alpha, next, n_photons)] = a1;
  amps[probe_branch2_key(alpha, next, n_photons)] = a2;
  return FockState(state.total_photons(), std::move(amps));
}

NumberMoments number_moments(const FockState& state) {
  const int m = state.num_modes();
  NumberMoments out;
  out.mean = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [occ, amp] : state.amplitudes()) {
    const double p = std::norm(amp);
    for (int i = 0; i < m; ++i) {
      out.mean[i] += p * occ[i];
      for (int j = 0; j < m; ++j) second(i, j) += p * occ[i] * occ[j];
    }
  }
  out.covariance = second - out.mean * out.mean.transpose();
  return out;
}

QfiMatrix qfi_numeric_static(const FockState& state, long long passes) {
  if (passes < 1) throw std::invalid_argument("passes must be >= 1");
  const NumberMoments mom = number_moments(state);
  const int d = state.sensing_modes();
  const double scale = 4.0 * static_cast<double>(passes) * static_cast<double>(passes);
  return QfiMatrix(scale * mom.covariance.topLeftCorner(d, d));
}

Amplitude fock_overlap(const FockState& a, const FockState& b) {
  Amplitude s(0.0, 0.0);
  const auto& small = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
  const auto& large = a.amplitudes().size() <= b.amplitudes().size() ? b : a;
  for (const auto& [occ, amp] : small.amplitudes()) {
    const auto it = large.amplitudes().find(occ);
    if (it == large.amplitudes().end()) continue;
    // <a|b> regardless of which map was iterated.
    const Amplitude amp_a = (&small == &a) ? amp : it->second;
    const Amplitude amp_b = (&small == &a) ? it->second : amp;
    s += std::conj(amp_a) * amp_b;
  }
  return s;
}

QfiMatrix qfi_fidelity_oracle(
    const std::function<FockState(std::span<const double>)>& protocol,
    std::span<const double> theta0, double h) {
  if (h < 1e-5 || h > 1e-2)
    throw std::invalid_argument("qfi_fidelity_oracle: h outside [1e-5, 1e-2]");
  const int d = static_cast<int>(theta0.size());
  const FockState base = protocol(theta0);

  auto overlap_sq = [&](const std::vector<double>& delta) {
    std::vector<double> th(theta0.begin(), theta0.end());
    for (int j = 0; j < d; ++j) th[j] += delta[j];
    return std::norm(fock_overlap(base, protocol(th)));
  };

  // |<psi(t0)|psi(t0+delta)>|^2 = 1 - delta^T F delta / 4 + O(delta^3),
  // so F_ij = -2 d^2 g / d delta_i d delta_j at delta = 0.
  Eigen::MatrixXd f(d, d);
  std::vector<double> delta(d, 0.0);
  for (int i = 0; i < d; ++i) {
    delta.assign(d, 0.0);
    delta[i] = h;
    const double gp = overlap_sq(delta);
    delta[i] = -h;
    const double gm = overlap_sq(delta);
    f(i, i) = -2.0 * (gp - 2.0 + gm) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      auto at = [&](double di, double dj) {
        delta.assign(d, 0.0);
        delta[i] = di;
        delta[j] = dj;
        return overlap_sq(delta);
      };
      const double mixed =
          (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
      f(i, j) = f(j, i) = -2.0 * mixed;
    }
  }
  // Finite differencing introduces O(1e-9) noise; clip the tiny negative
  // eigenvalues it can leave before handing to the validating constructor.
  Eigen::MatrixXd sym = (f + f.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < 0.0 && ev[i] > -1e-6 * scale) ev[i] = 0.0;
  }
  sym = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return QfiMatrix((sym + sym.transpose()) / 2.0);
}

}  // namespace pnet
