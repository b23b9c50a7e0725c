#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pnet/coefficient_vector.hpp"
#include "pnet/qfi_matrix.hpp"

namespace pnet {

/// Occupation numbers over d sensing modes plus one trailing reference mode.
using Occupation = std::vector<int>;

using Amplitude = std::complex<double>;
using AmplitudeMap = std::map<Occupation, Amplitude>;

/// Sparse pure state on a fixed-total-photon-number sector of d+1 modes.
/// Immutable after construction; operations return new states.
class FockState {
 public:
  FockState(int total_photons, AmplitudeMap amplitudes);

  int total_photons() const { return total_photons_; }
  int num_modes() const { return num_modes_; }
  int sensing_modes() const { return num_modes_ - 1; }
  const AmplitudeMap& amplitudes() const { return amplitudes_; }

  double norm_squared() const;

 private:
  int total_photons_;
  int num_modes_;
  AmplitudeMap amplitudes_;
};

/// A two-branch probe family: integer weight vector omega and relative
/// phase phi. Valid against a coefficient vector alpha and photon number N
/// when ||omega||_{1,P} = N, ||omega||_{1,N} <= N and omega_j alpha_j >= 0
/// (with omega_j >= 0 on the P set so branch occupations are well formed).
struct ProbeFamilySpec {
  std::vector<long long> omega;
  double phi = 0.0;
};

void validate_probe_spec(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                         long long n_photons);

/// Branch occupation keys of the family state: branch 1 holds omega_j photons
/// on each P mode, branch 2 holds |omega_j| on each N mode plus the balance
/// N - ||omega||_{1,N} in the reference mode.
Occupation probe_branch1_key(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                             long long n_photons);
Occupation probe_branch2_key(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                             long long n_photons);

/// (|branch1> + e^{i phi} |branch2>) / sqrt(2).
FockState make_probe(const CoefficientVector& alpha, const ProbeFamilySpec& spec,
                     long long n_photons);

/// One pass of the encoding unitary exp(-i n . theta) on the sensing modes;
/// the reference mode accrues no phase.
FockState apply_encoding(const FockState& state, std::span<const double> theta);

/// Branch-preserving relabeling onto the next family: branch 1 support moves
/// to the new P occupations, branch 2 to the new N + reference occupations.
/// Amplitudes (hence the relative phase) are carried over exactly. Throws
/// "not an omega-family state" when the input is not recognizable.
FockState switch_family(const CoefficientVector& alpha, const FockState& state,
                        const ProbeFamilySpec& next, long long n_photons);

struct NumberMoments {
  Eigen::VectorXd mean;      // length d+1
  Eigen::MatrixXd covariance;  // (d+1) x (d+1)
};

NumberMoments number_moments(const FockState& state);

/// Static-probe QFI, F_ij = 4 M^2 Cov(n_i, n_j) on the sensing block.
QfiMatrix qfi_numeric_static(const FockState& state, long long passes);

/// Finite-difference oracle: estimates F from second derivatives of the
/// squared overlap |<psi(theta0)|psi(theta0 + delta)>|^2. Independent of the
/// covariance formulas it is used to validate. h should lie in [1e-5, 1e-2].
QfiMatrix qfi_fidelity_oracle(
    const std::function<FockState(std::span<const double>)>& protocol,
    std::span<const double> theta0, double h);

/// <a|b> over the sparse amplitude maps.
Amplitude fock_overlap(const FockState& a, const FockState& b);

}  // namespace pnet
