#pragma once

#include <span>
#include <vector>

#include "pnet/fock.hpp"
#include "pnet/protocol.hpp"

namespace pnet {

/// Probe states before each of the M passes, built by make_probe for pass 1
/// and switch_family between passes (encoding at theta = 0 is the identity).
std::vector<FockState> simulate_pass_states(const ProtocolSchedule& schedule);

/// Full run: encode with theta on every pass and switch families per the
/// schedule; returns the final two-branch state.
FockState simulate_schedule(const ProtocolSchedule& schedule, std::span<const double> theta);

/// arg(a2 / a1) of the final state's branch amplitudes, in (-pi, pi].
double simulated_interbranch_phase(const ProtocolSchedule& schedule,
                                   std::span<const double> theta);

/// (W r) . theta, with W r carried exactly in integers before the cast.
double relative_phase(const ProtocolSchedule& schedule, std::span<const double> theta);

/// Pass-summed covariance QFI, F_ij = 4 sum_{l,m} Cov(n_i(l), n_j(m)),
/// evaluated from the simulated pass states with the branch transport the
/// control unitaries define. Matches schedule_qfi_analytic on valid
/// schedules.
QfiMatrix qfi_numeric_schedule(const ProtocolSchedule& schedule);

}  // namespace pnet
