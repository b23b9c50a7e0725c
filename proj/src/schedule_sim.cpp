#include "pnet/schedule_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace pnet {

namespace {

ProbeFamilySpec column_spec(const ProtocolSchedule& schedule, int column, double phi = 0.0) {
  return ProbeFamilySpec{schedule.omega_set.columns.at(column), phi};
}

void require_valid(const ProtocolSchedule& schedule) {
  if (schedule.passes < 1) throw std::invalid_argument("schedule: M must be >= 1");
  long long total = 0;
  for (long long r : schedule.repetitions) {
    if (r < 0) throw std::invalid_argument("schedule: negative repetition");
    total += r;
  }
  if (total != schedule.passes)
    throw std::invalid_argument("schedule: repetitions must sum to M");
  const auto wr = schedule.weighted_sum();
  if (wr != schedule.target)
    throw std::invalid_argument("schedule: W r does not match the target");
}

}  // namespace

std::vector<FockState> simulate_pass_states(const ProtocolSchedule& schedule) {
  require_valid(schedule);
  const auto& alpha = schedule.omega_set.alpha;
  const long long n = schedule.omega_set.n_photons;
  const auto seq = schedule.pass_columns();

  std::vector<FockState> states;
  states.reserve(seq.size());
  states.push_back(make_probe(alpha, column_spec(schedule, seq[0]), n));
  for (std::size_t m = 1; m < seq.size(); ++m) {
    const FockState& prev = states.back();
    if (seq[m] == seq[m - 1]) {
      states.push_back(prev);
    } else {
      states.push_back(switch_family(alpha, prev, column_spec(schedule, seq[m]), n));
    }
  }
  return states;
}

FockState simulate_schedule(const ProtocolSchedule& schedule, std::span<const double> theta) {
  require_valid(schedule);
  const auto& alpha = schedule.omega_set.alpha;
  const long long n = schedule.omega_set.n_photons;
  const auto seq = schedule.pass_columns();

  FockState state = make_probe(alpha, column_spec(schedule, seq[0]), n);
  for (std::size_t m = 0; m < seq.size(); ++m) {
    state = apply_encoding(state, theta);
    if (m + 1 < seq.size() && seq[m + 1] != seq[m]) {
      state = switch_family(alpha, state, column_spec(schedule, seq[m + 1]), n);
    }
  }
  return state;
}

double simulated_interbranch_phase(const ProtocolSchedule& schedule,
                                   std::span<const double> theta) {
  const FockState final_state = simulate_schedule(schedule, theta);
  const auto& alpha = schedule.omega_set.alpha;
  Amplitude a1(0.0, 0.0), a2(0.0, 0.0);
  for (const auto& [occ, amp] : final_state.amplitudes()) {
    long long pos_count = 0;
    for (int j : alpha.pos_set()) pos_count += occ[j];
    if (pos_count > 0) a1 = amp; else a2 = amp;
  }
  return std::arg(a2 * std::conj(a1));
}

double relative_phase(const ProtocolSchedule& schedule, std::span<const double> theta) {
  require_valid(schedule);
  if (static_cast<int>(theta.size()) != schedule.omega_set.alpha.dim())
    throw std::invalid_argument("relative_phase: theta dimension mismatch");
  double phase = 0.0;
  for (int j = 0; j < schedule.omega_set.alpha.dim(); ++j)
    phase += schedule.target[j].convert_to<double>() * theta[j];
  return phase;
}

QfiMatrix qfi_numeric_schedule(const ProtocolSchedule& schedule) {
  const auto states = simulate_pass_states(schedule);
  const auto& alpha = schedule.omega_set.alpha;
  const int d = alpha.dim();
  const long long m_total = schedule.passes;

  // Branch keys and amplitudes per pass; the controls transport branch k of
  // pass l to branch k of pass m, so cross-pass matrix elements reduce to
  // per-branch products.
  struct BranchView {
    Occupation key[2];
    Amplitude amp[2];
  };
  std::vector<BranchView> views;
  views.reserve(states.size());
  for (const auto& st : states) {
    BranchView v;
    int found = 0;
    for (const auto& [occ, amp] : st.amplitudes()) {
      long long pos_count = 0;
      for (int j : alpha.pos_set()) pos_count += occ[j];
      const int slot = pos_count > 0 ? 0 : 1;
      v.key[slot] = occ;
      v.amp[slot] = amp;
      ++found;
    }
    if (found != 2) throw std::logic_error("qfi_numeric_schedule: bad pass state");
    views.push_back(std::move(v));
  }

  // <n_i(l)> per pass, exact from the simulated states.
  Eigen::MatrixXd mean(m_total, d);
  for (long long l = 0; l < m_total; ++l) {
    const NumberMoments mom = number_moments(states[l]);
    for (int i = 0; i < d; ++i) mean(l, i) = mom.mean[i];
  }

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(d, d);
  for (long long l = 0; l < m_total; ++l) {
    for (long long m = 0; m < m_total; ++m) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          // <n_i(l) n_j(m)> = sum_b conj(a_b(l)) a_b(m) n_i(key_b(l)) n_j(key_b(m))
          // via the branch transport; amplitudes are real 1/sqrt(2) here.
          double second = 0.0;
          for (int b = 0; b < 2; ++b) {
            second += (std::conj(views[l].amp[b]) * views[m].amp[b]).real() *
                      views[l].key[b][i] * views[m].key[b][j];
          }
          f(i, j) += 4.0 * (second - mean(l, i) * mean(m, j));
        }
      }
    }
  }
  return QfiMatrix((f + f.transpose()) / 2.0);
}

}  // namespace pnet
