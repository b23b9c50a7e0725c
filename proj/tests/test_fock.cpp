#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "helpers.hpp"
#include "pnet/fock.hpp"
#include "pnet/io.hpp"
#include "pnet/protocol.hpp"
#include "pnet/schedule_sim.hpp"

using namespace pnet;
using pnet::testing::coeffs;

namespace {

FockState noon_state(int n) {
  // (|N,0> + |0,N>)/sqrt(2): one sensing mode plus the reference.
  return make_probe(coeffs({"1"}), ProbeFamilySpec{{n}, 0.0}, n);
}

ProtocolSchedule solved_schedule(const CoefficientVector& alpha, long long n, long long m,
                                 std::optional<long long> cap = std::nullopt) {
  const auto w = build_omega_set(alpha, n, cap);
  const auto result = solve_schedule(w, m);
  REQUIRE(result.status == SolveStatus::Found);
  return *result.schedule;
}

}  // namespace

TEST_CASE("make_probe examples") {
  {
    const FockState s = noon_state(2);
    REQUIRE(s.amplitudes().size() == 2);
    CHECK(s.amplitudes().at({2, 0}) == Amplitude(1.0 / std::sqrt(2.0), 0.0));
    CHECK(s.amplitudes().at({0, 2}) == Amplitude(1.0 / std::sqrt(2.0), 0.0));
  }
  {
    // Balanced mixed-sign probe: the reference stays empty in both branches.
    const auto alpha = coeffs({"1", "-1"});
    const FockState s = make_probe(alpha, ProbeFamilySpec{{2, -2}, 0.0}, 2);
    CHECK(s.amplitudes().count({2, 0, 0}) == 1);
    CHECK(s.amplitudes().count({0, 2, 0}) == 1);
  }
  {
    const auto alpha = coeffs({"1", "1"});
    const FockState s = make_probe(alpha, ProbeFamilySpec{{1, 1}, std::numbers::pi}, 2);
    CHECK(s.amplitudes().at({1, 1, 0}).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    const Amplitude branch2 = s.amplitudes().at({0, 0, 2});
    CHECK(branch2.real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(std::fabs(branch2.imag()) < 1e-15);
  }
  // Invariant violations.
  const auto alpha = coeffs({"1", "1"});
  CHECK_THROWS_WITH(make_probe(alpha, ProbeFamilySpec{{1, 0}, 0.0}, 2), "invalid omega");
  CHECK_THROWS_WITH(make_probe(alpha, ProbeFamilySpec{{1, -1}, 0.0}, 2), "invalid omega");
  const auto mixed = coeffs({"1", "-1"});
  CHECK_THROWS_WITH(make_probe(mixed, ProbeFamilySpec{{2, -3}, 0.0}, 2), "invalid omega");
}

TEST_CASE("apply_encoding examples") {
  {
    // Integer winding: theta = pi on a 2-photon mode is a no-op.
    AmplitudeMap amps;
    amps[{2, 0}] = Amplitude(1.0, 0.0);
    const FockState s(2, std::move(amps));
    const std::vector<double> theta{std::numbers::pi};
    const FockState out = apply_encoding(s, theta);
    CHECK(out.amplitudes().at({2, 0}).real() == doctest::Approx(1.0));
    CHECK(out.amplitudes().at({2, 0}).imag() == doctest::Approx(0.0));
  }
  {
    // NOON relative phase N x between the branches.
    const FockState s = noon_state(3);
    const std::vector<double> theta{0.2};
    const FockState out = apply_encoding(s, theta);
    const Amplitude a1 = out.amplitudes().at({3, 0});
    const Amplitude a2 = out.amplitudes().at({0, 3});
    CHECK(std::arg(a2 * std::conj(a1)) == doctest::Approx(3.0 * 0.2));
  }
  {
    // omega = (1,1): the interbranch phase is a + b.
    const auto alpha = coeffs({"1", "1"});
    const FockState s = make_probe(alpha, ProbeFamilySpec{{1, 1}, 0.0}, 2);
    const std::vector<double> theta{0.3, 0.4};
    const FockState out = apply_encoding(s, theta);
    const Amplitude a1 = out.amplitudes().at({1, 1, 0});
    const Amplitude a2 = out.amplitudes().at({0, 0, 2});
    CHECK(std::arg(a2 * std::conj(a1)) == doctest::Approx(0.7));
  }
}

TEST_CASE("encoding preserves norm and photon number") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto alpha = coeffs({"1", "-1"});
    const FockState s = make_probe(alpha, ProbeFamilySpec{{3, -2}, unif(gen)}, 3);
    const std::vector<double> theta{unif(gen), unif(gen)};
    const FockState out = apply_encoding(s, theta);
    CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [occ, amp] : out.amplitudes()) {
      int total = 0;
      for (int c : occ) total += c;
      CHECK(total == 3);
    }
  }
}

TEST_CASE("switch_family examples") {
  const auto alpha = coeffs({"1", "1"});
  const double phi = 0.77;
  const FockState start = make_probe(alpha, ProbeFamilySpec{{2, 0}, phi}, 2);

  // Branch-wise relabeling preserves the relative phase exactly.
  const FockState moved = switch_family(alpha, start, ProbeFamilySpec{{1, 1}, 0.0}, 2);
  const Amplitude a1 = moved.amplitudes().at({1, 1, 0});
  const Amplitude a2 = moved.amplitudes().at({0, 0, 2});
  CHECK(std::arg(a2 * std::conj(a1)) == doctest::Approx(phi));

  // Identity switch.
  const FockState same = switch_family(alpha, start, ProbeFamilySpec{{2, 0}, 0.0}, 2);
  CHECK(same.amplitudes() == start.amplitudes());

  // Round trip is exact.
  const FockState back = switch_family(alpha, moved, ProbeFamilySpec{{2, 0}, 0.0}, 2);
  for (const auto& [occ, amp] : back.amplitudes()) {
    CHECK(std::abs(amp - start.amplitudes().at(occ)) < 1e-15);
  }

  // Unrecognizable states are rejected.
  AmplitudeMap three;
  three[{2, 0, 0}] = Amplitude(std::sqrt(0.5), 0.0);
  three[{1, 1, 0}] = Amplitude(0.5, 0.0);
  three[{0, 0, 2}] = Amplitude(0.5, 0.0);
  const FockState not_family(2, std::move(three));
  CHECK_THROWS_WITH(switch_family(alpha, not_family, ProbeFamilySpec{{1, 1}, 0.0}, 2),
                    "not an omega-family state");
}

TEST_CASE("number_moments examples") {
  {
    AmplitudeMap amps;
    amps[{1, 0}] = Amplitude(1.0, 0.0);
    const FockState s(1, std::move(amps));
    const NumberMoments mom = number_moments(s);
    CHECK(mom.mean[0] == doctest::Approx(1.0));
    CHECK(mom.mean[1] == doctest::Approx(0.0));
    CHECK(mom.covariance.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
  {
    const FockState s = noon_state(2);
    const NumberMoments mom = number_moments(s);
    CHECK(mom.mean[0] == doctest::Approx(1.0));
    CHECK(mom.mean[1] == doctest::Approx(1.0));
    CHECK(mom.covariance(0, 0) == doctest::Approx(1.0));
  }
  {
    const auto alpha = coeffs({"1", "1"});
    const FockState s = make_probe(alpha, ProbeFamilySpec{{1, 1}, 0.0}, 2);
    const NumberMoments mom = number_moments(s);
    // <n1 n2> - <n1><n2> = 1/2 - 1/4.
    CHECK(mom.covariance(0, 1) == doctest::Approx(0.25));
  }
}

TEST_CASE("static QFI examples") {
  {
    const QfiMatrix f = qfi_numeric_static(noon_state(2), 1);
    CHECK(f(0, 0) == doctest::Approx(4.0));  // N^2
  }
  {
    // Proportionally weighted probe: F = (MN)^2 alpha alpha^T / ||alpha||_1^2.
    const auto alpha = coeffs({"1/2", "1/4", "1/4"});
    const FockState probe = make_probe(alpha, ProbeFamilySpec{{2, 1, 1}, 0.0}, 4);
    for (long long m : {1LL, 3LL}) {
      const QfiMatrix f = qfi_numeric_static(probe, m);
      const auto a = alpha.to_doubles();
      const double scale = std::pow(static_cast<double>(m) * 4.0, 2);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(f(i, j) == doctest::Approx(scale * a[i] * a[j]).epsilon(1e-12));
    }
  }
  {
    // Product of per-mode states has zero cross covariance: F is diagonal.
    AmplitudeMap amps;
    const double h = 0.5;
    amps[{1, 1, 0}] = Amplitude(h, 0.0);
    amps[{1, 0, 1}] = Amplitude(h, 0.0);
    amps[{0, 1, 1}] = Amplitude(h, 0.0);
    amps[{0, 0, 2}] = Amplitude(h, 0.0);
    const FockState product(2, std::move(amps));  // (|1>+|0;1ref-ish>) x 2 modes
    const QfiMatrix f = qfi_numeric_static(product, 1);
    CHECK(f(0, 1) == doctest::Approx(0.0));
    CHECK(f(0, 0) == doctest::Approx(1.0));
  }
}

TEST_CASE("two-branch probes pin the positive-mode photon variance") {
  std::mt19937_64 gen(32);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 5);
    const auto alpha = pnet::testing::random_coeffs(gen, 1 + gen() % 3, false);
    const auto w = build_omega_set(alpha, n);
    if (w.columns.empty()) continue;
    const auto& col = w.columns[gen() % w.columns.size()];
    const FockState probe = make_probe(alpha, ProbeFamilySpec{col, 0.3}, n);
    const NumberMoments mom = number_moments(probe);
    // Var(sum_{j in P} n_j) = N^2 / 4 exactly.
    double var = 0.0;
    for (int i : alpha.pos_set())
      for (int j : alpha.pos_set()) var += mom.covariance(i, j);
    CHECK(var == doctest::Approx(n * n / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("fidelity oracle examples") {
  {
    const FockState s = noon_state(2);
    auto protocol = [&](std::span<const double> theta) { return apply_encoding(s, theta); };
    const std::vector<double> theta0{0.0};
    const QfiMatrix f = qfi_fidelity_oracle(protocol, theta0, 1e-3);
    CHECK(std::fabs(f(0, 0) - 4.0) < 1e-4);
  }
  {
    const auto alpha = coeffs({"1/2", "1/2"});
    const FockState probe = make_probe(alpha, ProbeFamilySpec{{1, 1}, 0.0}, 2);
    auto protocol = [&](std::span<const double> theta) { return apply_encoding(probe, theta); };
    const std::vector<double> theta0{0.0, 0.0};
    const QfiMatrix f = qfi_fidelity_oracle(protocol, theta0, 1e-3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::fabs(f(i, j) - 1.0) < 1e-4);
    const QfiMatrix g = qfi_numeric_static(probe, 1);
    CHECK(QfiMatrix::relative_deviation(f, g) < 1e-3);
  }
  {
    // Single-branch states only acquire a global phase.
    AmplitudeMap amps;
    amps[{2, 1, 0}] = Amplitude(1.0, 0.0);
    const FockState s(3, std::move(amps));
    auto protocol = [&](std::span<const double> theta) { return apply_encoding(s, theta); };
    const std::vector<double> theta0{0.1, -0.2};
    const QfiMatrix f = qfi_fidelity_oracle(protocol, theta0, 1e-3);
    CHECK(f.max_abs() < 1e-6);
  }
  CHECK_THROWS(qfi_fidelity_oracle(
      [](std::span<const double>) { return noon_state(1); }, std::vector<double>{0.0}, 0.5));
}

TEST_CASE("covariance QFI matches the overlap oracle on random states") {
  // General superpositions over the full fixed-N basis, d <= 3, N <= 5.
  std::mt19937_64 gen(34);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 3);
    const int n = 2 + static_cast<int>(gen() % 4);
    // Enumerate occupations of d+1 modes summing to n.
    std::vector<Occupation> basis;
    Occupation occ(d + 1, 0);
    const std::function<void(int, int)> enumerate = [&](int mode, int left) {
      if (mode == d) {
        occ[mode] = left;
        basis.push_back(occ);
        return;
      }
      for (int c = 0; c <= left; ++c) {
        occ[mode] = c;
        enumerate(mode + 1, left - c);
      }
    };
    enumerate(0, n);

    AmplitudeMap amps;
    double norm = 0.0;
    for (const auto& key : basis) {
      const Amplitude a(unif(gen), unif(gen));
      amps[key] = a;
      norm += std::norm(a);
    }
    for (auto& [key, a] : amps) a /= std::sqrt(norm);
    const FockState state(n, std::move(amps));

    const long long m = 1 + static_cast<long long>(gen() % 3);
    const QfiMatrix covariance = qfi_numeric_static(state, m);
    auto protocol = [&](std::span<const double> theta) {
      std::vector<double> scaled(theta.begin(), theta.end());
      for (double& x : scaled) x *= static_cast<double>(m);
      return apply_encoding(state, scaled);
    };
    const std::vector<double> theta0(d, 0.0);
    const QfiMatrix oracle = qfi_fidelity_oracle(protocol, theta0, 1e-3);
    CHECK(QfiMatrix::relative_deviation(covariance, oracle) < 1e-3);
  }
}

TEST_CASE("relative phase examples and simulation agreement") {
  {
    const auto schedule = solved_schedule(coeffs({"1", "1"}), 2, 1);
    const std::vector<double> theta{0.3, 0.4};
    CHECK(relative_phase(schedule, theta) == doctest::Approx(0.7));
    CHECK(simulated_interbranch_phase(schedule, theta) == doctest::Approx(0.7).epsilon(1e-10));
  }
  {
    // W r = (4, 2) at theta = (0.1, 0.2) gives 0.8.
    const auto schedule = solved_schedule(coeffs({"2/3", "1/3"}), 3, 2);
    REQUIRE(schedule.target == std::vector<BigInt>{BigInt(4), BigInt(2)});
    const std::vector<double> theta{0.1, 0.2};
    CHECK(relative_phase(schedule, theta) == doctest::Approx(0.8));
  }
  {
    // Simulated phase equals (W r) . theta mod 2 pi across random schedules.
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const auto schedule = solved_schedule(coeffs({"1", "-1"}), 3, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> theta{unif(gen), unif(gen)};
      const double expected = relative_phase(schedule, theta);
      const double simulated = simulated_interbranch_phase(schedule, theta);
      const double delta = std::remainder(simulated - expected, 2.0 * std::numbers::pi);
      CHECK(std::fabs(delta) < 1e-10);
    }
  }
}

TEST_CASE("schedule QFI: numeric equals analytic") {
  // Single-column schedule reduces to the static covariance QFI.
  {
    const auto schedule = solved_schedule(coeffs({"1"}), 3, 2);
    const QfiMatrix numeric = qfi_numeric_schedule(schedule);
    const QfiMatrix analytic = schedule_qfi_analytic(schedule);
    CHECK(numeric(0, 0) == doctest::Approx(36.0));  // (MN)^2
    CHECK(QfiMatrix::relative_deviation(numeric, analytic) < 1e-12);
    const FockState probe =
        make_probe(schedule.omega_set.alpha,
                   ProbeFamilySpec{schedule.omega_set.columns[0], 0.0}, 3);
    CHECK(QfiMatrix::relative_deviation(numeric, qfi_numeric_static(probe, 2)) < 1e-12);
  }
  // Mixed-sign single pass: off-diagonal is negative.
  {
    const auto schedule = solved_schedule(coeffs({"1", "-1"}), 2, 1);
    const QfiMatrix f = qfi_numeric_schedule(schedule);
    CHECK(f(0, 0) == doctest::Approx(4.0));
    CHECK(f(0, 1) == doctest::Approx(-4.0));
    CHECK(f(1, 1) == doctest::Approx(4.0));
  }
  // Multi-column schedule for alpha = (1,1), N = 2, M = 2: W r = (2,2).
  {
    const auto schedule = solved_schedule(coeffs({"1", "1"}), 2, 2);
    const QfiMatrix numeric = qfi_numeric_schedule(schedule);
    const QfiMatrix analytic = schedule_qfi_analytic(schedule);
    CHECK(QfiMatrix::relative_deviation(numeric, analytic) < 1e-12);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(numeric(i, j) == doctest::Approx(4.0));
    CHECK(check_saturation_phase(numeric, schedule.omega_set.alpha, 2, 2) < 1e-12);
  }
  // Fidelity oracle cross-check through the full pass simulation.
  {
    const auto schedule = solved_schedule(coeffs({"1", "-1"}), 2, 2);
    auto protocol = [&](std::span<const double> theta) {
      return simulate_schedule(schedule, theta);
    };
    const std::vector<double> theta0{0.0, 0.0};
    const QfiMatrix oracle = qfi_fidelity_oracle(protocol, theta0, 1e-3);
    const QfiMatrix numeric = qfi_numeric_schedule(schedule);
    CHECK(QfiMatrix::relative_deviation(oracle, numeric) < 1e-3);
  }
}

TEST_CASE("fock state JSON round trip") {
  const auto alpha = coeffs({"1", "-1"});
  const FockState s = make_probe(alpha, ProbeFamilySpec{{2, -1}, 0.4}, 2);
  const Json j = fock_state_to_json(s);
  const FockState back = fock_state_from_json(Json::parse(j.dump()));
  CHECK(back.total_photons() == s.total_photons());
  REQUIRE(back.amplitudes().size() == s.amplitudes().size());
  for (const auto& [occ, amp] : s.amplitudes()) {
    CHECK(std::abs(back.amplitudes().at(occ) - amp) == 0.0);
  }
}
