#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pnet/bounds.hpp"
#include "pnet/io.hpp"
#include "pnet/protocol.hpp"
#include "pnet/schedule_sim.hpp"

using namespace pnet;
using pnet::testing::brute_force_feasible;
using pnet::testing::coeffs;

TEST_CASE("feasibility precheck examples") {
  CHECK(feasibility_precheck(coeffs({"1", "1"}), 2, 1));
  CHECK_FALSE(feasibility_precheck(coeffs({"1/3", "2/3"}), 2, 1));
  CHECK(feasibility_precheck(coeffs({"1/3", "2/3"}), 3, 1));
  CHECK_THROWS(feasibility_precheck(coeffs({"1"}), 0, 1));
}

TEST_CASE("omega set enumeration examples") {
  {
    const auto w = build_omega_set(coeffs({"1", "1"}), 2);
    const std::vector<std::vector<long long>> expected{{2, 0}, {1, 1}, {0, 2}};
    CHECK(w.columns == expected);
  }
  {
    const auto w = build_omega_set(coeffs({"1", "-1"}), 2);
    const std::vector<std::vector<long long>> expected{{2, 0}, {2, -1}, {2, -2}};
    CHECK(w.columns == expected);
  }
  {
    const auto w = build_omega_set(coeffs({"1", "1", "1"}), 1);
    const std::vector<std::vector<long long>> expected{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(w.columns == expected);
  }
  // Size guard.
  CHECK_THROWS_WITH(build_omega_set(coeffs({"1", "1", "1", "1", "1", "1"}), 40),
                    "omega set too large; supply support_cap");
  // Entanglement cap filters columns.
  {
    const auto w = build_omega_set(coeffs({"1", "1"}), 2, 2);
    const std::vector<std::vector<long long>> expected{{2, 0}, {0, 2}};
    CHECK(w.columns == expected);  // (1,1) needs 3-mode entanglement
  }
}

TEST_CASE("every enumerated column satisfies the set constraints") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 3);
    const auto alpha = pnet::testing::random_coeffs(gen, d, false);
    const long long n = 1 + static_cast<long long>(gen() % 5);
    const auto w = build_omega_set(alpha, n);
    for (const auto& col : w.columns) {
      long long pos = 0, neg = 0;
      for (int j = 0; j < d; ++j) {
        CHECK(col[j] * alpha.entry(j).sign() >= 0);
        if (alpha.in_pos_set(j)) pos += std::llabs(col[j]);
        else neg += std::llabs(col[j]);
      }
      CHECK(pos == n);
      CHECK(neg <= n);
    }
    // Distinct and descending lexicographic.
    for (std::size_t i = 1; i < w.columns.size(); ++i) CHECK(w.columns[i - 1] > w.columns[i]);
  }
}

TEST_CASE("solver examples") {
  {
    const auto w = build_omega_set(coeffs({"1", "1"}), 2);
    const auto result = solve_schedule(w, 1);
    REQUIRE(result.status == SolveStatus::Found);
    CHECK(result.schedule->repetitions == std::vector<long long>{0, 1, 0});
  }
  {
    // Two solutions exist; the search returns the one that spends passes on
    // the earliest columns first.
    const auto w = build_omega_set(coeffs({"2/3", "1/3"}), 3);
    const auto result = solve_schedule(w, 2);
    REQUIRE(result.status == SolveStatus::Found);
    // Columns: (3,0), (2,1), (1,2), (0,3); expected r = (1,0,1,0).
    CHECK(result.schedule->repetitions == std::vector<long long>{1, 0, 1, 0});
    CHECK(result.schedule->weighted_sum() ==
          std::vector<BigInt>{BigInt(4), BigInt(2)});
  }
  {
    // Support cap excludes the needed column.
    const auto w = build_omega_set(coeffs({"1", "1"}), 2, 2);
    const auto result = solve_schedule(w, 1);
    CHECK(result.status == SolveStatus::Infeasible);
  }
  {
    // Node budget exhaustion is inconclusive, not infeasible.
    const auto w = build_omega_set(coeffs({"1", "1"}), 2);
    const auto result = solve_schedule(w, 1, /*node_budget=*/1);
    CHECK(result.status == SolveStatus::Inconclusive);
  }
}

TEST_CASE("solver schedules satisfy the contract exactly") {
  std::mt19937_64 gen(42);
  int found = 0;
  for (int trial = 0; trial < 200 && found < 40; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 3);
    const auto alpha = pnet::testing::random_coeffs(gen, d, false);
    const long long n = 2 + static_cast<long long>(gen() % 5);
    const long long m = 1 + static_cast<long long>(gen() % 4);
    if (!feasibility_precheck(alpha, n, m)) continue;
    const auto w = build_omega_set(alpha, n);
    const auto result = solve_schedule(w, m);
    if (result.status != SolveStatus::Found) continue;
    ++found;
    const auto& s = *result.schedule;
    long long total = 0;
    for (long long r : s.repetitions) {
      CHECK(r >= 0);
      total += r;
    }
    CHECK(total == m);
    CHECK(s.weighted_sum() == s.target);
  }
  CHECK(found >= 20);
}

TEST_CASE("solver verdicts match brute-force multiset enumeration") {
  // Small instances (|W| <= 10, M <= 3), with and without support caps.
  struct Instance {
    CoefficientVector alpha;
    long long n;
    std::optional<long long> cap;
  };
  const std::vector<Instance> instances = {
      {coeffs({"1", "1"}), 2, std::nullopt},    {coeffs({"1", "1"}), 2, 2},
      {coeffs({"1", "1"}), 3, std::nullopt},    {coeffs({"1", "-1"}), 2, std::nullopt},
      {coeffs({"1", "-1"}), 3, std::nullopt},   {coeffs({"2", "-1"}), 3, std::nullopt},
      {coeffs({"1", "1", "1"}), 1, std::nullopt}, {coeffs({"1", "1", "1"}), 2, 3},
      {coeffs({"1/2", "1/2"}), 2, std::nullopt},  {coeffs({"2/3", "1/3"}), 3, std::nullopt},
      {coeffs({"1", "-1", "1"}), 2, 2},
  };
  int checked = 0;
  for (const auto& inst : instances) {
    const auto w = build_omega_set(inst.alpha, inst.n, inst.cap);
    if (w.columns.size() > 10) continue;
    for (long long m = 1; m <= 3; ++m) {
      if (!feasibility_precheck(inst.alpha, inst.n, m)) continue;
      const auto result = solve_schedule(w, m);
      REQUIRE(result.status != SolveStatus::Inconclusive);
      const bool solver_feasible = result.status == SolveStatus::Found;
      CHECK(solver_feasible == brute_force_feasible(w, m));
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("solver handles larger mixed-sign instances") {
  // d = 3, N = 12, M = 6: a few thousand columns, still exact and quick.
  const auto alpha = coeffs({"1/2", "1/4", "-1/4"});
  const long long n = 12, m = 6;
  REQUIRE(feasibility_precheck(alpha, n, m));
  const auto w = build_omega_set(alpha, n);
  CHECK(w.columns.size() > 100);
  const auto result = solve_schedule(w, m);
  REQUIRE(result.status == SolveStatus::Found);
  CHECK(result.schedule->weighted_sum() == result.schedule->target);
  CHECK(result.nodes_visited < 1000000);
  const QfiMatrix f = schedule_qfi_analytic(*result.schedule);
  CHECK(check_saturation_phase(f, alpha, n, m) < 1e-12);
}

TEST_CASE("analytic schedule QFI examples") {
  {
    // Single NOON column, M passes: F = (MN)^2.
    const auto w = build_omega_set(coeffs({"1"}), 4);
    const auto result = solve_schedule(w, 3);
    REQUIRE(result.status == SolveStatus::Found);
    const QfiMatrix f = schedule_qfi_analytic(*result.schedule);
    CHECK(f(0, 0) == doctest::Approx(144.0));
  }
  {
    // Proportional column for alpha = (1,1), N = 2, M = 1.
    const auto w = build_omega_set(coeffs({"1", "1"}), 2);
    const auto result = solve_schedule(w, 1);
    REQUIRE(result.status == SolveStatus::Found);
    const QfiMatrix f = schedule_qfi_analytic(*result.schedule);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(f(i, j) == doctest::Approx(1.0));
  }
  {
    // Mixed signs flip the off-diagonal.
    const auto w = build_omega_set(coeffs({"1", "-1"}), 2);
    const auto result = solve_schedule(w, 1);
    REQUIRE(result.status == SolveStatus::Found);
    const QfiMatrix f = schedule_qfi_analytic(*result.schedule);
    CHECK(f(0, 0) == doctest::Approx(4.0));
    CHECK(f(0, 1) == doctest::Approx(-4.0));
  }
}

TEST_CASE("phase saturation residual") {
  {
    // Solver output saturates exactly.
    const auto w = build_omega_set(coeffs({"1/2", "1/4", "1/4"}), 4);
    const auto result = solve_schedule(w, 2);
    REQUIRE(result.status == SolveStatus::Found);
    const QfiMatrix f = schedule_qfi_analytic(*result.schedule);
    CHECK(check_saturation_phase(f, result.schedule->omega_set.alpha, 4, 2) < 1e-12);
  }
  {
    // Separable product QFI misses the condition whenever the separable
    // bound exceeds the entangled one.
    const auto alpha = coeffs({"1", "1"});
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
    diag(0, 0) = diag(1, 1) = 1.0;  // per-mode NOON with N/2 = 1 photon each
    const double residual = check_saturation_phase(QfiMatrix(diag), alpha, 2, 1);
    CHECK(residual > 0.1);
  }
}

TEST_CASE("quadrature saturation residual") {
  const auto alpha = coeffs({"1", "1"});
  {
    // The ideal rank-one matrix has zero residual.
    const auto a = alpha.to_doubles();
    Eigen::MatrixXd ideal(2, 2);
    const double scale = 4.0 * 9.0 * 50.0 / 2.0;  // 4 M^2 Nbar / ||a||_2^2
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) ideal(i, j) = scale * a[i] * a[j];
    CHECK(check_saturation_quad(QfiMatrix(ideal), alpha, 50.0, 3) == doctest::Approx(0.0));
  }
  {
    // Vacuum probe: F = M^2 I, maximally far from the rank-one target.
    Eigen::MatrixXd vacuum = Eigen::MatrixXd::Identity(2, 2);
    CHECK(check_saturation_quad(QfiMatrix(vacuum), alpha, 0.0, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("per-pass entanglement examples") {
  const auto single = coeffs({"1"});
  const std::vector<long long> noon{3};
  CHECK(entanglement_per_pass(noon, single, 3) == 2);

  const auto mixed = coeffs({"1", "-1"});
  const std::vector<long long> balanced{2, -2};
  CHECK(entanglement_per_pass(balanced, mixed, 2) == 2);  // reference factors out

  const auto pair = coeffs({"1", "1"});
  const std::vector<long long> spread{1, 1};
  CHECK(entanglement_per_pass(spread, pair, 2) == 3);
}

TEST_CASE("schedule entanglement is consistent with the lower bound") {
  std::mt19937_64 gen(43);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 40; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 3);
    const auto alpha = pnet::testing::random_coeffs(gen, d, false);
    const long long n = 2 + static_cast<long long>(gen() % 5);
    const long long m = 1 + static_cast<long long>(gen() % 4);
    if (!feasibility_precheck(alpha, n, m)) continue;
    const auto result = solve_schedule(build_omega_set(alpha, n), m);
    if (result.status != SolveStatus::Found) continue;
    ++checked;

    long long max_ent = 0;
    bool reference_used = false;
    for (int col : result.schedule->pass_columns()) {
      const auto& omega = result.schedule->omega_set.columns[col];
      max_ent = std::max(max_ent, entanglement_per_pass(omega, alpha, n));
      long long neg = 0;
      for (int j : alpha.neg_set()) neg += std::llabs(omega[j]);
      reference_used = reference_used || neg < n;
    }
    // Pigeonhole floors: some pass touches ceil(s/M) sensing modes, and the
    // reference (when any pass stores photons there) adds one more mode to
    // cover. A single pass carries the whole target, reference included.
    const long long support = alpha.support_size();
    long long floor =
        min_entanglement(alpha, m, Coupling::Phase, Control::Discrete) - 1;
    const long long covered = support + (reference_used ? 1 : 0);
    floor = std::max(floor, (covered + m - 1) / m);
    if (m == 1 && reference_used) floor = support + 1;
    CHECK(max_ent >= floor);
  }
  CHECK(checked >= 20);
}

TEST_CASE("schedule JSON round trip and tamper detection") {
  const auto w = build_omega_set(coeffs({"1", "-1"}), 2);
  const auto result = solve_schedule(w, 2);
  REQUIRE(result.status == SolveStatus::Found);
  const QfiMatrix f = schedule_qfi_analytic(*result.schedule);
  const double residual =
      check_saturation_phase(f, result.schedule->omega_set.alpha, 2, 2);
  const Json j = schedule_to_json(*result.schedule, f, residual);

  const ProtocolSchedule back = schedule_from_json(Json::parse(j.dump()));
  CHECK(back.repetitions == result.schedule->repetitions);
  CHECK(back.omega_set.columns == result.schedule->omega_set.columns);
  CHECK(back.target == result.schedule->target);

  Json tampered = j;
  tampered["r"][0] = 7;
  const ProtocolSchedule bad = schedule_from_json(tampered);
  CHECK(bad.weighted_sum() != bad.target);
}
