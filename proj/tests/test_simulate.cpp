#include <doctest.h>

#include <cmath>
#include <fstream>

#include "iga/dynamics.hpp"
#include "iga/simulate.hpp"
#include "test_util.hpp"

using iga::Game;
using iga::SimConfig;
using iga::SimMode;
using iga::StrategyPair;
using iga::Verdict;

TEST_CASE("step_iga follows the projected gradient") {
  const Game mp = testutil::matching_pennies();
  const StrategyPair center = iga::step_iga(mp, StrategyPair(0.5, 0.5), 0.1);
  CHECK(center.alpha == 0.5);
  CHECK(center.beta == 0.5);

  const Game pd = testutil::prisoners_dilemma();
  const StrategyPair s = iga::step_iga(pd, StrategyPair(0.5, 0.5), 0.1);
  CHECK(s.alpha == doctest::Approx(0.35));
  CHECK(s.beta == doctest::Approx(0.35));

  const StrategyPair corner = iga::step_iga(pd, StrategyPair(0, 0), 0.1);
  CHECK(corner.alpha == 0.0);
  CHECK(corner.beta == 0.0);
}

TEST_CASE("step_finite uses the k^(-2/3) schedule") {
  const auto sched = iga::power_schedule();
  CHECK(sched(1) == doctest::Approx(1.0));
  CHECK(sched(8) == doctest::Approx(0.25));
  const Game pd = testutil::prisoners_dilemma();
  for (std::uint64_t k : {1, 5, 100}) {
    const StrategyPair fixed = iga::step_finite(pd, StrategyPair(0, 0), k, sched);
    CHECK(fixed.alpha == 0.0);
    CHECK(fixed.beta == 0.0);
  }
  CHECK_THROWS_AS(iga::power_schedule(0.0), std::invalid_argument);
}

TEST_CASE("payoff averaging") {
  // Constant payoffs average to themselves in both modes.
  iga::PayoffAverager c(SimMode::IgaEuler, 2.0, -1.0);
  c.add(0.5, 2.0, -1.0);
  c.add(0.5, 2.0, -1.0);
  CHECK(c.avg_row() == doctest::Approx(2.0));
  CHECK(c.avg_col() == doctest::Approx(-1.0));

  // Arithmetic mean for FiniteStep: payoffs 0 then 2 average to 1.
  iga::PayoffAverager f(SimMode::FiniteStep, 0.0, 0.0);
  f.add(1.0, 2.0, 2.0);
  CHECK(f.avg_row() == doctest::Approx(1.0));

  CHECK_THROWS_AS(iga::average_payoffs(iga::Trajectory{}), std::invalid_argument);
}

TEST_CASE("one unconstrained orbit averages to the center payoff") {
  // Quadrature of the closed-form orbit over one period: average payoffs
  // match the center (0, 0) payoffs.
  const Game mp = testutil::matching_pennies();
  const double period = iga::orbit_period(mp);
  const int n = 200000;
  double sum_r = 0.0, sum_c = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = period * (i + 0.5) / n;
    const iga::Point p = iga::unconstrained_state(mp, {0.5, 0.6}, t);
    sum_r += iga::value_row(mp, StrategyPair(p[0], p[1]));
    sum_c += iga::value_col(mp, StrategyPair(p[0], p[1]));
  }
  CHECK(std::abs(sum_r / n) < 1e-6);
  CHECK(std::abs(sum_c / n) < 1e-6);
}

TEST_CASE("run: PD converges to mutual defection") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.max_steps = 100000;
  const iga::RunResult r =
      iga::run(testutil::prisoners_dilemma(), StrategyPair(0.9, 0.9), cfg);
  CHECK(r.summary.verdict == Verdict::ConvergedToPoint);
  CHECK(r.summary.final_strategy.alpha == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(r.summary.final_strategy.beta == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(r.summary.nash_payoff_distance < 0.05);
  CHECK(r.summary.nash_strategy_distance < 1e-6);
}

TEST_CASE("run: matching pennies cycles with Nash average payoffs") {
  SimConfig cfg;  // dt = 1e-4, 2e5 steps
  const iga::RunResult r =
      iga::run(testutil::matching_pennies(), StrategyPair(0.5, 0.6), cfg);
  CHECK(r.summary.verdict == Verdict::LimitCycleDetected);
  CHECK(std::abs(r.summary.avg_row) < 0.01);
  CHECK(std::abs(r.summary.avg_col) < 0.01);
}

TEST_CASE("run: a Nash corner start is an immediate fixed point") {
  SimConfig cfg;
  const iga::RunResult r =
      iga::run(testutil::prisoners_dilemma(), StrategyPair(0, 0), cfg);
  CHECK(r.summary.verdict == Verdict::ConvergedToPoint);
  CHECK(r.summary.steps_used <= cfg.window);
  CHECK(r.summary.final_strategy.alpha == 0.0);
}

TEST_CASE("run: every recorded state is feasible, in both modes") {
  for (SimMode mode : {SimMode::IgaEuler, SimMode::FiniteStep}) {
    for (int i = 0; i < 20; ++i) {
      const Game g = iga::random_game(301, i);
      SimConfig cfg;
      cfg.mode = mode;
      cfg.max_steps = 20000;
      const iga::RunResult r = iga::run(g, StrategyPair(0.95, 0.05), cfg);
      for (const auto& s : r.trajectory.samples) {
        CHECK(s.alpha >= 0.0);
        CHECK(s.alpha <= 1.0);
        CHECK(s.beta >= 0.0);
        CHECK(s.beta <= 1.0);
      }
    }
  }
}

TEST_CASE("run: PD strategies are monotone until clamped") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.max_steps = 50000;
  const iga::RunResult r =
      iga::run(testutil::prisoners_dilemma(), StrategyPair(0.9, 0.9), cfg);
  for (std::size_t i = 1; i < r.trajectory.samples.size(); ++i) {
    CHECK(r.trajectory.samples[i].alpha <= r.trajectory.samples[i - 1].alpha);
    CHECK(r.trajectory.samples[i].beta <= r.trajectory.samples[i - 1].beta);
  }
}

TEST_CASE("run: converged runs end at Nash points (random games)") {
  SimConfig cfg;
  cfg.max_steps = 50000;
  for (int i = 0; i < 50; ++i) {
    const Game g = iga::random_game(303, i);
    const iga::RunResult r = iga::run(g, StrategyPair(0.05, 0.95), cfg);
    if (r.summary.verdict == Verdict::ConvergedToPoint) {
      CAPTURE(i);
      CHECK(iga::is_nash(g, r.summary.final_strategy, 10.0 * cfg.conv_tol));
    }
  }
}

TEST_CASE("IGA fidelity: small-step Euler tracks the closed form for a period") {
  const Game mp = testutil::matching_pennies();
  const double dt = 1e-5;
  const double period = iga::orbit_period(mp);
  const auto steps = static_cast<std::uint64_t>(period / dt);
  StrategyPair s(0.5, 0.6);
  const double q0 = iga::conserved_quantity(mp, {s.alpha, s.beta});
  double max_err = 0.0;
  for (std::uint64_t k = 1; k <= steps; ++k) {
    s = iga::step_iga(mp, s, dt);
    const iga::Point exact = iga::unconstrained_state(mp, {0.5, 0.6}, k * dt);
    max_err = std::max({max_err, std::abs(s.alpha - exact[0]),
                        std::abs(s.beta - exact[1])});
  }
  CHECK(max_err < 1e-3);
  const double q1 = iga::conserved_quantity(mp, {s.alpha, s.beta});
  CHECK(std::abs(q1 - q0) / q0 < 1e-3);
}

TEST_CASE("sweep: deterministic, serial == parallel, rejects n_games < 1") {
  SimConfig cfg;
  cfg.max_steps = 5000;
  cfg.window = 500;
  const iga::SweepReport a = iga::sweep(99, 20, cfg, true);
  const iga::SweepReport b = iga::sweep(99, 20, cfg, true);
  const iga::SweepReport c = iga::sweep(99, 20, cfg, false);
  CHECK(iga::sweep_report_to_json(a) == iga::sweep_report_to_json(b));
  CHECK(iga::sweep_report_to_json(a) == iga::sweep_report_to_json(c));
  CHECK(a.count_non_invertible + a.count_imaginary + a.count_real == 20);
  CHECK_THROWS_AS(iga::sweep(99, 0, cfg), std::invalid_argument);
}

TEST_CASE("trajectory CSV has the pinned header and sample rows") {
  SimConfig cfg;
  cfg.max_steps = 1000;
  cfg.window = 100;
  const iga::RunResult r =
      iga::run(testutil::matching_pennies(), StrategyPair(0.5, 0.6), cfg);
  const std::string path = "traj_test.csv";
  iga::write_trajectory_csv(r.trajectory, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "step,time,alpha,beta,v_row,v_col,avg_row,avg_col");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == r.trajectory.samples.size());
}
