#include <doctest.h>

#include "iga/game.hpp"
#include "iga/simulate.hpp"  // random_game
#include "test_util.hpp"

using iga::Game;
using iga::GradientVector;
using iga::StrategyPair;

TEST_CASE("value_row at corners and uniform mixing") {
  const Game pd = testutil::prisoners_dilemma();
  CHECK(iga::value_row(pd, StrategyPair(1, 1)) == 3.0);
  CHECK(iga::value_row(pd, StrategyPair(0.5, 0.5)) == doctest::Approx(2.25));
  const Game mp = testutil::matching_pennies();
  CHECK(iga::value_row(mp, StrategyPair(0.5, 0.5)) == doctest::Approx(0.0));
}

TEST_CASE("value_col at corners and symmetry") {
  const Game pd = testutil::prisoners_dilemma();
  CHECK(iga::value_col(pd, StrategyPair(0, 0)) == doctest::Approx(1));
  CHECK(iga::value_col(pd, StrategyPair(1, 0)) == doctest::Approx(5));
  const Game mp = testutil::matching_pennies();
  CHECK(iga::value_col(mp, StrategyPair(0.5, 0.5)) == doctest::Approx(0.0));
}

TEST_CASE("gradient matches the finite-difference oracle") {
  const Game pd = testutil::prisoners_dilemma();
  const GradientVector g = iga::gradient(pd, StrategyPair(0.5, 0.5));
  CHECK(g.d_alpha == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(g.d_beta == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(g.d_alpha == doctest::Approx(testutil::fd_row(pd, 0.5, 0.5)).epsilon(1e-9));
  CHECK(g.d_beta == doctest::Approx(testutil::fd_col(pd, 0.5, 0.5)).epsilon(1e-9));

  const GradientVector at_center =
      iga::gradient(testutil::matching_pennies(), StrategyPair(0.5, 0.5));
  CHECK(at_center.d_alpha == 0.0);
  CHECK(at_center.d_beta == 0.0);

  // u = 0 makes the row gradient the constant -(r22 - r12).
  const Game ni = testutil::noninvertible();
  for (double b : {0.0, 0.3, 1.0}) {
    CHECK(iga::gradient(ni, StrategyPair(0.2, b)).d_alpha == doctest::Approx(-2.0));
  }
}

TEST_CASE("projected gradient clamps only outward boundary components") {
  const Game pd = testutil::prisoners_dilemma();
  // Raw gradient at the origin is (-1, -1): both components point outside.
  const GradientVector raw = iga::gradient(pd, StrategyPair(0, 0));
  CHECK(raw.d_alpha == doctest::Approx(-1.0));
  CHECK(raw.d_beta == doctest::Approx(-1.0));
  const GradientVector proj = iga::projected_gradient(pd, StrategyPair(0, 0));
  CHECK(proj.d_alpha == 0.0);
  CHECK(proj.d_beta == 0.0);

  // Interior points are never modified.
  const GradientVector in = iga::projected_gradient(pd, StrategyPair(0.4, 0.7));
  const GradientVector in_raw = iga::gradient(pd, StrategyPair(0.4, 0.7));
  CHECK(in.d_alpha == in_raw.d_alpha);
  CHECK(in.d_beta == in_raw.d_beta);

  // Inward components on a face are kept.
  const Game g{0, 1, 0, 0, 0, 0, 0, 0};  // d_alpha = 0.5 at beta = 0.5
  const GradientVector face = iga::projected_gradient(g, StrategyPair(0, 0.5));
  CHECK(face.d_alpha == doctest::Approx(0.5));
}

TEST_CASE("u_params matches the defining sums") {
  const iga::UParams mp = iga::u_params(testutil::matching_pennies());
  CHECK(mp.u == 4.0);
  CHECK(mp.u_prime == -4.0);
  const iga::UParams pd = iga::u_params(testutil::prisoners_dilemma());
  CHECK(pd.u == -1.0);
  CHECK(pd.u_prime == -1.0);
  const iga::UParams team = iga::u_params(testutil::coordination());
  CHECK(team.u == team.u_prime);
}

TEST_CASE("finite differences are exact for 1000 random games") {
  std::uint64_t rng = 42;
  auto unit = [&rng] {
    rng = rng * 6364136223846793005ULL + 1442695040888963407ULL;
    return (rng >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 1000; ++i) {
    const Game g = iga::random_game(7, i);
    const double a = 0.1 + 0.8 * unit();
    const double b = 0.1 + 0.8 * unit();
    const GradientVector grad = iga::gradient(g, StrategyPair(a, b));
    CHECK(std::abs(grad.d_alpha - testutil::fd_row(g, a, b)) < 1e-9);
    CHECK(std::abs(grad.d_beta - testutil::fd_col(g, a, b)) < 1e-9);
  }
}

TEST_CASE("value is bilinear") {
  for (int i = 0; i < 200; ++i) {
    const Game g = iga::random_game(11, i);
    const double b = 0.37;
    const double v0 = iga::value_row(g, StrategyPair(0.1, b));
    const double v1 = iga::value_row(g, StrategyPair(0.9, b));
    const double vm = iga::value_row(g, StrategyPair(0.5, b));
    CHECK(vm == doctest::Approx(0.5 * (v0 + v1)).epsilon(1e-12));
    const double a = 0.61;
    const double w0 = iga::value_col(g, StrategyPair(a, 0.2));
    const double w1 = iga::value_col(g, StrategyPair(a, 0.8));
    const double wm = iga::value_col(g, StrategyPair(a, 0.5));
    CHECK(wm == doctest::Approx(0.5 * (w0 + w1)).epsilon(1e-12));
  }
}

TEST_CASE("zero-sum and team identities") {
  for (int i = 0; i < 200; ++i) {
    Game g = iga::random_game(13, i);
    // zero-sum variant
    Game zs = g;
    zs.c11 = -zs.r11; zs.c12 = -zs.r12; zs.c21 = -zs.r21; zs.c22 = -zs.r22;
    CHECK(zs.is_zero_sum());
    const iga::UParams up = iga::u_params(zs);
    CHECK(up.u == doctest::Approx(-up.u_prime).epsilon(1e-12));
    CHECK(up.u * up.u_prime <= 0.0);
    const StrategyPair s(0.3, 0.8);
    CHECK(iga::value_row(zs, s) + iga::value_col(zs, s) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // team variant
    Game team = g;
    team.c11 = team.r11; team.c12 = team.r12; team.c21 = team.r21; team.c22 = team.r22;
    CHECK(team.is_team());
    const iga::UParams tp = iga::u_params(team);
    CHECK(tp.u == tp.u_prime);
    CHECK(tp.u * tp.u_prime >= 0.0);
  }
}

TEST_CASE("projection idempotence") {
  for (int i = 0; i < 500; ++i) {
    const Game g = iga::random_game(17, i);
    const double coords[3] = {0.0, 0.5, 1.0};
    for (double a : coords) {
      for (double b : coords) {
        const StrategyPair s(a, b);
        const GradientVector raw = iga::gradient(g, s);
        const GradientVector p = iga::projected_gradient(g, s);
        // Clamped components are exactly zero, others untouched.
        CHECK((p.d_alpha == raw.d_alpha || p.d_alpha == 0.0));
        CHECK((p.d_beta == raw.d_beta || p.d_beta == 0.0));
        // A feasible gradient is never modified.
        if (!((a == 0.0 && raw.d_alpha < 0) || (a == 1.0 && raw.d_alpha > 0))) {
          CHECK(p.d_alpha == raw.d_alpha);
        }
      }
    }
  }
}

TEST_CASE("StrategyPair clamps round-off and rejects infeasible points") {
  const StrategyPair s(1.0 + 1e-13, -1e-13);
  CHECK(s.alpha == 1.0);
  CHECK(s.beta == 0.0);
  CHECK_THROWS_AS(StrategyPair(1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(StrategyPair(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("game JSON round trip") {
  const Game g = testutil::prisoners_dilemma();
  const Game back = iga::game_from_json(iga::game_to_json(g));
  CHECK(back.r11 == g.r11);
  CHECK(back.r12 == g.r12);
  CHECK(back.r21 == g.r21);
  CHECK(back.r22 == g.r22);
  CHECK(back.c11 == g.c11);
  CHECK(back.c22 == g.c22);
  CHECK_THROWS_AS(iga::game_from_json(nlohmann::json{{"r", {{1, 2}, {3, 4}}}}),
                  std::invalid_argument);
}
