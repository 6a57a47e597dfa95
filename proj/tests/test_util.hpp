#pragma once

#include <array>
#include <cmath>

#include "iga/dynamics.hpp"
#include "iga/game.hpp"

namespace testutil {

inline iga::Game prisoners_dilemma() {
  return iga::Game{3, 0, 5, 1, 3, 5, 0, 1};
}

inline iga::Game matching_pennies() {
  return iga::Game{1, -1, -1, 1, -1, 1, 1, -1};
}

inline iga::Game coordination() { return iga::Game{2, 0, 0, 1, 2, 0, 0, 1}; }

// u = 0 fixture: row gradient is the constant -2.
inline iga::Game noninvertible() { return iga::Game{1, 2, 3, 4, 0, 1, 2, 0}; }

// Central finite difference of the row value in alpha; the value is
// bilinear, so this is exact up to round-off.
inline double fd_row(const iga::Game& g, double a, double b, double h = 1e-5) {
  return (iga::value_row(g, iga::StrategyPair(a + h, b)) -
          iga::value_row(g, iga::StrategyPair(a - h, b))) /
         (2.0 * h);
}

inline double fd_col(const iga::Game& g, double a, double b, double h = 1e-5) {
  return (iga::value_col(g, iga::StrategyPair(a, b + h)) -
          iga::value_col(g, iga::StrategyPair(a, b - h))) /
         (2.0 * h);
}

// Independent high-accuracy integrator of the unconstrained affine flow
// (classic RK4 on the raw gradient field), used as the oracle for the
// closed-form solutions.
inline iga::Point rk4_unconstrained(const iga::Game& g, iga::Point p,
                                    double t_end, int n_steps = 200000) {
  const iga::UParams up = iga::u_params(g);
  auto f = [&](const iga::Point& q) {
    return iga::Point{q[1] * up.u - up.b_r, q[0] * up.u_prime - up.b_c};
  };
  const double h = t_end / n_steps;
  for (int i = 0; i < n_steps; ++i) {
    const iga::Point k1 = f(p);
    const iga::Point k2 = f({p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1]});
    const iga::Point k3 = f({p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1]});
    const iga::Point k4 = f({p[0] + h * k3[0], p[1] + h * k3[1]});
    p[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    p[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  }
  return p;
}

}  // namespace testutil
