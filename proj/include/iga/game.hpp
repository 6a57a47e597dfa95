#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace iga {

// Payoff matrices of a two-player, two-action general-sum game.
// Row index = row player's action, column index = column player's action.
struct Game {
  double r11, r12, r21, r22;  // row player
  double c11, c12, c21, c22;  // column player

  double scale() const {
    return std::max({std::abs(r11), std::abs(r12), std::abs(r21), std::abs(r22),
                     std::abs(c11), std::abs(c12), std::abs(c21), std::abs(c22)});
  }

  bool is_zero_sum() const {
    return r11 + c11 == 0.0 && r12 + c12 == 0.0 && r21 + c21 == 0.0 &&
           r22 + c22 == 0.0;
  }

  bool is_team() const {
    return r11 == c11 && r12 == c12 && r21 == c21 && r22 == c22;
  }

  bool all_finite() const {
    return std::isfinite(r11) && std::isfinite(r12) && std::isfinite(r21) &&
           std::isfinite(r22) && std::isfinite(c11) && std::isfinite(c12) &&
           std::isfinite(c21) && std::isfinite(c22);
  }
};

Game game_from_json(const nlohmann::json& j);
nlohmann::json game_to_json(const Game& g);
Game load_game_file(const std::string& path);

// Construction tolerance: inputs this far outside [0,1] are clamped,
// anything further is rejected. Absorbs integrator round-off.
inline constexpr double kStrategySlack = 1e-12;

// A point (alpha, beta) in the unit square: the probability each player
// assigns to their first action.
struct StrategyPair {
  double alpha;
  double beta;

  StrategyPair(double a, double b) : alpha(a), beta(b) {
    if (!(a >= -kStrategySlack && a <= 1.0 + kStrategySlack) ||
        !(b >= -kStrategySlack && b <= 1.0 + kStrategySlack)) {
      throw std::invalid_argument("StrategyPair outside the unit square: (" +
                                  std::to_string(a) + ", " + std::to_string(b) +
                                  ")");
    }
    alpha = std::clamp(a, 0.0, 1.0);
    beta = std::clamp(b, 0.0, 1.0);
  }
};

struct GradientVector {
  double d_alpha;  // dV_row/dalpha
  double d_beta;   // dV_col/dbeta
};

// u, u' and the constant offsets of the affine gradient field.
struct UParams {
  double u;        // (r11 + r22) - (r21 + r12)
  double u_prime;  // (c11 + c22) - (c21 + c12)
  double b_r;      // r22 - r12
  double b_c;      // c22 - c21
};

inline UParams u_params(const Game& g) {
  return UParams{(g.r11 + g.r22) - (g.r21 + g.r12),
                 (g.c11 + g.c22) - (g.c21 + g.c12), g.r22 - g.r12,
                 g.c22 - g.c21};
}

// Expected payoff of (alpha, beta) to the row player.
inline double value_row(const Game& g, const StrategyPair& s) {
  const double a = s.alpha, b = s.beta;
  return g.r11 * (a * b) + g.r22 * ((1.0 - a) * (1.0 - b)) +
         g.r12 * (a * (1.0 - b)) + g.r21 * ((1.0 - a) * b);
}

// Expected payoff of (alpha, beta) to the column player.
inline double value_col(const Game& g, const StrategyPair& s) {
  const double a = s.alpha, b = s.beta;
  return g.c11 * (a * b) + g.c22 * ((1.0 - a) * (1.0 - b)) +
         g.c12 * (a * (1.0 - b)) + g.c21 * ((1.0 - a) * b);
}

// Raw (unprojected) gradient of each player's value in their own variable.
inline GradientVector gradient(const Game& g, const StrategyPair& s) {
  const UParams up = u_params(g);
  return GradientVector{s.beta * up.u - up.b_r, s.alpha * up.u_prime - up.b_c};
}

// Gradient with outward-pointing components zeroed on the boundary of the
// unit square. At corners each component is treated independently.
inline GradientVector projected_gradient(const Game& g, const StrategyPair& s) {
  GradientVector v = gradient(g, s);
  if ((s.alpha <= 0.0 && v.d_alpha < 0.0) || (s.alpha >= 1.0 && v.d_alpha > 0.0))
    v.d_alpha = 0.0;
  if ((s.beta <= 0.0 && v.d_beta < 0.0) || (s.beta >= 1.0 && v.d_beta > 0.0))
    v.d_beta = 0.0;
  return v;
}

}  // namespace iga
