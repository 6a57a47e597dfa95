#pragma once

#include <array>
#include <complex>
#include <optional>

#include "iga/game.hpp"

namespace iga {

// The three regimes of the unconstrained affine flow, by the sign of u*u'.
enum class Regime { NonInvertible, ImaginaryEigen, RealEigen };

enum class CenterLocation { Interior, OnBoundary, Outside };

using Point = std::array<double, 2>;  // (alpha, beta), not confined to the square

struct DynamicsClass {
  Regime regime;
  double u;
  double u_prime;
  std::optional<Point> center;  // absent iff NonInvertible
  CenterLocation center_location = CenterLocation::Outside;
};

struct EigenStructure {
  std::complex<double> eigenvalue_pos;  // +sqrt(uu') branch
  std::complex<double> eigenvalue_neg;
  // ImaginaryEigen: ellipse axis directions (parallel to the square's axes).
  // RealEigen: eigenvector directions (1, +-sqrt(u'/u)).
  Point axis1;
  Point axis2;
};

enum class OutcomeKind { ConvergeToPoint, LimitCycle };

struct OutcomePrediction {
  OutcomeKind kind;
  std::optional<StrategyPair> target;   // set for ConvergeToPoint
  std::optional<Point> cycle_center;    // set for LimitCycle
  double predicted_avg_row;
  double predicted_avg_col;
};

DynamicsClass classify(const Game& game);

// Throws std::domain_error for NonInvertible games.
EigenStructure eigenstructure(const Game& game);

// Exact solution of the unconstrained affine flow at time t >= 0; the start
// need not be inside the unit square.
Point unconstrained_state(const Game& game, const Point& start, double t);

// Qualitative outcome of the constrained flow from a feasible start.
OutcomePrediction predict_outcome(const Game& game, const StrategyPair& start);

// Quantity conserved along unconstrained imaginary-regime trajectories:
// |u'| (alpha - alpha*)^2 + |u| (beta - beta*)^2.
double conserved_quantity(const Game& game, const Point& p);

// Smallest conserved-quantity level at which an ellipse touches a face of
// the unit square; trajectories in the imaginary regime with an interior
// center settle on an ellipse with Q <= this level.
double absorbing_ellipse_q(const Game& game);

// Period of the unconstrained imaginary-regime orbit: 2*pi / sqrt(|u||u'|).
double orbit_period(const Game& game);

const char* to_string(Regime r);
const char* to_string(CenterLocation c);
const char* to_string(OutcomeKind k);
nlohmann::json dynamics_class_to_json(const DynamicsClass& d);
nlohmann::json eigenstructure_to_json(const EigenStructure& e);
nlohmann::json outcome_prediction_to_json(const OutcomePrediction& p);

}  // namespace iga
