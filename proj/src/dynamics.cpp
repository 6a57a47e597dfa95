#include "iga/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace iga {

namespace {

constexpr double kBoundaryTol = 1e-12;

double classify_eps(const Game& g) { return 1e-12 * g.scale(); }

// Where a coordinate with a constant-sign derivative ends up: the face it
// is pushed toward, or its current value when the derivative vanishes.
double limit_coord(double deriv, double current, double eps) {
  if (deriv > eps) return 1.0;
  if (deriv < -eps) return 0.0;
  return current;
}

OutcomePrediction converge_to(const Game& game, const StrategyPair& target) {
  return OutcomePrediction{OutcomeKind::ConvergeToPoint, target, std::nullopt,
                           value_row(game, target), value_col(game, target)};
}

}  // namespace

DynamicsClass classify(const Game& game) {
  const UParams up = u_params(game);
  const double eps = classify_eps(game);
  DynamicsClass d;
  d.u = up.u;
  d.u_prime = up.u_prime;
  if (std::abs(up.u) <= eps || std::abs(up.u_prime) <= eps) {
    d.regime = Regime::NonInvertible;
    return d;
  }
  d.regime = (up.u * up.u_prime < 0.0) ? Regime::ImaginaryEigen : Regime::RealEigen;
  const double ac = up.b_c / up.u_prime;
  const double bc = up.b_r / up.u;
  d.center = Point{ac, bc};
  const bool in_square = ac >= -kBoundaryTol && ac <= 1.0 + kBoundaryTol &&
                         bc >= -kBoundaryTol && bc <= 1.0 + kBoundaryTol;
  if (!in_square) {
    d.center_location = CenterLocation::Outside;
  } else if (std::abs(ac) <= kBoundaryTol || std::abs(1.0 - ac) <= kBoundaryTol ||
             std::abs(bc) <= kBoundaryTol || std::abs(1.0 - bc) <= kBoundaryTol) {
    d.center_location = CenterLocation::OnBoundary;
  } else {
    d.center_location = CenterLocation::Interior;
  }
  return d;
}

EigenStructure eigenstructure(const Game& game) {
  const DynamicsClass d = classify(game);
  if (d.regime == Regime::NonInvertible) {
    throw std::domain_error("eigenstructure undefined: U is not invertible");
  }
  const double u = d.u, upr = d.u_prime;
  EigenStructure e;
  if (d.regime == Regime::ImaginaryEigen) {
    const double w = std::sqrt(std::abs(u) * std::abs(upr));
    e.eigenvalue_pos = {0.0, w};
    e.eigenvalue_neg = {0.0, -w};
    e.axis1 = {1.0, 0.0};
    e.axis2 = {0.0, std::sqrt(std::abs(upr) / std::abs(u))};
  } else {
    const double lam = std::sqrt(u * upr);
    e.eigenvalue_pos = {lam, 0.0};
    e.eigenvalue_neg = {-lam, 0.0};
    e.axis1 = {1.0, lam / u};    // eigenvector of +sqrt(uu')
    e.axis2 = {1.0, -lam / u};
  }
  return e;
}

Point unconstrained_state(const Game& game, const Point& start, double t) {
  const UParams up = u_params(game);
  const double eps = classify_eps(game);
  const bool u_zero = std::abs(up.u) <= eps;
  const bool upr_zero = std::abs(up.u_prime) <= eps;
  const double a0 = start[0], b0 = start[1];

  if (u_zero && upr_zero) {
    // Constant-velocity flow.
    return Point{a0 - up.b_r * t, b0 - up.b_c * t};
  }
  if (u_zero) {
    // alpha moves at constant slope; beta integrates the resulting affine
    // derivative u'*alpha(t) - b_c.
    const double a = a0 - up.b_r * t;
    const double b = b0 + (up.u_prime * a0 - up.b_c) * t -
                     0.5 * up.u_prime * up.b_r * t * t;
    return Point{a, b};
  }
  if (upr_zero) {
    const double b = b0 - up.b_c * t;
    const double a = a0 + (up.u * b0 - up.b_r) * t - 0.5 * up.u * up.b_c * t * t;
    return Point{a, b};
  }

  const double ac = up.b_c / up.u_prime;
  const double bc = up.b_r / up.u;
  const double da0 = a0 - ac, db0 = b0 - bc;
  const double prod = up.u * up.u_prime;
  if (prod < 0.0) {
    const double w = std::sqrt(-prod);
    const double c = std::cos(w * t), s = std::sin(w * t);
    return Point{ac + da0 * c + (up.u * db0 / w) * s,
                 bc + db0 * c + (up.u_prime * da0 / w) * s};
  }
  const double lam = std::sqrt(prod);
  const double ch = std::cosh(lam * t), sh = std::sinh(lam * t);
  return Point{ac + da0 * ch + (up.u * db0 / lam) * sh,
               bc + db0 * ch + (up.u_prime * da0 / lam) * sh};
}

OutcomePrediction predict_outcome(const Game& game, const StrategyPair& start) {
  const UParams up = u_params(game);
  const double eps = classify_eps(game);
  const GradientVector pg = projected_gradient(game, start);
  if (std::abs(pg.d_alpha) <= eps && std::abs(pg.d_beta) <= eps) {
    return converge_to(game, start);  // already a fixed point
  }

  const DynamicsClass d = classify(game);

  if (d.regime == Regime::NonInvertible) {
    const bool u_zero = std::abs(up.u) <= eps;
    const bool upr_zero = std::abs(up.u_prime) <= eps;
    if (u_zero && upr_zero) {
      return converge_to(game, StrategyPair(limit_coord(-up.b_r, start.alpha, eps),
                                            limit_coord(-up.b_c, start.beta, eps)));
    }
    if (u_zero) {
      // alpha settles first under its constant gradient, then beta follows
      // the now-constant column gradient.
      const double af = limit_coord(-up.b_r, start.alpha, eps);
      const double bf = limit_coord(up.u_prime * af - up.b_c, start.beta, eps);
      return converge_to(game, StrategyPair(af, bf));
    }
    const double bf = limit_coord(-up.b_c, start.beta, eps);
    const double af = limit_coord(up.u * bf - up.b_r, start.alpha, eps);
    return converge_to(game, StrategyPair(af, bf));
  }

  const double ac = (*d.center)[0], bc = (*d.center)[1];

  if (d.regime == Regime::ImaginaryEigen) {
    if (d.center_location == CenterLocation::Interior) {
      const StrategyPair c(ac, bc);
      return OutcomePrediction{OutcomeKind::LimitCycle, std::nullopt, d.center,
                               value_row(game, c), value_col(game, c)};
    }
    if (d.center_location == CenterLocation::OnBoundary) {
      // The flow stops somewhere on the zero-projected-gradient segment
      // adjacent to the center; the center itself is the representative.
      return converge_to(game, StrategyPair(std::clamp(ac, 0.0, 1.0),
                                            std::clamp(bc, 0.0, 1.0)));
    }
    // Center outside: at least one coordinate's derivative has constant
    // sign over the square, so convergence is sequential.
    if (ac <= 0.0 || ac >= 1.0) {
      const double bf = limit_coord(up.u_prime * 0.5 - up.b_c, start.beta, eps);
      const double af = limit_coord(up.u * bf - up.b_r, start.alpha, eps);
      return converge_to(game, StrategyPair(af, bf));
    }
    const double af = limit_coord(up.u * 0.5 - up.b_r, start.alpha, eps);
    const double bf = limit_coord(up.u_prime * af - up.b_c, start.beta, eps);
    return converge_to(game, StrategyPair(af, bf));
  }

  // Real eigenvalues.
  if (ac <= 0.0 || ac >= 1.0 || bc <= 0.0 || bc >= 1.0) {
    // Square on one side of the center in at least one coordinate:
    // sequential convergence, independent of the start.
    if (ac <= 0.0 || ac >= 1.0) {
      const double bf = limit_coord(up.u_prime * 0.5 - up.b_c, start.beta, eps);
      const double af = limit_coord(up.u * bf - up.b_r, start.alpha, eps);
      return converge_to(game, StrategyPair(af, bf));
    }
    const double af = limit_coord(up.u * 0.5 - up.b_r, start.alpha, eps);
    const double bf = limit_coord(up.u_prime * af - up.b_c, start.beta, eps);
    return converge_to(game, StrategyPair(af, bf));
  }

  // Center interior: the saddle's unstable direction decides the corner.
  const double lam = std::sqrt(up.u * up.u_prime);
  const double m = lam / up.u;  // slope of the unstable eigenvector
  const double da = start.alpha - ac, db = start.beta - bc;
  const double w = m * da + db;  // proportional to the unstable component
  if (std::abs(w) <= eps) {
    // Start on the stable eigenline: the flow runs into the center.
    return converge_to(game, StrategyPair(ac, bc));
  }
  const double cplus = w / (2.0 * m);
  const double s = cplus > 0.0 ? 1.0 : -1.0;
  return converge_to(game, StrategyPair(s > 0.0 ? 1.0 : 0.0,
                                        s * m > 0.0 ? 1.0 : 0.0));
}

double conserved_quantity(const Game& game, const Point& p) {
  const DynamicsClass d = classify(game);
  if (d.regime != Regime::ImaginaryEigen) {
    throw std::domain_error("conserved quantity defined only for the imaginary regime");
  }
  const double da = p[0] - (*d.center)[0];
  const double db = p[1] - (*d.center)[1];
  return std::abs(d.u_prime) * da * da + std::abs(d.u) * db * db;
}

double absorbing_ellipse_q(const Game& game) {
  const DynamicsClass d = classify(game);
  if (d.regime != Regime::ImaginaryEigen) {
    throw std::domain_error("absorbing ellipse defined only for the imaginary regime");
  }
  const double ac = (*d.center)[0], bc = (*d.center)[1];
  const double au = std::abs(d.u), aup = std::abs(d.u_prime);
  return std::min({aup * ac * ac, aup * (1.0 - ac) * (1.0 - ac),
                   au * bc * bc, au * (1.0 - bc) * (1.0 - bc)});
}

double orbit_period(const Game& game) {
  const DynamicsClass d = classify(game);
  if (d.regime != Regime::ImaginaryEigen) {
    throw std::domain_error("orbit period defined only for the imaginary regime");
  }
  return 2.0 * M_PI / std::sqrt(std::abs(d.u) * std::abs(d.u_prime));
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::NonInvertible: return "NonInvertible";
    case Regime::ImaginaryEigen: return "ImaginaryEigen";
    case Regime::RealEigen: return "RealEigen";
  }
  return "?";
}

const char* to_string(CenterLocation c) {
  switch (c) {
    case CenterLocation::Interior: return "Interior";
    case CenterLocation::OnBoundary: return "OnBoundary";
    case CenterLocation::Outside: return "Outside";
  }
  return "?";
}

const char* to_string(OutcomeKind k) {
  return k == OutcomeKind::ConvergeToPoint ? "ConvergeToPoint" : "LimitCycle";
}

nlohmann::json dynamics_class_to_json(const DynamicsClass& d) {
  nlohmann::json j;
  j["regime"] = to_string(d.regime);
  j["u"] = d.u;
  j["u_prime"] = d.u_prime;
  if (d.center) {
    j["center"] = {(*d.center)[0], (*d.center)[1]};
    j["center_location"] = to_string(d.center_location);
  } else {
    j["center"] = nullptr;
  }
  return j;
}

nlohmann::json eigenstructure_to_json(const EigenStructure& e) {
  nlohmann::json j;
  j["eigenvalues"] = {{e.eigenvalue_pos.real(), e.eigenvalue_pos.imag()},
                      {e.eigenvalue_neg.real(), e.eigenvalue_neg.imag()}};
  j["axis_vectors"] = {{e.axis1[0], e.axis1[1]}, {e.axis2[0], e.axis2[1]}};
  return j;
}

nlohmann::json outcome_prediction_to_json(const OutcomePrediction& p) {
  nlohmann::json j;
  j["kind"] = to_string(p.kind);
  if (p.target) j["target"] = {{"alpha", p.target->alpha}, {"beta", p.target->beta}};
  if (p.cycle_center) j["cycle_center"] = {(*p.cycle_center)[0], (*p.cycle_center)[1]};
  j["predicted_avg_payoffs"] = {p.predicted_avg_row, p.predicted_avg_col};
  return j;
}

}  // namespace iga
