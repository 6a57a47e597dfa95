#include "iga/nash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iga {

namespace {

// Indifference tolerance, relative to matrix scale. Keeps classification
// deterministic for integer matrices while tolerating round-off in
// generated games.
double scale_eps(const Game& g) { return 1e-12 * std::max(g.scale(), 1.0); }

struct Interval {
  double lo = 0.0;
  double hi = -1.0;  // empty by default
  bool empty() const { return lo > hi; }
};

// Solves {x in [0,1] : sign * (slope * x - offset) >= -eps}.
Interval solve_weak_halfline(double slope, double offset, double sign,
                             double eps) {
  // Condition: sign*(slope*x - offset) >= -eps.
  if (std::abs(slope) <= eps) {
    if (sign * (-offset) >= -eps) return Interval{0.0, 1.0};
    return Interval{};
  }
  const double x0 = offset / slope;
  if (sign * slope > 0.0) {
    // x >= x0
    if (x0 > 1.0) return Interval{};
    return Interval{std::max(0.0, x0), 1.0};
  }
  // x <= x0
  if (x0 < 0.0) return Interval{};
  return Interval{0.0, std::min(1.0, x0)};
}

bool near(const StrategyPair& a, const StrategyPair& b, double tol) {
  return std::abs(a.alpha - b.alpha) <= tol && std::abs(a.beta - b.beta) <= tol;
}

void add_point(NashSet& set, const Game& g, const StrategyPair& s,
               NashKind kind) {
  for (const auto& p : set.points) {
    if (near(p.strategy, s, 1e-9)) return;
  }
  set.points.push_back(NashPoint{s, value_row(g, s), value_col(g, s), kind});
}

double dist2(double x0, double y0, double x1, double y1) {
  return std::hypot(x1 - x0, y1 - y0);
}

// Euclidean distance from (px,py) to the segment (ax,ay)-(bx,by).
double point_segment_distance(double px, double py, double ax, double ay,
                              double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  return dist2(px, py, ax + t * dx, ay + t * dy);
}

// L-infinity distance from s to the segment; the objective in the segment
// parameter is convex (max of two |affine| terms), so ternary search works.
double linf_segment_distance(const StrategyPair& s, const NashSegment& seg) {
  auto f = [&](double t) {
    const double x = seg.a.alpha + t * (seg.b.alpha - seg.a.alpha);
    const double y = seg.a.beta + t * (seg.b.beta - seg.a.beta);
    return std::max(std::abs(x - s.alpha), std::abs(y - s.beta));
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

bool is_nash(const Game& game, const StrategyPair& s, double tol) {
  const double vr = value_row(game, s);
  const double vc = value_col(game, s);
  const double vr0 = value_row(game, StrategyPair(0.0, s.beta));
  const double vr1 = value_row(game, StrategyPair(1.0, s.beta));
  const double vc0 = value_col(game, StrategyPair(s.alpha, 0.0));
  const double vc1 = value_col(game, StrategyPair(s.alpha, 1.0));
  return std::max(vr0, vr1) <= vr + tol && std::max(vc0, vc1) <= vc + tol;
}

NashSet enumerate_nash(const Game& game) {
  NashSet set;
  const UParams up = u_params(game);
  const double eps = scale_eps(game);

  // (a) pure profiles: a corner is Nash iff each player's own gradient
  // points weakly outward there.
  for (int ai = 0; ai <= 1; ++ai) {
    for (int bi = 0; bi <= 1; ++bi) {
      const double a = ai, b = bi;
      const double da = b * up.u - up.b_r;
      const double db = a * up.u_prime - up.b_c;
      const bool row_ok = (ai == 1) ? da >= 0.0 : da <= 0.0;
      const bool col_ok = (bi == 1) ? db >= 0.0 : db <= 0.0;
      if (row_ok && col_ok) add_point(set, game, StrategyPair(a, b), NashKind::PurePure);
    }
  }

  // (b) interior mixed point: the center of the affine field, when U is
  // invertible and the center is strictly inside the square.
  if (std::abs(up.u) > eps && std::abs(up.u_prime) > eps) {
    const double ac = up.b_c / up.u_prime;
    const double bc = up.b_r / up.u;
    if (ac > 0.0 && ac < 1.0 && bc > 0.0 && bc < 1.0) {
      add_point(set, game, StrategyPair(ac, bc), NashKind::InteriorMixed);
    }
  }

  // (c)/(d) faces where one player is indifferent: the other player's
  // best-response condition carves out an interval on the face.
  struct FaceResult {
    Interval iv;
    bool horizontal;  // true: beta fixed, alpha varies
    double fixed;
  };
  std::vector<FaceResult> faces;
  for (int bi = 0; bi <= 1; ++bi) {
    const double b = bi;
    if (std::abs(b * up.u - up.b_r) <= eps) {
      // Row indifferent along beta = b; need column's b to be a weak best
      // response: sign * (u' * alpha - b_c) >= 0 with sign = +1 for b=1.
      const double sign = (bi == 1) ? 1.0 : -1.0;
      faces.push_back({solve_weak_halfline(up.u_prime, up.b_c, sign, eps), true, b});
    }
  }
  for (int ai = 0; ai <= 1; ++ai) {
    const double a = ai;
    if (std::abs(a * up.u_prime - up.b_c) <= eps) {
      const double sign = (ai == 1) ? 1.0 : -1.0;
      faces.push_back({solve_weak_halfline(up.u, up.b_r, sign, eps), false, a});
    }
  }
  for (const auto& f : faces) {
    if (f.iv.empty()) continue;
    auto mk = [&](double v) {
      return f.horizontal ? StrategyPair(v, f.fixed) : StrategyPair(f.fixed, v);
    };
    if (f.iv.hi - f.iv.lo >= 1e-9) {
      const StrategyPair pa = mk(f.iv.lo), pb = mk(f.iv.hi);
      set.segments.push_back(NashSegment{pa, pb, value_row(game, pa),
                                         value_col(game, pa),
                                         value_row(game, pb),
                                         value_col(game, pb)});
      add_point(set, game, mk(f.iv.lo),
                (f.iv.lo == 0.0 || f.iv.lo == 1.0) ? NashKind::PurePure
                                                   : NashKind::BoundaryMixed);
      add_point(set, game, mk(f.iv.hi),
                (f.iv.hi == 0.0 || f.iv.hi == 1.0) ? NashKind::PurePure
                                                   : NashKind::BoundaryMixed);
    } else {
      const double v = 0.5 * (f.iv.lo + f.iv.hi);
      if (v > 0.0 && v < 1.0) add_point(set, game, mk(v), NashKind::BoundaryMixed);
    }
  }
  set.has_continuum = !set.segments.empty();

  if (set.points.empty()) {
    // Every 2x2 game has a Nash pair; an empty enumeration is a defect.
    throw std::logic_error("enumerate_nash produced an empty Nash set");
  }
  return set;
}

double nearest_nash_payoff_distance(const NashSet& set, double avg_row,
                                    double avg_col) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set.points) {
    best = std::min(best, dist2(avg_row, avg_col, p.payoff_row, p.payoff_col));
  }
  for (const auto& seg : set.segments) {
    // The payoff image of a face segment is itself a segment.
    best = std::min(best, point_segment_distance(
                              avg_row, avg_col, seg.payoff_a_row, seg.payoff_a_col,
                              seg.payoff_b_row, seg.payoff_b_col));
  }
  return best;
}

double nearest_nash_payoff_distance(const Game& game, double avg_row,
                                    double avg_col) {
  return nearest_nash_payoff_distance(enumerate_nash(game), avg_row, avg_col);
}

double nearest_nash_strategy_distance(const NashSet& set,
                                      const StrategyPair& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set.points) {
    best = std::min(best, std::max(std::abs(p.strategy.alpha - s.alpha),
                                   std::abs(p.strategy.beta - s.beta)));
  }
  for (const auto& seg : set.segments) {
    best = std::min(best, linf_segment_distance(s, seg));
  }
  return best;
}

const char* to_string(NashKind k) {
  switch (k) {
    case NashKind::PurePure: return "PurePure";
    case NashKind::InteriorMixed: return "InteriorMixed";
    case NashKind::BoundaryMixed: return "BoundaryMixed";
  }
  return "?";
}

nlohmann::json nash_set_to_json(const NashSet& set) {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const auto& p : set.points) {
    j["points"].push_back({{"alpha", p.strategy.alpha},
                           {"beta", p.strategy.beta},
                           {"payoff_row", p.payoff_row},
                           {"payoff_col", p.payoff_col},
                           {"kind", to_string(p.kind)}});
  }
  j["has_continuum"] = set.has_continuum;
  if (set.has_continuum) {
    j["segments"] = nlohmann::json::array();
    for (const auto& s : set.segments) {
      j["segments"].push_back({{"a", {{"alpha", s.a.alpha}, {"beta", s.a.beta}}},
                               {"b", {{"alpha", s.b.alpha}, {"beta", s.b.beta}}}});
    }
  }
  return j;
}

}  // namespace iga
