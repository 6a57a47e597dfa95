#pragma once

#include <vector>

#include "iga/game.hpp"

namespace iga {

enum class NashKind { PurePure, InteriorMixed, BoundaryMixed };

struct NashPoint {
  StrategyPair strategy;
  double payoff_row;
  double payoff_col;
  NashKind kind;
};

// A segment of strategy pairs that are all Nash (one per indifferent face).
// Both endpoints lie on the same face of the unit square.
struct NashSegment {
  StrategyPair a;
  StrategyPair b;
  // Payoffs at the endpoints; payoffs vary affinely along the segment.
  double payoff_a_row, payoff_a_col;
  double payoff_b_row, payoff_b_col;
};

struct NashSet {
  std::vector<NashPoint> points;
  bool has_continuum = false;
  std::vector<NashSegment> segments;  // empty unless has_continuum
};

// True iff neither player can gain more than tol by a unilateral deviation.
// Checking the two pure deviations suffices: each player's value is affine
// in their own variable.
bool is_nash(const Game& game, const StrategyPair& s, double tol);

// Closed-form enumeration of the Nash set of a 2x2 game: pure profiles,
// the interior mixed point, boundary mixed points, and face continua.
NashSet enumerate_nash(const Game& game);

// Euclidean distance in payoff space from (avg_row, avg_col) to the
// nearest Nash payoff pair (continuum payoff segments included).
double nearest_nash_payoff_distance(const NashSet& set, double avg_row,
                                    double avg_col);
double nearest_nash_payoff_distance(const Game& game, double avg_row,
                                    double avg_col);

// L-infinity distance in strategy space from s to the nearest Nash
// strategy (continuum segments included).
double nearest_nash_strategy_distance(const NashSet& set,
                                      const StrategyPair& s);

const char* to_string(NashKind k);
nlohmann::json nash_set_to_json(const NashSet& set);

}  // namespace iga
