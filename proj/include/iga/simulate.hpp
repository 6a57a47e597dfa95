#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iga/game.hpp"
#include "iga/nash.hpp"

namespace iga {

enum class SimMode { IgaEuler, FiniteStep };

// Step-size rule for FiniteStep mode; must be positive, decreasing and
// non-summable. The default is k^(-2/3).
using Schedule = std::function<double(std::uint64_t)>;
Schedule power_schedule(double exponent = 2.0 / 3.0);

struct SimConfig {
  SimMode mode = SimMode::IgaEuler;
  double dt = 1e-4;                       // IgaEuler step
  Schedule schedule = power_schedule();   // FiniteStep step sizes
  std::uint64_t max_steps = 200000;
  std::uint64_t record_every = 10;
  double conv_tol = 1e-3;
  std::uint64_t window = 1000;            // steps examined by the detectors
  std::uint64_t seed = 0;                 // used only for random starts

  void validate() const;
};

struct TrajectorySample {
  std::uint64_t step;
  double time;
  double alpha, beta;
  double v_row, v_col;
  double avg_row, avg_col;  // running averages over [0, time]
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

enum class Verdict { ConvergedToPoint, LimitCycleDetected, Undecided };

struct RunSummary {
  Verdict verdict;
  StrategyPair final_strategy;
  double avg_row, avg_col;
  double nash_payoff_distance;
  double nash_strategy_distance;  // meaningful for ConvergedToPoint
  std::uint64_t steps_used;
};

struct RunResult {
  Trajectory trajectory;
  RunSummary summary;
};

// Signals a non-finite state during integration; the projected flow is
// bounded, so this is always a defect.
struct NonFiniteStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One forward-Euler step of the projected flow, clamped to the square.
StrategyPair step_iga(const Game& game, const StrategyPair& s, double dt);

// One finite-step update with step size schedule(k), k >= 1.
StrategyPair step_finite(const Game& game, const StrategyPair& s,
                         std::uint64_t k, const Schedule& schedule);

RunResult run(const Game& game, const StrategyPair& start, const SimConfig& cfg);

// Final running-average payoffs of a non-empty trajectory.
std::pair<double, double> average_payoffs(const Trajectory& traj);

// Running-average accumulator shared by both modes: time-weighted
// trapezoids for IgaEuler, per-step arithmetic mean for FiniteStep.
class PayoffAverager {
 public:
  PayoffAverager(SimMode mode, double v_row0, double v_col0);
  void add(double dt, double v_row, double v_col);
  double avg_row() const;
  double avg_col() const;
  double elapsed() const { return elapsed_; }  // time (IGA) or step count

 private:
  SimMode mode_;
  double int_row_, int_col_;  // integrals (or sums)
  double prev_row_, prev_col_;
  double elapsed_;
};

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

struct SweepRunRecord {
  int game_index;
  int start_index;
  double start_alpha, start_beta;
  Verdict verdict;
  double nash_payoff_distance;
};

struct SweepReport {
  std::uint64_t seed;
  int n_games;
  // regime counts over the generated games
  int count_non_invertible = 0;
  int count_imaginary = 0;
  int count_real = 0;
  int count_converged = 0;
  int count_limit_cycle = 0;
  int count_undecided = 0;
  // per-game distance = max over the standard starts
  double max_nash_payoff_distance = 0.0;
  double mean_nash_payoff_distance = 0.0;
  double median_nash_payoff_distance = 0.0;
  std::vector<SweepRunRecord> worst;        // top offenders, sorted
  std::vector<double> per_game_distance;    // indexed by game
};

// The deterministic start set used by the sweep: four near-corner points
// and the centroid.
const std::vector<StrategyPair>& standard_starts();

// Entries of the generated games are i.i.d. uniform on [-1, 1].
Game random_game(std::uint64_t sweep_seed, int game_index);

// Runs every generated game from every standard start. Results are
// aggregated by game index, so the report is identical whether or not the
// runs execute in parallel.
SweepReport sweep(std::uint64_t seed, int n_games, const SimConfig& cfg,
                  bool parallel = true);

const char* to_string(Verdict v);
const char* to_string(SimMode m);
nlohmann::json run_summary_to_json(const RunSummary& s);
nlohmann::json sweep_report_to_json(const SweepReport& r);

}  // namespace iga
