#include "iga/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "iga/dynamics.hpp"

namespace iga {

namespace {

// SplitMix64; fixed algorithm so sweeps are reproducible across platforms
// and standard libraries.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) {
  return 2.0 * ((splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

double linf(const TrajectorySample& a, const TrajectorySample& b) {
  return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

// Distance from the final state to the polyline segment between two recorded
// samples; recorded samples can be farther apart than the recurrence ball, so
// point-to-sample distance alone can miss a genuine return.
double segment_dist(const TrajectorySample& p, const TrajectorySample& a,
                    const TrajectorySample& b) {
  const double vx = b.alpha - a.alpha, vy = b.beta - a.beta;
  const double wx = p.alpha - a.alpha, wy = p.beta - a.beta;
  const double vv = vx * vx + vy * vy;
  const double c = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
  return std::hypot(wx - c * vx, wy - c * vy);
}

}  // namespace

Schedule power_schedule(double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw std::invalid_argument("schedule exponent must be in (0, 1]");
  }
  return [exponent](std::uint64_t k) {
    return std::pow(static_cast<double>(k), -exponent);
  };
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(conv_tol > 0.0)) throw std::invalid_argument("conv_tol must be positive");
  if (window < 2) throw std::invalid_argument("window must be at least 2");
  if (max_steps < window) throw std::invalid_argument("max_steps must be >= window");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (mode == SimMode::FiniteStep && !schedule) {
    throw std::invalid_argument("FiniteStep mode requires a schedule");
  }
}

StrategyPair step_iga(const Game& game, const StrategyPair& s, double dt) {
  const GradientVector g = projected_gradient(game, s);
  return StrategyPair(std::clamp(s.alpha + dt * g.d_alpha, 0.0, 1.0),
                      std::clamp(s.beta + dt * g.d_beta, 0.0, 1.0));
}

StrategyPair step_finite(const Game& game, const StrategyPair& s,
                         std::uint64_t k, const Schedule& schedule) {
  const double eta = schedule(k);
  const GradientVector g = projected_gradient(game, s);
  return StrategyPair(std::clamp(s.alpha + eta * g.d_alpha, 0.0, 1.0),
                      std::clamp(s.beta + eta * g.d_beta, 0.0, 1.0));
}

PayoffAverager::PayoffAverager(SimMode mode, double v_row0, double v_col0)
    : mode_(mode),
      int_row_(mode == SimMode::FiniteStep ? v_row0 : 0.0),
      int_col_(mode == SimMode::FiniteStep ? v_col0 : 0.0),
      prev_row_(v_row0),
      prev_col_(v_col0),
      elapsed_(mode == SimMode::FiniteStep ? 1.0 : 0.0) {}

void PayoffAverager::add(double dt, double v_row, double v_col) {
  if (mode_ == SimMode::IgaEuler) {
    int_row_ += dt * 0.5 * (prev_row_ + v_row);
    int_col_ += dt * 0.5 * (prev_col_ + v_col);
    elapsed_ += dt;
  } else {
    int_row_ += v_row;
    int_col_ += v_col;
    elapsed_ += 1.0;
  }
  prev_row_ = v_row;
  prev_col_ = v_col;
}

double PayoffAverager::avg_row() const {
  if (mode_ == SimMode::IgaEuler && elapsed_ == 0.0) return prev_row_;
  return int_row_ / elapsed_;
}

double PayoffAverager::avg_col() const {
  if (mode_ == SimMode::IgaEuler && elapsed_ == 0.0) return prev_col_;
  return int_col_ / elapsed_;
}

RunResult run(const Game& game, const StrategyPair& start, const SimConfig& cfg) {
  cfg.validate();
  const DynamicsClass dyn = classify(game);

  StrategyPair s = start;
  double t = 0.0;
  PayoffAverager avg(cfg.mode, value_row(game, s), value_col(game, s));

  Trajectory traj;
  traj.samples.reserve(cfg.max_steps / cfg.record_every + 2);
  auto record = [&](std::uint64_t step) {
    traj.samples.push_back(TrajectorySample{step, t, s.alpha, s.beta,
                                            value_row(game, s), value_col(game, s),
                                            avg.avg_row(), avg.avg_col()});
  };
  record(0);

  Verdict verdict = Verdict::Undecided;
  std::uint64_t consecutive_small = 0;
  std::uint64_t steps_used = cfg.max_steps;
  std::uint64_t last_clamp_step = 0;

  for (std::uint64_t k = 1; k <= cfg.max_steps; ++k) {
    const GradientVector pg = projected_gradient(game, s);
    if (std::max(std::abs(pg.d_alpha), std::abs(pg.d_beta)) < cfg.conv_tol) {
      if (++consecutive_small >= cfg.window) {
        verdict = Verdict::ConvergedToPoint;
        steps_used = k;
        break;
      }
    } else {
      consecutive_small = 0;
    }

    const double h = (cfg.mode == SimMode::IgaEuler) ? cfg.dt : cfg.schedule(k);
    const double ra = s.alpha + h * pg.d_alpha;
    const double rb = s.beta + h * pg.d_beta;
    const double a = std::clamp(ra, 0.0, 1.0);
    const double b = std::clamp(rb, 0.0, 1.0);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw NonFiniteStateError("non-finite state at step " + std::to_string(k));
    }
    if (a != ra || b != rb) last_clamp_step = k;
    s = StrategyPair(a, b);
    t += h;
    avg.add(h, value_row(game, s), value_col(game, s));
    if (k % cfg.record_every == 0) record(k);
    steps_used = k;
  }
  if (traj.samples.back().step != steps_used) record(steps_used);

  // Running averages from t=0 drag the start-up transient along forever; the
  // summary reports the limit of the running average instead, which is exact
  // for a converged run (payoff at the fixed point) and measurable for a
  // detected cycle (average over one traversal of the loop).
  double avg_row = avg.avg_row();
  double avg_col = avg.avg_col();
  if (verdict == Verdict::ConvergedToPoint) {
    avg_row = value_row(game, s);
    avg_col = value_col(game, s);
  }

  if (verdict == Verdict::Undecided && dyn.regime == Regime::ImaginaryEigen &&
      traj.samples.size() >= 3) {
    // Limit-cycle detection: the final state re-enters a neighborhood of an
    // earlier recorded sample, the loop has non-trivial diameter, and the
    // running averages have stabilized. Gated on the imaginary regime,
    // where cycles are the only non-convergent outcome.
    const TrajectorySample& fin = traj.samples.back();
    auto elapsed_at = [&](const TrajectorySample& smp) {
      return cfg.mode == SimMode::IgaEuler ? smp.time
                                           : static_cast<double>(smp.step) + 1.0;
    };
    // suffix_diam[j] = max distance from the final state over samples j..end
    const std::size_t n = traj.samples.size();
    std::vector<double> suffix_diam(n);
    suffix_diam[n - 1] = 0.0;
    for (std::size_t j = n - 1; j-- > 0;) {
      suffix_diam[j] = std::max(suffix_diam[j + 1], linf(traj.samples[j], fin));
    }
    const double range = 4.0 * game.scale();  // bound on |V| over the square
    for (std::size_t j = n - 1; j-- > 0;) {
      const TrajectorySample& cand = traj.samples[j];
      if (fin.step - traj.samples[j + 1].step < cfg.window) continue;
      if (segment_dist(fin, cand, traj.samples[j + 1]) < cfg.conv_tol &&
          suffix_diam[j + 1] >= 10.0 * cfg.conv_tol) {
        // Average-payoff stabilization: over the closing loop the running
        // average may drift at most range * loop / total for any bounded
        // trajectory; a wandering average beyond that is not a cycle.
        const double ef = elapsed_at(fin), ej = elapsed_at(cand);
        const double drift_bound =
            range * (ef - ej) / ef + cfg.conv_tol;
        if (std::abs(fin.avg_row - cand.avg_row) > drift_bound ||
            std::abs(fin.avg_col - cand.avg_col) > drift_bound) {
          continue;
        }
        verdict = Verdict::LimitCycleDetected;
        // Average over the detected loop: an integer number of cycles,
        // free of the start-up transient.
        avg_row = (fin.avg_row * ef - cand.avg_row * ej) / (ef - ej);
        avg_col = (fin.avg_col * ef - cand.avg_col * ej) / (ef - ej);
        break;
      }
    }
  }

  // Ellipse capture: slow orbits may not close within the step budget, so the
  // recurrence scan finds nothing. But if the state sits strictly inside the
  // absorbing ellipse and has not touched the boundary for a full window, the
  // flow from here is a closed interior ellipse and its average payoff is the
  // payoff at the center.
  if (verdict == Verdict::Undecided && dyn.regime == Regime::ImaginaryEigen &&
      dyn.center_location == CenterLocation::Interior &&
      steps_used >= cfg.window && last_clamp_step + cfg.window <= steps_used) {
    const Point p{s.alpha, s.beta};
    if (conserved_quantity(game, p) <
        absorbing_ellipse_q(game) * (1.0 - 1e-9)) {
      verdict = Verdict::LimitCycleDetected;
      avg_row = value_row(game, StrategyPair((*dyn.center)[0], (*dyn.center)[1]));
      avg_col = value_col(game, StrategyPair((*dyn.center)[0], (*dyn.center)[1]));
    }
  }

  const NashSet nash = enumerate_nash(game);
  RunSummary summary{verdict,
                     s,
                     avg_row,
                     avg_col,
                     nearest_nash_payoff_distance(nash, avg_row, avg_col),
                     nearest_nash_strategy_distance(nash, s),
                     steps_used};
  return RunResult{std::move(traj), summary};
}

std::pair<double, double> average_payoffs(const Trajectory& traj) {
  if (traj.samples.empty()) {
    throw std::invalid_argument("average_payoffs: empty trajectory");
  }
  return {traj.samples.back().avg_row, traj.samples.back().avg_col};
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open CSV output file: " + path);
  out << "step,time,alpha,beta,v_row,v_col,avg_row,avg_col\n";
  char buf[256];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof(buf),
                  "%llu,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g\n",
                  static_cast<unsigned long long>(s.step), s.time, s.alpha,
                  s.beta, s.v_row, s.v_col, s.avg_row, s.avg_col);
    out << buf;
  }
}

const std::vector<StrategyPair>& standard_starts() {
  static const std::vector<StrategyPair> starts = {
      StrategyPair(0.05, 0.05), StrategyPair(0.05, 0.95),
      StrategyPair(0.95, 0.05), StrategyPair(0.95, 0.95),
      StrategyPair(0.5, 0.5)};
  return starts;
}

Game random_game(std::uint64_t sweep_seed, int game_index) {
  std::uint64_t state =
      sweep_seed ^ (0x9e3779b97f4a7c15ULL *
                    (static_cast<std::uint64_t>(game_index) + 1));
  splitmix64(state);  // decorrelate nearby indices
  double e[8];
  for (double& x : e) x = uniform_pm1(state);
  return Game{e[0], e[1], e[2], e[3], e[4], e[5], e[6], e[7]};
}

SweepReport sweep(std::uint64_t seed, int n_games, const SimConfig& cfg,
                  bool parallel) {
  if (n_games < 1) throw std::invalid_argument("sweep requires n_games >= 1");
  cfg.validate();

  const auto& starts = standard_starts();
  struct PerGame {
    Regime regime;
    std::vector<SweepRunRecord> records;
  };
  std::vector<PerGame> results(n_games);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n_games; ++i) {
    const Game g = random_game(seed, i);
    PerGame pg;
    pg.regime = classify(g).regime;
    for (int si = 0; si < static_cast<int>(starts.size()); ++si) {
      const RunResult r = run(g, starts[si], cfg);
      pg.records.push_back(SweepRunRecord{i, si, starts[si].alpha,
                                          starts[si].beta, r.summary.verdict,
                                          r.summary.nash_payoff_distance});
    }
    results[i] = std::move(pg);
  }

  // Aggregation is sequential and indexed by game, so the report does not
  // depend on the execution order of the parallel loop.
  SweepReport rep;
  rep.seed = seed;
  rep.n_games = n_games;
  rep.per_game_distance.resize(n_games, 0.0);
  std::vector<SweepRunRecord> all;
  for (int i = 0; i < n_games; ++i) {
    switch (results[i].regime) {
      case Regime::NonInvertible: ++rep.count_non_invertible; break;
      case Regime::ImaginaryEigen: ++rep.count_imaginary; break;
      case Regime::RealEigen: ++rep.count_real; break;
    }
    double worst = 0.0;
    for (const auto& rec : results[i].records) {
      switch (rec.verdict) {
        case Verdict::ConvergedToPoint: ++rep.count_converged; break;
        case Verdict::LimitCycleDetected: ++rep.count_limit_cycle; break;
        case Verdict::Undecided: ++rep.count_undecided; break;
      }
      worst = std::max(worst, rec.nash_payoff_distance);
      all.push_back(rec);
    }
    rep.per_game_distance[i] = worst;
    rep.max_nash_payoff_distance = std::max(rep.max_nash_payoff_distance, worst);
    rep.mean_nash_payoff_distance += worst;
  }
  rep.mean_nash_payoff_distance /= n_games;
  std::vector<double> sorted = rep.per_game_distance;
  std::sort(sorted.begin(), sorted.end());
  rep.median_nash_payoff_distance =
      (n_games % 2 == 1) ? sorted[n_games / 2]
                         : 0.5 * (sorted[n_games / 2 - 1] + sorted[n_games / 2]);

  std::sort(all.begin(), all.end(), [](const SweepRunRecord& a, const SweepRunRecord& b) {
    if (a.nash_payoff_distance != b.nash_payoff_distance)
      return a.nash_payoff_distance > b.nash_payoff_distance;
    if (a.game_index != b.game_index) return a.game_index < b.game_index;
    return a.start_index < b.start_index;
  });
  all.resize(std::min<std::size_t>(all.size(), 10));
  rep.worst = std::move(all);
  return rep;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergedToPoint: return "ConvergedToPoint";
    case Verdict::LimitCycleDetected: return "LimitCycleDetected";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

const char* to_string(SimMode m) {
  return m == SimMode::IgaEuler ? "IGA_Euler" : "FiniteStep";
}

nlohmann::json run_summary_to_json(const RunSummary& s) {
  return nlohmann::json{
      {"verdict", to_string(s.verdict)},
      {"final_strategy",
       {{"alpha", s.final_strategy.alpha}, {"beta", s.final_strategy.beta}}},
      {"avg_payoffs", {s.avg_row, s.avg_col}},
      {"nash_payoff_distance", s.nash_payoff_distance},
      {"nash_strategy_distance", s.nash_strategy_distance},
      {"steps_used", s.steps_used}};
}

nlohmann::json sweep_report_to_json(const SweepReport& r) {
  nlohmann::json worst = nlohmann::json::array();
  for (const auto& w : r.worst) {
    worst.push_back({{"game_index", w.game_index},
                     {"start", {w.start_alpha, w.start_beta}},
                     {"verdict", to_string(w.verdict)},
                     {"nash_payoff_distance", w.nash_payoff_distance}});
  }
  return nlohmann::json{
      {"seed", r.seed},
      {"n_games", r.n_games},
      {"regime_counts",
       {{"NonInvertible", r.count_non_invertible},
        {"ImaginaryEigen", r.count_imaginary},
        {"RealEigen", r.count_real}}},
      {"verdict_counts",
       {{"ConvergedToPoint", r.count_converged},
        {"LimitCycleDetected", r.count_limit_cycle},
        {"Undecided", r.count_undecided}}},
      {"max_nash_payoff_distance", r.max_nash_payoff_distance},
      {"mean_nash_payoff_distance", r.mean_nash_payoff_distance},
      {"median_nash_payoff_distance", r.median_nash_payoff_distance},
      {"worst", worst}};
}

}  // namespace iga
