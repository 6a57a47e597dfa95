// Command-line front end: classify game dynamics, enumerate Nash equilibria,
// simulate gradient-ascent play, dump phase-portrait data, and run seeded
// random-game sweeps.
//
// Exit codes: 0 success, 2 usage/input error, 3 internal defect.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iga/dynamics.hpp"
#include "iga/game.hpp"
#include "iga/nash.hpp"
#include "iga/simulate.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

iga::StrategyPair parse_start(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw UsageError("--start must be 'alpha,beta'");
  }
  try {
    const double a = std::stod(text.substr(0, comma));
    const double b = std::stod(text.substr(comma + 1));
    return iga::StrategyPair(a, b);
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid --start: ") + e.what());
  }
}

iga::SimMode parse_mode(const std::string& mode) {
  if (mode == "iga") return iga::SimMode::IgaEuler;
  if (mode == "finite") return iga::SimMode::FiniteStep;
  throw UsageError("--mode must be 'iga' or 'finite'");
}

// Named schedules for FiniteStep mode; "k^-2/3" is the default, and
// "pow:<e>" selects k^(-e).
iga::Schedule parse_schedule(const std::string& name) {
  if (name == "k^-2/3" || name.empty()) return iga::power_schedule();
  if (name.rfind("pow:", 0) == 0) {
    try {
      return iga::power_schedule(std::stod(name.substr(4)));
    } catch (const std::exception&) {
      throw UsageError("invalid --schedule exponent");
    }
  }
  throw UsageError("unknown --schedule: " + name);
}

int cmd_classify(const std::string& game_path) {
  const iga::Game game = iga::load_game_file(game_path);
  const iga::DynamicsClass d = iga::classify(game);
  nlohmann::json out = iga::dynamics_class_to_json(d);
  if (d.regime != iga::Regime::NonInvertible) {
    out["eigenstructure"] = iga::eigenstructure_to_json(iga::eigenstructure(game));
  } else {
    out["eigenstructure"] = nullptr;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_nash(const std::string& game_path) {
  const iga::Game game = iga::load_game_file(game_path);
  std::cout << iga::nash_set_to_json(iga::enumerate_nash(game)).dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& game_path, const std::string& start_text,
                 const std::string& mode, std::uint64_t steps, double dt,
                 const std::string& schedule, const std::string& out_csv,
                 std::uint64_t record_every, double conv_tol,
                 std::uint64_t window) {
  const iga::Game game = iga::load_game_file(game_path);
  iga::StrategyPair start = [&] {
    try {
      return parse_start(start_text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();

  iga::SimConfig cfg;
  cfg.mode = parse_mode(mode);
  cfg.dt = dt;
  cfg.schedule = parse_schedule(schedule);
  cfg.max_steps = steps;
  cfg.record_every = record_every;
  cfg.conv_tol = conv_tol;
  cfg.window = window;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const iga::RunResult result = iga::run(game, start, cfg);
  if (!out_csv.empty()) iga::write_trajectory_csv(result.trajectory, out_csv);
  std::cout << iga::run_summary_to_json(result.summary).dump(2) << "\n";
  return 0;
}

int cmd_phase(const std::string& game_path, int grid, const std::string& out_csv) {
  if (grid < 2) throw UsageError("--grid must be at least 2");
  const iga::Game game = iga::load_game_file(game_path);
  std::ofstream out(out_csv);
  if (!out) throw UsageError("cannot open output file: " + out_csv);
  out << "alpha,beta,d_alpha,d_beta\n";
  char buf[160];
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double a = static_cast<double>(i) / (grid - 1);
      const double b = static_cast<double>(j) / (grid - 1);
      const iga::GradientVector g =
          iga::projected_gradient(game, iga::StrategyPair(a, b));
      std::snprintf(buf, sizeof(buf), "%.15g,%.15g,%.15g,%.15g\n", a, b,
                    g.d_alpha, g.d_beta);
      out << buf;
    }
  }
  return 0;
}

int cmd_sweep(int count, std::uint64_t seed, const std::string& mode,
              std::uint64_t steps, double dt, const std::string& schedule,
              bool serial) {
  if (count < 1) throw UsageError("--count must be at least 1");
  iga::SimConfig cfg;
  cfg.mode = parse_mode(mode);
  cfg.dt = dt;
  cfg.schedule = parse_schedule(schedule);
  cfg.max_steps = steps;
  const iga::SweepReport rep = iga::sweep(seed, count, cfg, !serial);
  std::cout << iga::sweep_report_to_json(rep).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-ascent dynamics in 2x2 general-sum games"};
  app.require_subcommand(1);

  std::string game_path, start_text = "0.5,0.5", mode = "iga";
  std::string schedule = "k^-2/3", out_csv;
  std::uint64_t steps = 200000, record_every = 10, window = 1000, seed = 0;
  double dt = 1e-4, conv_tol = 1e-3;
  int grid = 21, count = 100;
  bool serial = false;

  auto* classify = app.add_subcommand("classify", "Dynamics regime and eigenstructure");
  classify->add_option("game", game_path, "Game JSON file")->required();

  auto* nash = app.add_subcommand("nash", "Enumerate the Nash set");
  nash->add_option("game", game_path, "Game JSON file")->required();

  auto* simulate = app.add_subcommand("simulate", "Run gradient-ascent play");
  simulate->add_option("game", game_path, "Game JSON file")->required();
  simulate->add_option("--start", start_text, "Start 'alpha,beta'");
  simulate->add_option("--mode", mode, "iga | finite");
  simulate->add_option("--steps", steps, "Maximum steps");
  simulate->add_option("--dt", dt, "Euler step (iga mode)");
  simulate->add_option("--schedule", schedule, "Step schedule (finite mode)");
  simulate->add_option("--out", out_csv, "Trajectory CSV path");
  simulate->add_option("--record-every", record_every, "Sample interval (steps)");
  simulate->add_option("--conv-tol", conv_tol, "Detector tolerance");
  simulate->add_option("--window", window, "Detector window (steps)");

  auto* phase = app.add_subcommand("phase", "Projected-gradient field on a lattice");
  phase->add_option("game", game_path, "Game JSON file")->required();
  phase->add_option("--grid", grid, "Lattice size per axis (>= 2)");
  phase->add_option("--out", out_csv, "Output CSV path")->required();

  auto* sweep = app.add_subcommand("sweep", "Seeded random-game convergence sweep");
  sweep->add_option("--count", count, "Number of games");
  sweep->add_option("--seed", seed, "Generator seed");
  sweep->add_option("--mode", mode, "iga | finite");
  sweep->add_option("--steps", steps, "Steps per run");
  sweep->add_option("--dt", dt, "Euler step (iga mode)");
  sweep->add_option("--schedule", schedule, "Step schedule (finite mode)");
  sweep->add_flag("--serial", serial, "Disable the parallel sweep loop");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) return cmd_classify(game_path);
    if (nash->parsed()) return cmd_nash(game_path);
    if (simulate->parsed())
      return cmd_simulate(game_path, start_text, mode, steps, dt, schedule,
                          out_csv, record_every, conv_tol, window);
    if (phase->parsed()) return cmd_phase(game_path, grid, out_csv);
    if (sweep->parsed())
      return cmd_sweep(count, seed, mode, steps, dt, schedule, serial);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const iga::NonFiniteStateError& e) {
    std::cerr << "defect: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "defect: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
