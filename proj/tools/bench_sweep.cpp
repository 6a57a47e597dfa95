// Compares the serial and OpenMP sweep paths: wall time and report equality.

#include <chrono>
#include <cstdio>

#include "iga/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
  int n_games = argc > 1 ? std::atoi(argv[1]) : 50;
  iga::SimConfig cfg;
  cfg.max_steps = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 200000;

  auto timed = [&](bool parallel) {
    const auto t0 = std::chrono::steady_clock::now();
    const iga::SweepReport rep = iga::sweep(12345, n_games, cfg, parallel);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    return std::pair(rep, secs);
  };

#ifdef _OPENMP
  std::printf("omp max threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP\n");
#endif
  auto [serial_rep, serial_s] = timed(false);
  auto [parallel_rep, parallel_s] = timed(true);
  std::printf("games=%d steps=%llu\n", n_games,
              static_cast<unsigned long long>(cfg.max_steps));
  std::printf("serial:   %.3f s\n", serial_s);
  std::printf("parallel: %.3f s  (speedup %.2fx)\n", parallel_s,
              serial_s / parallel_s);

  const bool identical =
      sweep_report_to_json(serial_rep) == sweep_report_to_json(parallel_rep);
  std::printf("reports identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
