// Timing harness for the two parallel kernels: the per-critical-family scan
// inside family_stable and the Monte Carlo oracle. Runs each with the serial
// reference path (threads=1) and the OpenMP path (threads=0) and reports
// best-of-N wall times plus the verdict, which must match between modes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polystab/checker.hpp"
#include "polystab/critical_set.hpp"
#include "polystab/family.hpp"

using namespace polystab;

namespace {

MatrixFamily stable_family(int n) {
  // Diagonally dominant and stable: diagonal entries sweep {s+2, s+3},
  // off-diagonal couplings stay tiny.
  MatrixFamily f;
  f.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      PolytopicEntry e;
      if (i == j) {
        e.generators = {Polynomial{2.0, 1.0}, Polynomial{3.0, 1.0}};
      } else {
        e.generators = {Polynomial{0.02}, Polynomial{0.05}};
      }
      f.entries.push_back(e);
    }
  }
  return f;
}

template <typename F>
double best_of(int repeats, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 2;
  int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  if (n < 1 || n > 4 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_critical [n (1..4)] [repeats]\n");
    return 2;
  }

  MatrixFamily f = stable_family(n);
  Region r = Region::hurwitz();
  CheckerConfig cfg;
  cfg.boundary_count = 128;
  cfg.oracle_samples = 20000;

  std::uint64_t count = count_critical(f);
#ifdef _OPENMP
  int workers = omp_get_max_threads();
#else
  int workers = 1;
#endif
  std::printf("n=%d  critical families=%llu  workers available=%d\n", n,
              static_cast<unsigned long long>(count), workers);

  Verdict serial_v, parallel_v;
  cfg.threads = 1;
  double t_serial = best_of(repeats, [&] { serial_v = family_stable(f, r, cfg); });
  cfg.threads = 0;
  double t_parallel = best_of(repeats, [&] { parallel_v = family_stable(f, r, cfg); });
  std::printf("family_stable   serial %8.3fs   parallel %8.3fs   speedup %.2fx   verdicts %s/%s\n",
              t_serial, t_parallel, t_serial / t_parallel,
              to_string(serial_v.status).c_str(), to_string(parallel_v.status).c_str());
  if (serial_v.status != parallel_v.status) {
    std::fprintf(stderr, "verdict mismatch between serial and parallel scans\n");
    return 1;
  }

  cfg.threads = 1;
  double o_serial = best_of(repeats, [&] { serial_v = monte_carlo_oracle(f, r, cfg); });
  cfg.threads = 0;
  double o_parallel = best_of(repeats, [&] { parallel_v = monte_carlo_oracle(f, r, cfg); });
  std::printf("oracle          serial %8.3fs   parallel %8.3fs   speedup %.2fx   verdicts %s/%s\n",
              o_serial, o_parallel, o_serial / o_parallel,
              to_string(serial_v.status).c_str(), to_string(parallel_v.status).c_str());
  if (serial_v.status != parallel_v.status) {
    std::fprintf(stderr, "verdict mismatch between serial and parallel oracles\n");
    return 1;
  }
  return 0;
}
