// Serial vs OpenMP timings for the parallel kernels.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "dioph/archimedean.hpp"
#include "dioph/counting.hpp"
#include "dioph/local.hpp"
#include "dioph/singular.hpp"

using namespace dioph;

namespace {

double time_it(const std::function<void()>& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, const std::function<void(bool)>& kernel) {
  const double serial = time_it([&] { kernel(false); });
  const double parallel = time_it([&] { kernel(true); });
  std::printf("%-34s %10.4f %10.4f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n%-34s %10s %10s %9s\n", omp_get_max_threads(), "kernel", "serial s", "omp s", "speedup");
  const DiagonalForm f6(3, {3, -7, 11, 2, -5, 13});
  const DiagonalForm f8(3, {3, -7, 11, 2, -5, 13, 17, -19});

  row("count_solutions s=6 B=40", [&](bool par) {
    counting::CountOptions o;
    o.parallel = par;
    counting::count_solutions(f6, 40, counting::CountMode::vector_nonzero, o);
  });
  row("smallest_solution s=8 B=12", [&](bool par) {
    counting::CountOptions o;
    o.parallel = par;
    counting::smallest_solution(DiagonalForm(3, {101, -203, 307, 409, -511, 613, 717, -819}), 12, o);
  });
  row("xi_count k=3 s=5 A=32 B=4", [&](bool par) {
    counting::CountOptions o;
    o.parallel = par;
    counting::xi_count(3, 5, 32, 4, o);
  });
  row("local_report k=3 s=10 rigorous", [&](bool par) {
    local::LocalOptions o;
    o.parallel = par;
    local::local_report(DiagonalForm(3, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), o);
  });
  row("series_truncated Q=400", [&](bool par) {
    singular::SeriesOptions o;
    o.truncation = 400;
    o.parallel = par;
    singular::series_truncated(f8, o);
  });
  row("quadrature k=3 s=6", [&](bool par) {
    archimedean::QuadratureOptions o;
    o.parallel = par;
    archimedean::singular_integral_quadrature(f6, o);
  });
  row("slab MC 4e5 samples", [&](bool par) {
    archimedean::SlabOptions o;
    o.samples = 400'000;
    o.parallel = par;
    archimedean::singular_integral_slab_mc(f6, 1, o);
  });
  return 0;
}
