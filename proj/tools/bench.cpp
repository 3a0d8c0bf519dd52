// Timing harness: production (OpenMP-parallel) kernels against the serial
// reference implementations that back the test suite. Each row reports the
// best wall time of several repetitions and an agreement check between the
// two implementations.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "subcert/extremal.hpp"
#include "subcert/selector.hpp"
#include "subcert/spectral.hpp"
#include "subcert/stiefel.hpp"

using namespace subcert;

namespace {

template <class F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void print_row(const char* op, int n, double serial_ms, double parallel_ms,
               const char* agreement) {
  std::printf("%-14s %6d %12.3f %12.3f %9.2fx   %s\n", op, n, serial_ms,
              parallel_ms, serial_ms / parallel_ms, agreement);
}

std::vector<Vec2> closed_polygon(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> vs;
  Vec2 sum{0.0, 0.0};
  for (int i = 0; i + 1 < n; ++i) {
    const Vec2 v{u(gen), u(gen)};
    vs.push_back(v);
    sum = sum + v;
  }
  vs.push_back(-sum);
  return vs;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial build)\n\n");
#endif
  std::printf("%-14s %6s %12s %12s %10s   %s\n", "operation", "n", "serial ms",
              "parallel ms", "speedup", "agreement");

  {
    const int n = 600;
    const StiefelMatrix a = sample_haar(n, 17);
    PairCertificate s{}, p{};
    const double ts = best_ms([&] { s = serial_ref::brute_force_best(a); }, 5);
    const double tp = best_ms([&] { p = brute_force_best(a); }, 5);
    print_row("pair scan", n, ts, tp,
              (s.i == p.i && s.j == p.j && s.sigma2 == p.sigma2)
                  ? "bitwise identical"
                  : "MISMATCH");
  }

  {
    const int n = 600;
    const RowSquares rs = row_squares(sample_haar(n, 18));
    SymMatrix ms(1), mp(1);
    const double ts = best_ms([&] { ms = serial_ref::build_M(rs); }, 5);
    const double tp = best_ms([&] { mp = build_M(rs); }, 5);
    bool same = true;
    for (int i = 0; i < n && same; ++i)
      for (int j = 0; j <= i && same; ++j) same = ms.at(i, j) == mp.at(i, j);
    print_row("build M", n, ts, tp, same ? "bitwise identical" : "MISMATCH");
  }

  {
    const int n = 192;
    const SymMatrix m = build_M(row_squares(sample_haar(n, 19)));
    SymmetricSpectrum ss, sp;
    const double ts = best_ms([&] { ss = serial_ref::eigen(m, false); }, 3);
    const double tp = best_ms([&] { sp = eigen(m, false); }, 3);
    double max_diff = 0.0;
    for (int i = 0; i < n; ++i)
      max_diff = std::max(max_diff,
                          std::abs(ss.eigenvalues[static_cast<size_t>(i)] -
                                   sp.eigenvalues[static_cast<size_t>(i)]));
    char agree[64];
    std::snprintf(agree, sizeof agree, "max |dlambda| = %.2e", max_diff);
    print_row("jacobi eigen", n, ts, tp, agree);
  }

  {
    const int n = 600;
    const PolygonInstance poly =
        PolygonInstance::from_vectors(closed_polygon(n, 20));
    PolygonDefect ds{}, dp{};
    const double ts = best_ms([&] { ds = serial_ref::polygon_defect(poly); }, 5);
    const double tp = best_ms([&] { dp = polygon_defect(poly); }, 5);
    print_row("polygon defect", n, ts, tp,
              (ds.i == dp.i && ds.j == dp.j && ds.value == dp.value)
                  ? "bitwise identical"
                  : "MISMATCH");
  }

  return 0;
}
