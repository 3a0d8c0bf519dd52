#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <numbers>
#include <random>

#include "subcert/spectral.hpp"

using namespace subcert;

namespace {

constexpr double kPi = std::numbers::pi;

StiefelMatrix three_cluster() {
  const double r = std::sqrt(2.0 / 3.0);
  return StiefelMatrix::validate({{r, 0.0},
                                  {r * std::cos(kPi / 3.0), r * std::sin(kPi / 3.0)},
                                  {r * std::cos(2.0 * kPi / 3.0), r * std::sin(2.0 * kPi / 3.0)}});
}

SymMatrix random_sym(int n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> g(0.0, scale);
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) s.set(i, j, g(eng));
  return s;
}

double max_abs(const SymMatrix& s) {
  double m = 0.0;
  for (int i = 0; i < s.n(); ++i)
    for (int j = 0; j <= i; ++j) m = std::max(m, std::fabs(s.at(i, j)));
  return m;
}

// |Q diag(lambda) Q^T - S|_max
double reconstruction_gap(const SymMatrix& s, const SymmetricSpectrum& sp) {
  REQUIRE(sp.eigenvectors.has_value());
  const int n = s.n();
  const std::vector<double>& v = *sp.eigenvectors;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += v[static_cast<size_t>(i) * n + k] * sp.eigenvalues[static_cast<size_t>(k)] *
               v[static_cast<size_t>(j) * n + k];
      worst = std::max(worst, std::fabs(acc - s.at(i, j)));
    }
  return worst;
}

double orthogonality_gap(const SymmetricSpectrum& sp, int n) {
  const std::vector<double>& v = *sp.eigenvectors;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += v[static_cast<size_t>(k) * n + a] * v[static_cast<size_t>(k) * n + b];
      worst = std::max(worst, std::fabs(acc - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("build_G: three identical-magnitude squares at 120 degrees") {
  const SymMatrix g = build_G(row_squares(three_cluster()));
  for (int i = 0; i < 3; ++i) CHECK(g.at(i, i) == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) CHECK(g.at(i, j) == doctest::Approx(-2.0 / 9.0).epsilon(1e-13));
  CHECK(g.trace() == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("build_G: kernel and trace identities on random samples") {
  for (int n : {3, 7, 24}) {
    const RowSquares rs = row_squares(sample_haar(n, 100 + static_cast<std::uint64_t>(n)));
    const SymMatrix g = build_G(rs);
    CHECK(row_sum_residual(g, 0.0) < 1e-9);
    CHECK(std::fabs(g.trace() - 4.0 / n) < 1e-9);
    const SymmetricSpectrum sp = eigen(g);
    CHECK(sp.positive_count <= 2);
    double sum = 0.0;
    for (double v : sp.eigenvalues) sum += v;
    CHECK(std::fabs(sum - 4.0 / n) < 1e-8);
  }
}

TEST_CASE("build_M: shifted kernel, row sums, worked entries") {
  const SymMatrix m = build_M(row_squares(three_cluster()));
  for (int i = 0; i < 3; ++i) CHECK(m.at(i, i) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) CHECK(std::fabs(m.at(i, j)) < 1e-15);

  for (int n : {3, 7, 24}) {
    const RowSquares rs = row_squares(sample_haar(n, 200 + static_cast<std::uint64_t>(n)));
    CHECK(row_sum_residual(build_M(rs), 2.0 / n) < 1e-9);
    // a nonpositive off-diagonal entry always exists
    CHECK(min_offdiag(build_M(rs)) <= 1e-12);
  }
}

TEST_CASE("parallel and reference builders emit identical matrices") {
  for (int n : {5, 300}) {
    const RowSquares rs = row_squares(sample_haar(n, 300 + static_cast<std::uint64_t>(n)));
    const SymMatrix a = build_G(rs), b = serial_ref::build_G(rs);
    const SymMatrix c = build_M(rs), d = serial_ref::build_M(rs);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        CHECK(a.at(i, j) == b.at(i, j));
        CHECK(c.at(i, j) == d.at(i, j));
      }
  }
}

TEST_CASE("eigen: diagonal input comes back sorted") {
  SymMatrix s(3);
  s.set(0, 0, 3.0);
  s.set(1, 1, 1.0);
  s.set(2, 2, 2.0);
  const SymmetricSpectrum sp = eigen(s);
  CHECK(sp.eigenvalues[0] == 3.0);
  CHECK(sp.eigenvalues[1] == 2.0);
  CHECK(sp.eigenvalues[2] == 1.0);
  CHECK(sp.positive_count == 3);
}

TEST_CASE("eigen: reconstruction, orthogonality, trace across orders") {
  for (int n : {1, 2, 3, 5, 16, 64, 128}) {
    const SymMatrix s = random_sym(n, 400 + static_cast<std::uint64_t>(n));
    const SymmetricSpectrum sp = eigen(s);
    const double scale = std::max(1.0, max_abs(s));
    CHECK(reconstruction_gap(s, sp) <= 1e-11 * scale);
    CHECK(orthogonality_gap(sp, n) <= 1e-12);
    double sum = 0.0;
    for (double v : sp.eigenvalues) sum += v;
    CHECK(std::fabs(sum - s.trace()) <= 1e-10 * std::max(1.0, std::fabs(s.trace())) * n);
    for (size_t k = 1; k < sp.eigenvalues.size(); ++k)
      CHECK(sp.eigenvalues[k - 1] >= sp.eigenvalues[k]);
  }
}

TEST_CASE("eigen: round-based and row-cyclic solvers agree") {
  for (int n : {2, 9, 33, 96}) {
    const SymMatrix s = random_sym(n, 500 + static_cast<std::uint64_t>(n));
    const SymmetricSpectrum a = eigen(s);
    const SymmetricSpectrum b = serial_ref::eigen(s);
    const double scale = std::max(1.0, max_abs(s));
    for (int k = 0; k < n; ++k)
      CHECK(std::fabs(a.eigenvalues[static_cast<size_t>(k)] - b.eigenvalues[static_cast<size_t>(k)]) <=
            1e-11 * scale);
    CHECK(a.positive_count == b.positive_count);
    CHECK(reconstruction_gap(s, b) <= 1e-11 * scale);
  }
}

#ifdef _OPENMP
TEST_CASE("eigen: result does not depend on thread count") {
  const SymMatrix s = random_sym(80, 600);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const SymmetricSpectrum one = eigen(s);
  omp_set_num_threads(std::max(saved, 3));
  const SymmetricSpectrum many = eigen(s);
  omp_set_num_threads(saved);
  REQUIRE(one.eigenvalues.size() == many.eigenvalues.size());
  for (size_t k = 0; k < one.eigenvalues.size(); ++k)
    CHECK(one.eigenvalues[k] == many.eigenvalues[k]);
  for (size_t k = 0; k < one.eigenvectors->size(); ++k)
    CHECK((*one.eigenvectors)[k] == (*many.eigenvectors)[k]);
}
#endif

TEST_CASE("eigen: three-cluster shifted matrix has flat spectrum 2/3") {
  const SymmetricSpectrum sp = eigen(build_M(row_squares(three_cluster())));
  for (int k = 0; k < 3; ++k)
    CHECK(sp.eigenvalues[static_cast<size_t>(k)] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(sp.positive_count == 3);
}

TEST_CASE("support_components") {
  SUBCASE("all-ones matrix is one block") {
    SymMatrix s(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) s.set(i, j, 1.0);
    const auto comps = support_components(s);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0] == std::vector<int>{0, 1, 2});
  }
  SUBCASE("diagonal matrix splits into singletons") {
    const auto comps = support_components(build_M(row_squares(three_cluster())));
    REQUIRE(comps.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(comps[static_cast<size_t>(i)].size() == 1);
      CHECK(comps[static_cast<size_t>(i)][0] == i);
    }
  }
  SUBCASE("entries below -tol are rejected") {
    SymMatrix s(3);
    s.set(1, 0, -1e-6);
    CHECK_THROWS_AS((void)support_components(s), ValidationError);
    CHECK_NOTHROW((void)support_components(s, 1e-5));  // within a looser tol
  }
  SUBCASE("edges need to clear tol") {
    SymMatrix s(4);
    s.set(1, 0, 1e-9);  // below default tol: no edge
    s.set(3, 2, 1e-3);
    const auto comps = support_components(s);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == std::vector<int>{0});
    CHECK(comps[1] == std::vector<int>{1});
    CHECK(comps[2] == std::vector<int>{2, 3});
  }
}

TEST_CASE("min_offdiag reports the lexicographically first minimizer") {
  SymMatrix s(3);
  s.set(1, 0, -2.0);
  s.set(2, 0, -2.0);
  int i = -1, j = -1;
  CHECK(min_offdiag(s, &i, &j) == -2.0);
  CHECK(i == 0);
  CHECK(j == 1);
}
