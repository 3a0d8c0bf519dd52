#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "subcert/errors.hpp"
#include "subcert/extremal.hpp"
#include "subcert/selector.hpp"

using namespace subcert;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(Vec2 a, Vec2 b, double tol) { return (a - b).norm() <= tol; }

// Closed random polygon: n - 1 bounded random edges plus the closing edge,
// redrawn whenever the closing edge degenerates.
std::vector<Vec2> random_closed_polygon(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<Vec2> vs;
    Vec2 sum{0.0, 0.0};
    for (int i = 0; i + 1 < n; ++i) {
      const Vec2 v{u(gen), u(gen)};
      vs.push_back(v);
      sum = sum + v;
    }
    vs.push_back(-sum);
    if (sum.norm() > 1e-3) return vs;
  }
}

}  // namespace

TEST_CASE("construct: n = 3 composition (1,1,1) is the equilateral family") {
  const ExtremalFamily f = construct_extremal(3, 1, 1, 1);
  CHECK(f.structure.p == 1);
  CHECK(f.structure.assignment == std::vector<int>{0, 1, 2});

  const double m = 2.0 / 3.0;
  CHECK(close(f.structure.x, {m, 0.0}, 1e-15));
  CHECK(close(f.structure.y, {m * std::cos(2.0 * kPi / 3.0), m * std::sin(2.0 * kPi / 3.0)}, 1e-15));
  CHECK(close(f.structure.z, {m * std::cos(4.0 * kPi / 3.0), m * std::sin(4.0 * kPi / 3.0)}, 1e-15));

  const double r = std::sqrt(m);
  CHECK(close(f.matrix.row(0), {r, 0.0}, 1e-15));
  CHECK(close(f.matrix.row(1), {r * std::cos(kPi / 3.0), r * std::sin(kPi / 3.0)}, 1e-15));
  CHECK(close(f.matrix.row(2), {r * std::cos(2.0 * kPi / 3.0), r * std::sin(2.0 * kPi / 3.0)}, 1e-15));

  const PairCertificate c = certify_pair(f.matrix);
  CHECK(c.sigma2 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("construct: composition (2,1,1) of n = 4, exact dyadic sides") {
  const ExtremalFamily f = construct_extremal(4, 2, 1, 1);
  CHECK(f.structure.p == 2);
  CHECK(f.structure.q == 1);
  CHECK(f.structure.r == 1);
  CHECK(f.structure.assignment == std::vector<int>{0, 0, 1, 2});

  // Side lengths 3/4, 5/8, 5/8 close a 3-4-5-shaped triangle with exactly
  // representable coordinates.
  CHECK(close(f.structure.x, {3.0 / 8.0, 0.0}, 1e-15));
  CHECK(close(f.structure.y, {-3.0 / 8.0, 0.5}, 1e-15));
  CHECK(close(f.structure.z, {-3.0 / 8.0, -0.5}, 1e-15));

  const RowSquares rs = row_squares(f.matrix);
  CHECK(close(rs.w[0], f.structure.x, 1e-14));
  CHECK(close(rs.w[1], f.structure.x, 1e-14));
  CHECK(close(rs.w[2], f.structure.y, 1e-14));
  CHECK(close(rs.w[3], f.structure.z, 1e-14));
  CHECK(rs.magnitudes[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(rs.magnitudes[2] == doctest::Approx(5.0 / 8.0).epsilon(1e-14));

  const PairCertificate c = certify_pair(f.matrix);
  CHECK(c.path == ProofPath::CaseB);
  REQUIRE(c.caseB_value.has_value());
  CHECK(std::abs(*c.caseB_value) <= 1e-12);
  CHECK(c.sigma2 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.structure.assignment[static_cast<size_t>(c.i)] !=
        f.structure.assignment[static_cast<size_t>(c.j)]);

  // Every cross-cluster pair sits exactly on the bound.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (f.structure.assignment[static_cast<size_t>(i)] !=
          f.structure.assignment[static_cast<size_t>(j)])
        CHECK(sigma2_of_pair(f.matrix.row(i), f.matrix.row(j)) ==
              doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("construct: composition (3,1,1) of n = 5") {
  const ExtremalFamily f = construct_extremal(5, 3, 1, 1);
  // Sides 4/5, 3/5, 3/5; the lone-cluster squares land at (-2/5, +-sqrt(5)/5).
  const double s5 = std::sqrt(5.0) / 5.0;
  CHECK(close(f.structure.x, {4.0 / 15.0, 0.0}, 1e-15));
  CHECK(close(f.structure.y, {-0.4, s5}, 1e-15));
  CHECK(close(f.structure.z, {-0.4, -s5}, 1e-15));

  const RowSquares rs = row_squares(f.matrix);
  CHECK(rs.magnitudes[0] == doctest::Approx(4.0 / 15.0).epsilon(1e-14));
  CHECK(rs.magnitudes[3] == doctest::Approx(3.0 / 5.0).epsilon(1e-14));

  const PairCertificate c = certify_pair(f.matrix);
  CHECK(c.path == ProofPath::CaseB);
  CHECK(c.sigma2 == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("construct: orientation rotates rows once and squares twice") {
  const ExtremalFamily base = construct_extremal(4, 2, 1, 1);
  const ExtremalFamily turned = construct_extremal(4, 2, 1, 1, 0.7);

  CHECK(close(turned.structure.x, rotate_vec(base.structure.x, 1.4), 1e-14));
  CHECK(close(turned.matrix.row(0), rotate_vec(base.matrix.row(0), 0.7), 1e-14));

  const RowSquares rs = row_squares(turned.matrix);
  CHECK(close(rs.w[0], turned.structure.x, 1e-13));
  CHECK(close(rs.w[2], turned.structure.y, 1e-13));
  CHECK(close(rs.w[3], turned.structure.z, 1e-13));

  const PairCertificate c = certify_pair(turned.matrix);
  CHECK(c.sigma2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("construct: bad compositions are rejected") {
  CHECK_THROWS_AS(construct_extremal(4, 2, 1, 0), ParamError);
  CHECK_THROWS_AS(construct_extremal(4, 2, 2, 1), ParamError);
  CHECK_THROWS_AS(construct_extremal(2, 1, 1, 0), ParamError);
  CHECK_THROWS_AS(construct_extremal(3, 5, -1, -1), ParamError);
}

TEST_CASE("detect: recovers every sorted composition through n = 8") {
  for (int n = 3; n <= 8; ++n)
    for (int p = n - 2; p >= 1; --p)
      for (int q = std::min(p, n - p - 1); q >= 1; --q) {
        const int r = n - p - q;
        if (r < 1 || r > q) continue;
        const ExtremalFamily f = construct_extremal(n, p, q, r, 0.3);
        const auto d = detect_equality(f.matrix);
        REQUIRE(d.has_value());
        CHECK(d->p == p);
        CHECK(d->q == q);
        CHECK(d->r == r);
        CHECK(d->assignment == f.structure.assignment);
        CHECK(close(d->x, f.structure.x, 1e-10));
        CHECK(close(d->y, f.structure.y, 1e-10));
        CHECK(close(d->z, f.structure.z, 1e-10));
      }
}

TEST_CASE("detect: near-misses are turned away") {
  // Zero rows give three clusters but break the magnitude law.
  std::vector<Vec2> id5(5, Vec2{0.0, 0.0});
  id5[0] = {1.0, 0.0};
  id5[1] = {0.0, 1.0};
  CHECK(!detect_equality(StiefelMatrix::validate(std::move(id5))).has_value());

  // Generic samples do not cluster at all.
  CHECK(!detect_equality(sample_haar(8, 53)).has_value());
  CHECK(!detect_equality(sample_haar(3, 53)).has_value());

  // Two square values only.
  const StiefelMatrix flat = StiefelMatrix::validate(
      {{0.5, 0.5}, {0.5, -0.5}, {0.5, 0.5}, {0.5, -0.5}});
  CHECK(!detect_equality(flat).has_value());

  // A 1e-3 kick spreads the squares far beyond the cluster gate.
  const ExtremalFamily f = construct_extremal(6, 3, 2, 1);
  std::vector<Vec2> rows = f.matrix.rows();
  rows[1].x += 1e-3;
  rows[4].y -= 1e-3;
  const StiefelMatrix bumped = reorthonormalize(rows);
  CHECK(!detect_equality(bumped).has_value());
  // ... and the perturbed best pair rises strictly above the bound.
  const PairCertificate c = certify_pair(bumped);
  CHECK(brute_force_best(bumped).sigma2 > c.bound);
  CHECK(c.sigma2 >= c.bound - 1e-10);

  // A generous tolerance swallows the kick again.
  CHECK(detect_equality(bumped, 1e-2).has_value());
}

TEST_CASE("polygon: normalization and gates") {
  const PolygonInstance sq = PolygonInstance::from_vectors(
      {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}});
  CHECK(sq.n() == 4);
  CHECK(close(sq.vector(0), {0.5, 0.0}, 1e-15));
  CHECK(close(sq.vector(3), {0.0, -0.5}, 1e-15));

  CHECK_THROWS_AS(PolygonInstance::from_vectors({{1.0, 0.0}, {-1.0, 0.0}}),
                  ValidationError);
  CHECK_THROWS_AS(PolygonInstance::from_vectors(
                      {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}),
                  ValidationError);
  CHECK_THROWS_AS(PolygonInstance::from_vectors(
                      {{1.0, 0.0}, {0.0, 1.0}, {-1.0, std::nan("")}}),
                  ValidationError);
  // Residual 1e-8 before scaling stays above the closure gate here...
  CHECK_THROWS_AS(PolygonInstance::from_vectors(
                      {{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0 + 1e-8}}),
                  ValidationError);
  // ... while 1e-10 passes.
  CHECK_NOTHROW(PolygonInstance::from_vectors(
      {{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0 + 1e-10}}));
}

TEST_CASE("polygon: defect worked values") {
  const PolygonInstance sq = PolygonInstance::from_vectors(
      {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}});
  const PolygonDefect d = polygon_defect(sq);
  // Opposite edges cancel: defect 1; adjacent edges only reach 1 - sqrt(2)/2.
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.i == 0);
  CHECK(d.j == 2);

  const double adj = 1.0 - std::sqrt(2.0) / 2.0;
  CHECK(sq.vector(0).norm() + sq.vector(1).norm() - (sq.vector(0) + sq.vector(1)).norm() ==
        doctest::Approx(adj).epsilon(1e-14));

  const PolygonInstance tri = PolygonInstance::from_vectors(
      {{1.0, 0.0},
       {std::cos(2.0 * kPi / 3.0), std::sin(2.0 * kPi / 3.0)},
       {std::cos(4.0 * kPi / 3.0), std::sin(4.0 * kPi / 3.0)}});
  CHECK(polygon_defect(tri).value == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(polygon_equality_classify(tri).has_value());
}

TEST_CASE("polygon: serial reference agrees bitwise") {
  for (const int n : {6, 48, 130}) {
    const PolygonInstance poly = PolygonInstance::from_vectors(
        random_closed_polygon(n, 7000 + static_cast<std::uint64_t>(n)));
    const PolygonDefect a = polygon_defect(poly);
    const PolygonDefect b = serial_ref::polygon_defect(poly);
    CHECK(a.value == b.value);
    CHECK(a.i == b.i);
    CHECK(a.j == b.j);
  }
}

TEST_CASE("polygon: defect bridges to the best pair of a matrix") {
  for (int n = 3; n <= 12; ++n) {
    const PolygonInstance poly = PolygonInstance::from_vectors(
        random_closed_polygon(n, 4100 + static_cast<std::uint64_t>(n)));

    // The polygon edges are realizable as row squares: take principal roots.
    std::vector<Vec2> rows;
    for (const Vec2& v : poly.vectors()) rows.push_back(sqrt_principal(v));
    const StiefelMatrix a = StiefelMatrix::validate(std::move(rows));

    const PolygonDefect d = polygon_defect(poly);
    const PairCertificate b = brute_force_best(a);
    CHECK(std::abs(d.value - 2.0 * b.sigma2 * b.sigma2) <= 1e-12);
    CHECK(d.value >= 2.0 / n - 1e-10);
  }
}

TEST_CASE("polygon: classification round-trips the families and rejects n-gons") {
  for (const auto& comp : std::vector<std::array<int, 4>>{
           {4, 2, 1, 1}, {6, 4, 1, 1}, {7, 3, 2, 2}, {12, 10, 1, 1}}) {
    const ExtremalFamily f = construct_extremal(comp[0], comp[1], comp[2], comp[3], 0.9);
    const PolygonInstance poly = PolygonInstance::from_vectors(row_squares(f.matrix).w);
    const auto cls = polygon_equality_classify(poly);
    REQUIRE(cls.has_value());
    CHECK(cls->p == comp[1]);
    CHECK(cls->q == comp[2]);
    CHECK(cls->r == comp[3]);
    CHECK(polygon_defect(poly).value == doctest::Approx(2.0 / comp[0]).epsilon(1e-12));
  }

  for (const int n : {4, 5, 9}) {
    std::vector<Vec2> gon;
    for (int k = 0; k < n; ++k)
      gon.push_back({std::cos(2.0 * kPi * k / n), std::sin(2.0 * kPi * k / n)});
    CHECK(!polygon_equality_classify(PolygonInstance::from_vectors(std::move(gon))).has_value());
  }
}
