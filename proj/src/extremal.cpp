#include "subcert/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subcert/errors.hpp"

namespace subcert {

namespace {

constexpr double kDistinctFloor = 1e-8;  // cluster means may never sit closer

struct DefectScan {
  double value = -1.0;
  int i = -1;
  int j = -1;
};

inline bool scan_better(const DefectScan& a, const DefectScan& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

inline double pair_defect(const Vec2& u, const Vec2& v) {
  return u.norm() + v.norm() - (u + v).norm();
}

DefectScan scan_defect(const std::vector<Vec2>& vs, bool parallel) {
  const int n = static_cast<int>(vs.size());
  DefectScan best;
#pragma omp parallel if (parallel && n >= 96)
  {
    DefectScan local;
#pragma omp for schedule(static, 1) nowait
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n; ++j) {
        const DefectScan cand{pair_defect(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)]), i, j};
        if (scan_better(cand, local)) local = cand;
      }
#pragma omp critical
    if (scan_better(local, best)) best = local;
  }
  return best;
}

int uf_find(std::vector<int>& parent, int i) {
  while (parent[static_cast<size_t>(i)] != i) {
    parent[static_cast<size_t>(i)] = parent[static_cast<size_t>(parent[static_cast<size_t>(i)])];
    i = parent[static_cast<size_t>(i)];
  }
  return i;
}

/// Shared recognizer for row squares and polygon edges: both carry total
/// magnitude 2 and must split into exactly three clusters obeying the
/// magnitude law 1/(2n) + 1/(2m).
std::optional<ClusterStructure> detect_clusters(const std::vector<Vec2>& vs,
                                                double tol) {
  const int n = static_cast<int>(vs.size());
  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((vs[static_cast<size_t>(i)] - vs[static_cast<size_t>(j)]).norm() <= tol) {
        const int ri = uf_find(parent, i);
        const int rj = uf_find(parent, j);
        if (ri != rj) parent[static_cast<size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }

  std::vector<std::vector<int>> clusters;
  std::vector<int> root_slot(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = uf_find(parent, i);
    if (root_slot[static_cast<size_t>(r)] < 0) {
      root_slot[static_cast<size_t>(r)] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<size_t>(root_slot[static_cast<size_t>(r)])].push_back(i);
  }
  if (clusters.size() != 3) return std::nullopt;

  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a.front() < b.front();
                   });

  Vec2 mean[3];
  for (int c = 0; c < 3; ++c) {
    Vec2 sum{0.0, 0.0};
    for (const int k : clusters[static_cast<size_t>(c)]) sum = sum + vs[static_cast<size_t>(k)];
    mean[c] = sum * (1.0 / static_cast<double>(clusters[static_cast<size_t>(c)].size()));
    for (const int k : clusters[static_cast<size_t>(c)])
      if ((vs[static_cast<size_t>(k)] - mean[c]).norm() > 10.0 * tol) return std::nullopt;
    const double law = 1.0 / (2.0 * n) + 1.0 / (2.0 * static_cast<double>(clusters[static_cast<size_t>(c)].size()));
    if (std::abs(mean[c].norm() - law) > 10.0 * tol) return std::nullopt;
  }
  for (int c = 0; c < 3; ++c)
    if ((mean[c] - mean[(c + 1) % 3]).norm() <= kDistinctFloor) return std::nullopt;

  ClusterStructure s;
  s.p = static_cast<int>(clusters[0].size());
  s.q = static_cast<int>(clusters[1].size());
  s.r = static_cast<int>(clusters[2].size());
  s.x = mean[0];
  s.y = mean[1];
  s.z = mean[2];
  s.assignment.assign(static_cast<size_t>(n), -1);
  for (int c = 0; c < 3; ++c)
    for (const int k : clusters[static_cast<size_t>(c)]) s.assignment[static_cast<size_t>(k)] = c;
  return s;
}

}  // namespace

ExtremalFamily construct_extremal(int n, int p, int q, int r,
                                  double orientation) {
  if (n < 3 || p < 1 || q < 1 || r < 1 || p + q + r != n)
    throw ParamError("composition must satisfy p, q, r >= 1 and p + q + r = n >= 3; got n=" +
                     std::to_string(n) + " parts " + std::to_string(p) + "+" +
                     std::to_string(q) + "+" + std::to_string(r));

  const double lp = p / (2.0 * n) + 0.5;
  const double lq = q / (2.0 * n) + 0.5;
  const double lr = r / (2.0 * n) + 0.5;
  // Interior turn between the first two sides, from the side lengths. The
  // triangle inequality holds strictly for every composition, so the clamp
  // only absorbs rounding.
  const double c = std::clamp((lr * lr - lp * lp - lq * lq) / (2.0 * lp * lq), -1.0, 1.0);
  const double phi = std::acos(c);

  const Vec2 s1{lp, 0.0};
  const Vec2 s2{lq * std::cos(phi), lq * std::sin(phi)};
  const Vec2 s3 = -(s1 + s2);  // closes the triangle exactly

  ClusterStructure cs;
  cs.p = p;
  cs.q = q;
  cs.r = r;
  cs.x = s1 * (1.0 / p);
  cs.y = s2 * (1.0 / q);
  cs.z = s3 * (1.0 / r);
  cs.assignment.assign(static_cast<size_t>(n), 2);
  std::fill_n(cs.assignment.begin(), p, 0);
  std::fill_n(cs.assignment.begin() + p, q, 1);

  std::vector<Vec2> rows;
  rows.reserve(static_cast<size_t>(n));
  const Vec2 reps[3] = {sqrt_principal(cs.x), sqrt_principal(cs.y), sqrt_principal(cs.z)};
  for (int i = 0; i < n; ++i) rows.push_back(reps[cs.assignment[static_cast<size_t>(i)]]);

  StiefelMatrix a = StiefelMatrix::validate(std::move(rows));
  if (orientation != 0.0) {
    a = rotate_right(a, orientation);
    cs.x = rotate_vec(cs.x, 2.0 * orientation);
    cs.y = rotate_vec(cs.y, 2.0 * orientation);
    cs.z = rotate_vec(cs.z, 2.0 * orientation);
  }
  return ExtremalFamily{std::move(a), std::move(cs)};
}

std::optional<ClusterStructure> detect_equality(const StiefelMatrix& a,
                                                double tol) {
  return detect_clusters(row_squares(a).w, tol);
}

PolygonInstance PolygonInstance::from_vectors(std::vector<Vec2> vs) {
  if (vs.size() < 3)
    throw ValidationError("polygon needs at least 3 edges, got " + std::to_string(vs.size()));
  double perimeter = 0.0;
  for (const Vec2& v : vs) {
    if (!v.finite()) throw ValidationError("polygon edge is not finite");
    perimeter += v.norm();
  }
  if (!(perimeter > 1e-14)) throw ValidationError("polygon perimeter vanishes");
  const double scale = 2.0 / perimeter;
  Vec2 closure{0.0, 0.0};
  for (Vec2& v : vs) {
    v = v * scale;
    closure = closure + v;
  }
  if (closure.norm() > 1e-9)
    throw ValidationError("polygon does not close: residual " + std::to_string(closure.norm()) +
                          " after normalization");
  return PolygonInstance(std::move(vs));
}

PolygonDefect polygon_defect(const PolygonInstance& poly) {
  const DefectScan best = scan_defect(poly.vectors(), true);
  return PolygonDefect{best.value, best.i, best.j};
}

std::optional<ClusterStructure> polygon_equality_classify(
    const PolygonInstance& poly, double tol) {
  return detect_clusters(poly.vectors(), tol);
}

namespace serial_ref {

PolygonDefect polygon_defect(const PolygonInstance& poly) {
  const DefectScan best = scan_defect(poly.vectors(), false);
  return PolygonDefect{best.value, best.i, best.j};
}

}  // namespace serial_ref

}  // namespace subcert
