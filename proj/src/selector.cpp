#include "subcert/selector.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace subcert {

namespace {

constexpr double kCertTol = 1e-10;    // final soundness slack
constexpr double kCaseBTol = 1e-9;    // a pair condition value must sit below this
constexpr double kChainTol = 1e-12;   // per-level elimination bound slack
constexpr double kZeroRowTol = 1e-13; // |b| below this counts as a zero row

struct PairScan {
  double value = 0.0;
  int i = -1;
  int j = -1;
};

// Strict total order: larger value wins, exact ties go to the smaller (i, j).
inline bool scan_better(const PairScan& a, const PairScan& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

PairScan scan_max_sigma2(const std::vector<Vec2>& rows, bool parallel) {
  const int n = static_cast<int>(rows.size());
  PairScan best{-1.0, -1, -1};
#pragma omp parallel if (parallel && n >= 96)
  {
    PairScan local{-1.0, -1, -1};
#pragma omp for schedule(static, 1) nowait
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n; ++j) {
        const PairScan cand{sigma2_of_pair(rows[static_cast<size_t>(i)], rows[static_cast<size_t>(j)]), i, j};
        if (scan_better(cand, local)) local = cand;
      }
#pragma omp critical
    if (scan_better(local, best)) best = local;
  }
  return best;
}

// Smallest pair condition value over i < j; same determinism contract as the
// sigma2 scan (total order, schedule-independent result).
PairScan scan_min_condition(const RowSquares& rs) {
  const int n = rs.n;
  std::vector<double> z(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<size_t>(i)] = rs.magnitudes[static_cast<size_t>(i)] - 2.0 / n;
  const double shift = 2.0 / (static_cast<double>(n) * n);

  PairScan best{0.0, -1, -1};
  bool have = false;
#pragma omp parallel if (n >= 96)
  {
    PairScan local{0.0, -1, -1};
    bool lhave = false;
#pragma omp for schedule(static, 1) nowait
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double m = dot(rs.w[static_cast<size_t>(i)], rs.w[static_cast<size_t>(j)]) -
                         z[static_cast<size_t>(i)] * z[static_cast<size_t>(j)] + shift;
        const PairScan cand{-m, i, j};  // negate: reuse the max order
        if (!lhave || scan_better(cand, local)) {
          local = cand;
          lhave = true;
        }
      }
#pragma omp critical
    if (lhave && (!have || scan_better(local, best))) {
      best = local;
      have = true;
    }
  }
  best.value = -best.value;
  return best;
}

PairCertificate certify_impl(const StiefelMatrix& a, int level) {
  const int n = a.n();
  const double bound = 1.0 / std::sqrt(static_cast<double>(n));

  if (n == 3) return brute_force_best(a);

  int m = 0;
  double min_norm2 = a.row(0).norm2();
  for (int i = 1; i < n; ++i) {
    const double v = a.row(i).norm2();
    if (v < min_norm2) {
      min_norm2 = v;
      m = i;
    }
  }

  if (min_norm2 <= 1.0 / n) {
    // Row elimination. Rotate the minimal row onto (b, 0), drop it, and
    // stretch the first column of the rest back to unit norm.
    const double b2 = min_norm2;
    const double b = std::sqrt(b2);
    std::vector<Vec2> rest;
    rest.reserve(static_cast<size_t>(n) - 1);
    if (b <= kZeroRowTol) {
      for (int i = 0; i < n; ++i)
        if (i != m) rest.push_back(a.row(i));
    } else {
      const double theta = -std::atan2(a.row(m).y, a.row(m).x);
      const StiefelMatrix rotated = rotate_right(a, theta);
      for (int i = 0; i < n; ++i)
        if (i != m) rest.push_back(rotated.row(i));
    }

    const double t = 1.0 / std::sqrt(1.0 - b2);  // b^2 <= 1/n <= 1/4 here
    std::vector<Vec2> scaled = rest;
    for (Vec2& r : scaled) r.x *= t;

    // Rounding compounds once per level; relax the gate accordingly.
    const double tol = StiefelMatrix::kOrthTol * std::pow(10.0, std::min(level + 1, 250));
    const PairCertificate inner = certify_impl(StiefelMatrix::validate(std::move(scaled), tol), level + 1);

    // The elimination argument promises sigma2 shrinks by at most
    // sqrt(1 - b^2) when the stretch is undone.
    const double s_rest = sigma2_of_pair(rest[static_cast<size_t>(inner.i)], rest[static_cast<size_t>(inner.j)]);
    if (s_rest * s_rest < (1.0 - b2) * inner.sigma2 * inner.sigma2 - kChainTol)
      throw InvariantError("row-elimination bound chain failed at level " + std::to_string(level));

    const int oi = inner.i + (inner.i >= m ? 1 : 0);
    const int oj = inner.j + (inner.j >= m ? 1 : 0);
    PairCertificate cert;
    cert.i = oi;
    cert.j = oj;
    cert.sigma2 = sigma2_of_pair(a.row(oi), a.row(oj));
    cert.bound = bound;
    cert.path = ProofPath::CaseA;
    cert.depth = (inner.path == ProofPath::CaseA ? inner.depth : 0) + 1;
    return cert;
  }

  // All rows above the threshold: a pair with nonpositive condition exists.
  const PairScan pick = scan_min_condition(row_squares(a));
  if (!(pick.value <= kCaseBTol))
    throw InvariantError("no pair condition value at or below zero; input cannot be orthonormal");
  PairCertificate cert;
  cert.i = pick.i;
  cert.j = pick.j;
  cert.sigma2 = sigma2_of_pair(a.row(pick.i), a.row(pick.j));
  cert.bound = bound;
  cert.path = ProofPath::CaseB;
  cert.caseB_value = pick.value;
  return cert;
}

}  // namespace

std::string to_string(ProofPath p) {
  switch (p) {
    case ProofPath::BruteBase: return "BruteBase";
    case ProofPath::CaseA: return "CaseA";
    case ProofPath::CaseB: return "CaseB";
  }
  return "?";
}

PairCertificate brute_force_best(const StiefelMatrix& a) {
  const PairScan best = scan_max_sigma2(a.rows(), true);
  PairCertificate cert;
  cert.i = best.i;
  cert.j = best.j;
  cert.sigma2 = best.value;
  cert.bound = 1.0 / std::sqrt(static_cast<double>(a.n()));
  cert.path = ProofPath::BruteBase;
  return cert;
}

PairCertificate certify_pair(const StiefelMatrix& a) {
  PairCertificate cert = certify_impl(a, 0);
  if (!(cert.sigma2 >= cert.bound - kCertTol))
    throw InvariantError("certified sigma2 " + std::to_string(cert.sigma2) +
                         " fell below the bound " + std::to_string(cert.bound));
  return cert;
}

double pair_condition_lhs(const RowSquares& rs, int i, int j) {
  if (i < 0 || j < 0 || i >= rs.n || j >= rs.n || i == j)
    throw std::out_of_range("pair indices out of range");
  const double c = 2.0 / rs.n;
  const double zi = rs.magnitudes[static_cast<size_t>(i)] - c;
  const double zj = rs.magnitudes[static_cast<size_t>(j)] - c;
  return dot(rs.w[static_cast<size_t>(i)], rs.w[static_cast<size_t>(j)]) - zi * zj +
         2.0 / (static_cast<double>(rs.n) * rs.n);
}

double gram_lambda2(const StiefelMatrix& a, int i, int j) {
  if (i < 0 || j < 0 || i >= a.n() || j >= a.n() || i == j)
    throw std::out_of_range("pair indices out of range");
  const Vec2 u = a.row(i), v = a.row(j);
  const double p = u.norm2(), q = v.norm2();
  const double d = dot(u, v);
  const double lambda1 = 0.5 * ((p + q) + std::sqrt((p - q) * (p - q) + 4.0 * d * d));
  if (lambda1 <= 0.0) return 0.0;
  const double c = cross(u, v);
  return (c * c) / lambda1;  // root product is det^2 = cross^2
}

namespace serial_ref {

PairCertificate brute_force_best(const StiefelMatrix& a) {
  const PairScan best = scan_max_sigma2(a.rows(), false);
  PairCertificate cert;
  cert.i = best.i;
  cert.j = best.j;
  cert.sigma2 = best.value;
  cert.bound = 1.0 / std::sqrt(static_cast<double>(a.n()));
  cert.path = ProofPath::BruteBase;
  return cert;
}

}  // namespace serial_ref

}  // namespace subcert
