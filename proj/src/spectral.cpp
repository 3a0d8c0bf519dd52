#include "subcert/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace subcert {

namespace {

constexpr double kOffTol = 1e-13;   // off-diagonal threshold, relative to |S|_F
constexpr int kMaxSweeps = 100;
constexpr double kInertiaTol = 1e-9;

// Rotation (c, s) zeroing A_pq under the two-sided update with
// J = ((c, s), (-s, c)) embedded at (p, q).
inline void symschur(double app, double aqq, double apq, double& c, double& s) {
  if (apq == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  const double tau = (aqq - app) / (2.0 * apq);
  const double t = (tau >= 0.0) ? 1.0 / (tau + std::hypot(1.0, tau))
                                : 1.0 / (tau - std::hypot(1.0, tau));
  c = 1.0 / std::sqrt(1.0 + t * t);
  s = t * c;
}

double offdiag_norm(const std::vector<double>& a, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = a[static_cast<size_t>(i) * n + j];
      acc += 2.0 * v * v;
    }
  return std::sqrt(acc);
}

SymmetricSpectrum finalize(std::vector<double> diag, std::vector<double> vecs, int n,
                           bool with_vectors) {
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return diag[static_cast<size_t>(a)] > diag[static_cast<size_t>(b)]; });

  SymmetricSpectrum out;
  out.eigenvalues.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) out.eigenvalues[static_cast<size_t>(k)] = diag[static_cast<size_t>(order[static_cast<size_t>(k)])];

  double rho = 0.0;
  for (double v : out.eigenvalues) rho = std::max(rho, std::fabs(v));
  const double thr = kInertiaTol * std::max(1.0, rho);
  out.positive_count = static_cast<int>(
      std::count_if(out.eigenvalues.begin(), out.eigenvalues.end(), [&](double v) { return v > thr; }));

  if (with_vectors) {
    std::vector<double> sorted(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        sorted[static_cast<size_t>(i) * n + k] = vecs[static_cast<size_t>(i) * n + order[static_cast<size_t>(k)]];
    out.eigenvectors = std::move(sorted);
  }
  return out;
}

struct JacobiState {
  std::vector<double> a;  // dense n*n working copy
  std::vector<double> v;  // eigenvector accumulator (n*n), identity at start
  int n;
  double thresh;
};

JacobiState jacobi_init(const SymMatrix& s, bool with_vectors) {
  JacobiState st;
  st.n = s.n();
  st.a = s.dense();
  st.thresh = kOffTol * s.frobenius_norm();
  if (with_vectors) {
    st.v.assign(static_cast<size_t>(st.n) * st.n, 0.0);
    for (int i = 0; i < st.n; ++i) st.v[static_cast<size_t>(i) * st.n + i] = 1.0;
  }
  return st;
}

SymmetricSpectrum finalize_from(JacobiState& st, bool with_vectors) {
  std::vector<double> diag(static_cast<size_t>(st.n));
  for (int i = 0; i < st.n; ++i) diag[static_cast<size_t>(i)] = st.a[static_cast<size_t>(i) * st.n + i];
  return finalize(std::move(diag), std::move(st.v), st.n, with_vectors);
}

}  // namespace

SymMatrix::SymMatrix(int n) : n_(n) {
  if (n < 1) throw ValidationError("matrix order must be positive");
  tri_.assign(static_cast<size_t>(n) * (static_cast<size_t>(n) + 1) / 2, 0.0);
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

double SymMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const double v = at(i, j);
      acc += v * v;
    }
  return std::sqrt(acc);
}

std::vector<double> SymMatrix::dense() const {
  std::vector<double> out(static_cast<size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[static_cast<size_t>(i) * n_ + j] = at(i, j);
  return out;
}

SymMatrix build_G(const RowSquares& rs) {
  const int n = rs.n;
  SymMatrix g(n);
  std::vector<double> z(static_cast<size_t>(n));
  const double c = 2.0 / n;
  for (int i = 0; i < n; ++i) z[static_cast<size_t>(i)] = rs.magnitudes[static_cast<size_t>(i)] - c;
#pragma omp parallel for schedule(dynamic, 16) if (n >= 256)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      g.set(i, j, dot(rs.w[static_cast<size_t>(i)], rs.w[static_cast<size_t>(j)]) -
                      z[static_cast<size_t>(i)] * z[static_cast<size_t>(j)]);
  return g;
}

SymMatrix build_M(const RowSquares& rs) {
  const int n = rs.n;
  SymMatrix m(n);
  std::vector<double> z(static_cast<size_t>(n));
  const double c = 2.0 / n;
  const double shift = 2.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < n; ++i) z[static_cast<size_t>(i)] = rs.magnitudes[static_cast<size_t>(i)] - c;
#pragma omp parallel for schedule(dynamic, 16) if (n >= 256)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      m.set(i, j, dot(rs.w[static_cast<size_t>(i)], rs.w[static_cast<size_t>(j)]) -
                      z[static_cast<size_t>(i)] * z[static_cast<size_t>(j)] + shift);
  return m;
}

// Production eigensolver: every sweep visits all pairs once, arranged into
// rounds of disjoint pairs by the circle schedule. Within a round all
// rotations are computed from the same pre-round state and applied in two
// phases (rows, then columns), so each entry's value is a fixed expression of
// the pre-round matrix - identical no matter how many threads execute it.
SymmetricSpectrum eigen(const SymMatrix& s, bool with_vectors) {
  const int n = s.n();
  JacobiState st = jacobi_init(s, with_vectors);
  std::vector<double>& a = st.a;
  std::vector<double>& v = st.v;

  const int m = n + (n & 1);  // pad odd orders with a bye slot
  std::vector<int> perm(static_cast<size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);

  std::vector<int> ps, qs;
  std::vector<double> cs, ss;
  const bool par = n >= 64;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm(a, n) <= st.thresh) return finalize_from(st, with_vectors);

    for (int round = 0; round < m - 1; ++round) {
      ps.clear();
      qs.clear();
      for (int k = 0; k < m / 2; ++k) {
        int p = perm[static_cast<size_t>(k)];
        int q = perm[static_cast<size_t>(m - 1 - k)];
        if (p >= n || q >= n) continue;  // bye
        if (p > q) std::swap(p, q);
        ps.push_back(p);
        qs.push_back(q);
      }
      const int np = static_cast<int>(ps.size());
      cs.resize(static_cast<size_t>(np));
      ss.resize(static_cast<size_t>(np));
      for (int k = 0; k < np; ++k)
        symschur(a[static_cast<size_t>(ps[static_cast<size_t>(k)]) * n + ps[static_cast<size_t>(k)]],
                 a[static_cast<size_t>(qs[static_cast<size_t>(k)]) * n + qs[static_cast<size_t>(k)]],
                 a[static_cast<size_t>(ps[static_cast<size_t>(k)]) * n + qs[static_cast<size_t>(k)]],
                 cs[static_cast<size_t>(k)], ss[static_cast<size_t>(k)]);

#pragma omp parallel for schedule(static) if (par)
      for (int k = 0; k < np; ++k) {
        const int p = ps[static_cast<size_t>(k)], q = qs[static_cast<size_t>(k)];
        const double c = cs[static_cast<size_t>(k)], sn = ss[static_cast<size_t>(k)];
        double* rp = &a[static_cast<size_t>(p) * n];
        double* rq = &a[static_cast<size_t>(q) * n];
        for (int j = 0; j < n; ++j) {
          const double x = rp[j], y = rq[j];
          rp[j] = c * x - sn * y;
          rq[j] = sn * x + c * y;
        }
      }
#pragma omp parallel for schedule(static) if (par)
      for (int k = 0; k < np; ++k) {
        const int p = ps[static_cast<size_t>(k)], q = qs[static_cast<size_t>(k)];
        const double c = cs[static_cast<size_t>(k)], sn = ss[static_cast<size_t>(k)];
        for (int i = 0; i < n; ++i) {
          double* row = &a[static_cast<size_t>(i) * n];
          const double x = row[p], y = row[q];
          row[p] = c * x - sn * y;
          row[q] = sn * x + c * y;
        }
      }
      if (with_vectors) {
#pragma omp parallel for schedule(static) if (par)
        for (int k = 0; k < np; ++k) {
          const int p = ps[static_cast<size_t>(k)], q = qs[static_cast<size_t>(k)];
          const double c = cs[static_cast<size_t>(k)], sn = ss[static_cast<size_t>(k)];
          for (int i = 0; i < n; ++i) {
            double* row = &v[static_cast<size_t>(i) * n];
            const double x = row[p], y = row[q];
            row[p] = c * x - sn * y;
            row[q] = sn * x + c * y;
          }
        }
      }

      // advance the circle: slot 0 stays put, the rest rotate one step
      const int last = perm[static_cast<size_t>(m - 1)];
      for (int i = m - 1; i >= 2; --i) perm[static_cast<size_t>(i)] = perm[static_cast<size_t>(i - 1)];
      perm[1] = last;
    }
  }
  if (offdiag_norm(a, n) <= st.thresh) return finalize_from(st, with_vectors);
  throw ConvergenceError("Jacobi sweep cap reached at order " + std::to_string(n));
}

namespace serial_ref {

SymMatrix build_G(const RowSquares& rs) {
  const int n = rs.n;
  SymMatrix g(n);
  const double c = 2.0 / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      g.set(i, j, dot(rs.w[static_cast<size_t>(i)], rs.w[static_cast<size_t>(j)]) -
                      (rs.magnitudes[static_cast<size_t>(i)] - c) * (rs.magnitudes[static_cast<size_t>(j)] - c));
  return g;
}

SymMatrix build_M(const RowSquares& rs) {
  const int n = rs.n;
  SymMatrix m(n);
  const double c = 2.0 / n;
  const double shift = 2.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      m.set(i, j, dot(rs.w[static_cast<size_t>(i)], rs.w[static_cast<size_t>(j)]) -
                      (rs.magnitudes[static_cast<size_t>(i)] - c) * (rs.magnitudes[static_cast<size_t>(j)] - c) + shift);
  return m;
}

// Classic row-cyclic Jacobi with immediate application; the testing yardstick
// for the round-based solver above.
SymmetricSpectrum eigen(const SymMatrix& s, bool with_vectors) {
  const int n = s.n();
  JacobiState st = jacobi_init(s, with_vectors);
  std::vector<double>& a = st.a;
  std::vector<double>& v = st.v;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm(a, n) <= st.thresh) return finalize_from(st, with_vectors);
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[static_cast<size_t>(p) * n + q];
        if (apq == 0.0) continue;
        double c, sn;
        symschur(a[static_cast<size_t>(p) * n + p], a[static_cast<size_t>(q) * n + q], apq, c, sn);
        for (int j = 0; j < n; ++j) {
          const double x = a[static_cast<size_t>(p) * n + j], y = a[static_cast<size_t>(q) * n + j];
          a[static_cast<size_t>(p) * n + j] = c * x - sn * y;
          a[static_cast<size_t>(q) * n + j] = sn * x + c * y;
        }
        for (int i = 0; i < n; ++i) {
          const double x = a[static_cast<size_t>(i) * n + p], y = a[static_cast<size_t>(i) * n + q];
          a[static_cast<size_t>(i) * n + p] = c * x - sn * y;
          a[static_cast<size_t>(i) * n + q] = sn * x + c * y;
        }
        if (with_vectors)
          for (int i = 0; i < n; ++i) {
            const double x = v[static_cast<size_t>(i) * n + p], y = v[static_cast<size_t>(i) * n + q];
            v[static_cast<size_t>(i) * n + p] = c * x - sn * y;
            v[static_cast<size_t>(i) * n + q] = sn * x + c * y;
          }
      }
  }
  if (offdiag_norm(a, n) <= st.thresh) return finalize_from(st, with_vectors);
  throw ConvergenceError("Jacobi sweep cap reached at order " + std::to_string(n));
}

}  // namespace serial_ref

std::vector<std::vector<int>> support_components(const SymMatrix& s, double tol) {
  const int n = s.n();
  double least = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) least = std::min(least, s.at(i, j));
  if (least < -tol)
    throw ValidationError("matrix has entry " + std::to_string(least) +
                          " below -tol; support components need a nonnegative matrix");

  std::vector<std::vector<int>> comps;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<size_t>(start)]) continue;
    std::vector<int> comp;
    stack.push_back(start);
    seen[static_cast<size_t>(start)] = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      for (int j = 0; j < n; ++j)
        if (j != i && !seen[static_cast<size_t>(j)] && s.at(i, j) > tol) {
          seen[static_cast<size_t>(j)] = 1;
          stack.push_back(j);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;  // discovery order == order of smallest members
}

double row_sum_residual(const SymMatrix& s, double target) {
  const int n = s.n();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += s.at(i, j);
    worst = std::max(worst, std::fabs(acc - target));
  }
  return worst;
}

double min_offdiag(const SymMatrix& s, int* out_i, int* out_j) {
  const int n = s.n();
  if (n < 2) throw ValidationError("no off-diagonal entries in a 1x1 matrix");
  double best = s.at(0, 1);
  int bi = 0, bj = 1;
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = s.at(i, j);
      if (v < best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  if (out_i) *out_i = bi;
  if (out_j) *out_j = bj;
  return best;
}

}  // namespace subcert
