#include "subcert/stiefel.hpp"

#include <cmath>
#include <random>
#include <string>

namespace subcert {

namespace {

// Max-norm of A^T A - I.
double orth_residual(const std::vector<Vec2>& rows) {
  double s11 = 0.0, s12 = 0.0, s22 = 0.0;
  for (const Vec2& r : rows) {
    s11 += r.x * r.x;
    s12 += r.x * r.y;
    s22 += r.y * r.y;
  }
  return std::max({std::fabs(s11 - 1.0), std::fabs(s12), std::fabs(s22 - 1.0)});
}

void check_shape(const std::vector<Vec2>& rows) {
  if (rows.size() < 3)
    throw ValidationError("need at least 3 rows, got " + std::to_string(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].finite())
      throw ValidationError("non-finite entry in row " + std::to_string(i));
}

// Orthonormalizes columns (x, y) in place; one classical Gram-Schmidt pass.
// Returns false if the columns are dependent within `rel_tol`.
bool gram_schmidt_pass(std::vector<double>& x, std::vector<double>& y, double rel_tol) {
  const size_t n = x.size();
  double nx = 0.0;
  for (double v : x) nx += v * v;
  nx = std::sqrt(nx);
  if (nx == 0.0) return false;
  for (double& v : x) v /= nx;

  double ny0 = 0.0;
  for (double v : y) ny0 += v * v;
  ny0 = std::sqrt(ny0);

  double proj = 0.0;
  for (size_t i = 0; i < n; ++i) proj += x[i] * y[i];
  for (size_t i = 0; i < n; ++i) y[i] -= proj * x[i];

  double ny = 0.0;
  for (double v : y) ny += v * v;
  ny = std::sqrt(ny);
  if (ny0 == 0.0 || ny <= rel_tol * ny0) return false;
  for (double& v : y) v /= ny;
  return true;
}

std::vector<Vec2> columns_to_rows(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<Vec2> rows(x.size());
  for (size_t i = 0; i < x.size(); ++i) rows[i] = {x[i], y[i]};
  return rows;
}

}  // namespace

StiefelMatrix StiefelMatrix::validate(std::vector<Vec2> rows, double tol) {
  check_shape(rows);
  const double res = orth_residual(rows);
  if (!(res <= tol))
    throw OrthonormalityError("columns are not orthonormal: residual " + std::to_string(res) +
                                  " exceeds " + std::to_string(tol),
                              res);
  return StiefelMatrix(std::move(rows), res);
}

RowSquares row_squares(const StiefelMatrix& a) {
  RowSquares rs;
  rs.n = a.n();
  rs.w.resize(a.rows().size());
  rs.magnitudes.resize(a.rows().size());
  for (size_t i = 0; i < a.rows().size(); ++i) {
    rs.w[i] = square(a.rows()[i]);
    rs.magnitudes[i] = a.rows()[i].norm2();
  }
  return rs;
}

StiefelMatrix sample_haar(int n, std::uint64_t seed) {
  if (n < 3) throw ValidationError("need at least 3 rows, got " + std::to_string(n));
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const size_t un = static_cast<size_t>(n);

  std::vector<double> x(un), y(un);
  for (double& v : x) v = gauss(engine);
  // A degenerate draw (dependent columns) is redrawn from the same stream, so
  // the sample stays a deterministic function of the seed.
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (double& v : y) v = gauss(engine);
    std::vector<double> cx = x, cy = y;
    if (!gram_schmidt_pass(cx, cy, 1e-8)) continue;
    gram_schmidt_pass(cx, cy, 0.0);
    std::vector<Vec2> rows = columns_to_rows(cx, cy);
    const double res = orth_residual(rows);
    if (res > 1e-12)
      throw InvariantError("sampled matrix residual " + std::to_string(res) + " exceeds 1e-12");
    return StiefelMatrix::validate(std::move(rows));
  }
  throw InvariantError("could not draw independent Gaussian columns");
}

StiefelMatrix rotate_right(const StiefelMatrix& a, double theta) {
  std::vector<Vec2> rows(a.rows().size());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = rotate_vec(a.rows()[i], theta);
  // Bypasses the gate: a rotation of a valid matrix stays valid, and the
  // residual may legitimately sit a few ulps past an input already at the
  // tolerance boundary.
  const double res = orth_residual(rows);
  return StiefelMatrix(std::move(rows), res);
}

StiefelMatrix reorthonormalize(const std::vector<Vec2>& rows) {
  check_shape(rows);
  std::vector<double> x(rows.size()), y(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    x[i] = rows[i].x;
    y[i] = rows[i].y;
  }
  if (!gram_schmidt_pass(x, y, 1e-12))
    throw ValidationError("columns are dependent: cannot orthonormalize");
  gram_schmidt_pass(x, y, 0.0);
  return StiefelMatrix::validate(columns_to_rows(x, y));
}

}  // namespace subcert
