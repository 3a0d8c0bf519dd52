#pragma once

#include <cstdint>
#include <vector>

#include "subcert/vec2.hpp"

namespace subcert {

/// n x 2 matrix with orthonormal columns (n >= 3). Instances exist only
/// through the certified constructors below, so holding one is proof the
/// orthonormality gate passed.
class StiefelMatrix {
 public:
  static constexpr double kOrthTol = 1e-10;

  /// Gate: max-norm of A^T A - I must be <= tol.
  static StiefelMatrix validate(std::vector<Vec2> rows, double tol = kOrthTol);

  int n() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec2>& rows() const { return rows_; }
  const Vec2& row(int i) const { return rows_[static_cast<size_t>(i)]; }
  /// Residual measured at construction.
  double residual() const { return residual_; }

 private:
  StiefelMatrix(std::vector<Vec2> rows, double residual)
      : rows_(std::move(rows)), residual_(residual) {}

  friend StiefelMatrix rotate_right(const StiefelMatrix& a, double theta);

  std::vector<Vec2> rows_;
  double residual_;
};

/// Row squares w_i = square(a_i) with their magnitudes |w_i| = |a_i|^2.
/// For orthonormal columns the squares close up: sum w_i = 0, sum |w_i| = 2.
struct RowSquares {
  int n = 0;
  std::vector<Vec2> w;
  std::vector<double> magnitudes;
};

RowSquares row_squares(const StiefelMatrix& a);

/// Rotation-invariant random sample: two seeded Gaussian columns put through
/// Gram-Schmidt twice. Deterministic in (n, seed).
StiefelMatrix sample_haar(int n, std::uint64_t seed);

/// Multiply every row on the right by rotation(theta). Orthonormality is
/// preserved; the residual is re-measured, never re-gated.
StiefelMatrix rotate_right(const StiefelMatrix& a, double theta);

/// Classical Gram-Schmidt on the two columns, applied twice. Rejects
/// dependent columns (relative threshold 1e-12).
StiefelMatrix reorthonormalize(const std::vector<Vec2>& rows);

}  // namespace subcert
