#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "subcert/stiefel.hpp"

namespace subcert {

/// Dense symmetric matrix, stored as the lower triangle so the two mirrored
/// entries cannot drift apart.
class SymMatrix {
 public:
  explicit SymMatrix(int n);

  int n() const { return n_; }
  double at(int i, int j) const { return tri_[index(i, j)]; }
  void set(int i, int j, double v) { tri_[index(i, j)] = v; }

  double trace() const;
  double frobenius_norm() const;
  /// Row-major n*n expansion.
  std::vector<double> dense() const;

 private:
  size_t index(int i, int j) const {
    if (j > i) std::swap(i, j);
    return static_cast<size_t>(i) * (static_cast<size_t>(i) + 1) / 2 + static_cast<size_t>(j);
  }

  int n_;
  std::vector<double> tri_;
};

struct SymmetricSpectrum {
  std::vector<double> eigenvalues;  // descending
  int positive_count = 0;
  /// Row-major n*n; column k is the eigenvector of eigenvalues[k].
  std::optional<std::vector<double>> eigenvectors;
};

/// G_ij = (w_i, w_j) - z_i z_j with z_i = |w_i| - 2/n. For orthonormal
/// columns: G 1 = 0, tr G = 4/n, and at most two positive eigenvalues.
SymMatrix build_G(const RowSquares& rs);

/// M_ij = G_ij + 2/n^2; every row sums to 2/n, and some off-diagonal entry
/// is always <= 0.
SymMatrix build_M(const RowSquares& rs);

/// Jacobi eigensolver. Rotations are applied round by round over disjoint
/// index pairs with two-phase updates, so the result does not depend on
/// thread count. Stops when the off-diagonal Frobenius norm falls below
/// 1e-13 * |S|_F; gives up (ConvergenceError) after 100 sweeps.
SymmetricSpectrum eigen(const SymMatrix& s, bool with_vectors = true);

/// Connected components of the graph with edges S_ij > tol (i != j), each
/// sorted ascending, components ordered by smallest member. Rejects matrices
/// with an entry below -tol.
std::vector<std::vector<int>> support_components(const SymMatrix& s, double tol = 1e-8);

/// max_i |sum_j S_ij - target|.
double row_sum_residual(const SymMatrix& s, double target);

/// Smallest off-diagonal entry; ties resolved toward the lexicographically
/// smallest (i, j), written to the out-parameters when non-null.
double min_offdiag(const SymMatrix& s, int* out_i = nullptr, int* out_j = nullptr);

namespace serial_ref {
/// Reference implementations: same contracts, plain row-cyclic / serial loops.
SymMatrix build_G(const RowSquares& rs);
SymMatrix build_M(const RowSquares& rs);
SymmetricSpectrum eigen(const SymMatrix& s, bool with_vectors = true);
}  // namespace serial_ref

}  // namespace subcert
