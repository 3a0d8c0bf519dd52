#pragma once

#include <optional>
#include <vector>

#include "subcert/stiefel.hpp"

namespace subcert {

/// Three clusters of rows with a common square value per cluster. Clusters
/// are ordered by descending size, ties by first row; sizes are (p, q, r)
/// and the shared square values (x, y, z). assignment[i] in {0, 1, 2} maps
/// each row to its cluster.
struct ClusterStructure {
  int p = 0;
  int q = 0;
  int r = 0;
  Vec2 x{};
  Vec2 y{};
  Vec2 z{};
  std::vector<int> assignment;
};

struct ExtremalFamily {
  StiefelMatrix matrix;
  ClusterStructure structure;
};

/// Tight family for the composition n = p + q + r (all parts >= 1): rows fall
/// into three clusters of identical rows whose squares trace a triangle with
/// side lengths p/(2n) + 1/2, q/(2n) + 1/2, r/(2n) + 1/2. Every cross-cluster
/// pair has sigma2 exactly 1/sqrt(n), the smallest value any n x 2 matrix
/// with orthonormal columns can be held to. `orientation` rotates all rows
/// (squares rotate by twice the angle). Throws ParamError on a bad
/// composition.
ExtremalFamily construct_extremal(int n, int p, int q, int r,
                                  double orientation = 0.0);

/// Recognize tight families: the row squares must fall into exactly three
/// clusters under single-linkage with link distance `tol`, each member within
/// 10*tol of its cluster mean, each cluster mean of magnitude
/// 1/(2n) + 1/(2m) for its size m within 10*tol, and the three means pairwise
/// farther apart than 1e-8. Returns the recovered structure, else nullopt.
std::optional<ClusterStructure> detect_equality(const StiefelMatrix& a,
                                                double tol = 1e-8);

/// Closed polygon in the square plane, normalized to perimeter 2 (the
/// invariant mass of row squares). Gate: n >= 3, finite entries, positive
/// perimeter, and the normalized edges must sum to within 1e-9 of zero.
class PolygonInstance {
 public:
  static PolygonInstance from_vectors(std::vector<Vec2> vs);

  int n() const { return static_cast<int>(vectors_.size()); }
  const std::vector<Vec2>& vectors() const { return vectors_; }
  const Vec2& vector(int i) const { return vectors_[static_cast<size_t>(i)]; }

 private:
  explicit PolygonInstance(std::vector<Vec2> vs) : vectors_(std::move(vs)) {}
  std::vector<Vec2> vectors_;
};

struct PolygonDefect {
  double value = 0.0;
  int i = -1;
  int j = -1;
};

/// Largest pair defect |v_i| + |v_j| - |v_i + v_j| over the polygon's edges,
/// lexicographically first argmax. Always >= 2/n, with equality exactly for
/// the three-cluster families above; equals twice the best squared sigma2 of
/// the matrix whose row squares trace this polygon.
PolygonDefect polygon_defect(const PolygonInstance& poly);

/// Same three-cluster recognition as detect_equality, applied directly to the
/// polygon's normalized edges.
std::optional<ClusterStructure> polygon_equality_classify(
    const PolygonInstance& poly, double tol = 1e-8);

namespace serial_ref {
PolygonDefect polygon_defect(const PolygonInstance& poly);
}

}  // namespace subcert
