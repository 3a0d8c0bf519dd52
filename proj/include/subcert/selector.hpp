#pragma once

#include <optional>
#include <string>

#include "subcert/stiefel.hpp"

namespace subcert {

/// How a certificate was reached: exhaustive scan at the n = 3 base,
/// row-elimination recursion (CaseA, with its depth), or the squared-row
/// pair condition (CaseB).
enum class ProofPath { BruteBase, CaseA, CaseB };

std::string to_string(ProofPath p);

/// A certified pair: rows i < j of the original matrix whose 2x2 submatrix
/// has smallest singular value sigma2 >= bound - 1e-10, bound = 1/sqrt(n).
/// Equivalently the submatrix inverse has spectral norm <= sqrt(n) * (1 + eps).
struct PairCertificate {
  int i = -1;
  int j = -1;
  double sigma2 = 0.0;
  double bound = 0.0;
  ProofPath path = ProofPath::BruteBase;
  int depth = 0;                        // CaseA recursion levels, else 0
  std::optional<double> caseB_value;    // selected pair-condition value, CaseB only
};

/// Exhaustive oracle: scans all n(n-1)/2 pairs for the maximal sigma2,
/// breaking exact ties toward the lexicographically smallest (i, j).
PairCertificate brute_force_best(const StiefelMatrix& a);

/// Constructive certificate in O(n^2): at n = 3 delegates to the scan; if
/// some row has squared norm <= 1/n that row is rotated onto the first axis,
/// eliminated, the remaining first column rescaled by 1/sqrt(1 - b^2), and
/// the (n-1)-row problem solved recursively (CaseA); otherwise a pair with
/// nonpositive pair condition is selected (CaseB).
PairCertificate certify_pair(const StiefelMatrix& a);

/// Pair condition M_ij = (w_i, w_j) - z_i z_j + 2/n^2, z_k = |w_k| - 2/n.
/// Nonpositive exactly when (a_i, a_j)^2 <= (|w_i| - 1/n)(|w_j| - 1/n).
double pair_condition_lhs(const RowSquares& rs, int i, int j);

/// Smaller eigenvalue of the 2x2 Gram matrix of rows i, j: the smaller root
/// of (|a_i|^2 - t)(|a_j|^2 - t) - (a_i, a_j)^2. Equals sigma2_of_pair^2.
double gram_lambda2(const StiefelMatrix& a, int i, int j);

namespace serial_ref {
PairCertificate brute_force_best(const StiefelMatrix& a);
}

}  // namespace subcert
