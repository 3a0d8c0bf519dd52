#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subcert/errors.hpp"

namespace subcert {

/// Real 2-vector. Serves both as a matrix row and as a squared row.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double xx, double yy) : x(xx), y(yy) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }

  constexpr double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Complex squaring read in real coordinates: the angle doubles and the
/// magnitude squares, so |square(v)| = |v|^2.
constexpr Vec2 square(Vec2 v) { return {v.x * v.x - v.y * v.y, 2.0 * v.x * v.y}; }

/// Inverse of square() with the half-angle taken in [0, pi).
/// sqrt_principal((0,0)) = (0,0).
inline Vec2 sqrt_principal(Vec2 w) {
  const double r = std::sqrt(w.norm());
  if (r == 0.0) return {0.0, 0.0};
  double half = 0.5 * std::atan2(w.y, w.x);
  if (half < 0.0) half += std::numbers::pi;
  return {r * std::cos(half), r * std::sin(half)};
}

/// Rotate a row vector: v * rotation(t).
inline Vec2 rotate_vec(Vec2 v, double t) {
  const double c = std::cos(t), s = std::sin(t);
  return {v.x * c - v.y * s, v.x * s + v.y * c};
}

/// 2x2 real matrix stored as rows.
struct Mat2 {
  Vec2 r1, r2;

  constexpr double det() const { return r1.x * r2.y - r1.y * r2.x; }
  double frobenius() const { return std::sqrt(r1.norm2() + r2.norm2()); }
};

/// rotation(t) = ((cos t, sin t), (-sin t, cos t)); the convention used by
/// every factorization here.
inline Mat2 rotation(double t) {
  const double c = std::cos(t), s = std::sin(t);
  return {{c, s}, {-s, c}};
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {{a.r1.x * b.r1.x + a.r1.y * b.r2.x, a.r1.x * b.r1.y + a.r1.y * b.r2.y},
          {a.r2.x * b.r1.x + a.r2.y * b.r2.x, a.r2.x * b.r1.y + a.r2.y * b.r2.y}};
}

/// Factorization m = L * diag(sigma1, sigma2) * rotation(beta) with
/// sigma1 >= sigma2 >= 0, where L = rotation(alpha), composed with diag(1,-1)
/// on the right when `reflected` is set (determinant-negative inputs).
struct Svd2 {
  double alpha = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double beta = 0.0;
  bool reflected = false;
};

/// Closed-form 2x2 SVD in rotation form. The first right-singular direction
/// comes from the doubled-angle form: 2*beta is the angle of
/// square(r1) + square(r2), which maximizes |m v| over unit row inputs v.
inline Svd2 svd2(const Mat2& m) {
  const Vec2 s = square(m.r1) + square(m.r2);
  double beta = 0.0;
  if (s.x != 0.0 || s.y != 0.0) beta = 0.5 * std::atan2(s.y, s.x);
  const double cb = std::cos(beta), sb = std::sin(beta);

  // n = m * rotation(-beta): first column sigma1*(cos a, -sin a), second
  // column sigma2*(sin a, cos a) with sigma2 still carrying the det sign.
  const double n11 = m.r1.x * cb + m.r1.y * sb;
  const double n12 = -m.r1.x * sb + m.r1.y * cb;
  const double n21 = m.r2.x * cb + m.r2.y * sb;
  const double n22 = -m.r2.x * sb + m.r2.y * cb;

  double sigma1 = std::hypot(n11, n21);
  const double alpha = (sigma1 > 0.0) ? std::atan2(-n21, n11) : 0.0;
  double sigma2 = std::sin(alpha) * n12 + std::cos(alpha) * n22;

  bool reflected = false;
  if (sigma2 < 0.0) {
    reflected = true;
    sigma2 = -sigma2;
  }
  // beta maximizes the first direction, so an inversion here is only ever a
  // few ulps wide (sigma1 ~ sigma2); ordering the values keeps the contract.
  if (sigma2 > sigma1) std::swap(sigma1, sigma2);
  return {alpha, sigma1, sigma2, beta, reflected};
}

inline Mat2 reconstruct(const Svd2& f) {
  Mat2 left = rotation(f.alpha);
  if (f.reflected) {
    left.r1.y = -left.r1.y;
    left.r2.y = -left.r2.y;
  }
  const Mat2 mid{{f.sigma1, 0.0}, {0.0, f.sigma2}};
  return left * mid * rotation(f.beta);
}

/// Smaller singular value of the 2x2 matrix with rows a, b. Equals
/// sqrt((|a|^2 + |b|^2 - |square(a)+square(b)|) / 2); evaluated through
/// 2*cross(a,b)^2 / (|a|^2 + |b|^2 + |square(a)+square(b)|), the same
/// quantity with the subtraction rationalized away.
inline double sigma2_of_pair(Vec2 a, Vec2 b) {
  const double denom = a.norm2() + b.norm2() + (square(a) + square(b)).norm();
  if (denom == 0.0) return 0.0;
  const double c = cross(a, b);
  return std::sqrt(2.0 * c * c / denom);
}

/// Angle in [0, pi) of the first right-singular vector of the matrix with the
/// given rows: half the angle of square(r1) + square(r2). Undefined when the
/// squares cancel.
inline double right_singular_direction(const Mat2& m) {
  const Vec2 s = square(m.r1) + square(m.r2);
  if (s.norm() <= 1e-14)
    throw ValidationError("right-singular direction undefined: row squares cancel");
  double half = 0.5 * std::atan2(s.y, s.x);
  if (half < 0.0) half += std::numbers::pi;
  return half;
}

}  // namespace subcert
