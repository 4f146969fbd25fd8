#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "domsplit/errors.hpp"

namespace domsplit {

template <typename Real>
using Mat2T = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using Vec2T = Eigen::Matrix<std::complex<Real>, 2, 1>;

using cplx = std::complex<double>;
using Mat2 = Mat2T<double>;
using Vec2 = Vec2T<double>;

template <typename Real>
std::complex<Real> det(const Mat2T<Real>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <typename Real>
Real max_abs_entry(const Mat2T<Real>& m) {
  using std::abs;
  Real s = 0;
  for (int i = 0; i < 4; ++i) s = std::max(s, abs(m(i)));
  return s;
}

/// Singular values (s1 >= s2) in closed form.
template <typename Real>
std::pair<Real, Real> singular_values(const Mat2T<Real>& m) {
  using std::abs;
  using std::sqrt;
  const Real scale = max_abs_entry(m);
  if (scale == 0) return {Real(0), Real(0)};
  const Mat2T<Real> n = m / scale;
  const Real f2 = n.squaredNorm();
  const Real d = abs(det(n));
  const Real disc = sqrt(std::max<Real>(0, (f2 - 2 * d) * (f2 + 2 * d)));
  const Real s1 = sqrt((f2 + disc) / 2);
  const Real s2 = s1 > 0 ? d / s1 : Real(0);
  return {s1 * scale, s2 * scale};
}

/// Spectral norm.
template <typename Real>
Real operator_norm(const Mat2T<Real>& m) {
  return singular_values(m).first;
}

/// |det M| < 1e-13 max(1, |M|^2).
template <typename Real>
bool is_singular(const Mat2T<Real>& m) {
  using std::abs;
  const Real n = operator_norm(m);
  return abs(det(m)) < Real(1e-13) * std::max<Real>(1, n * n);
}

/// M = U diag(s1, s2) V^*, U and V unitary.
template <typename Real>
struct Svd2 {
  Real s1 = 0;
  Real s2 = 0;
  Mat2T<Real> U = Mat2T<Real>::Identity();
  Mat2T<Real> V = Mat2T<Real>::Identity();
};

template <typename Real>
Svd2<Real> svd2(const Mat2T<Real>& m) {
  using C = std::complex<Real>;
  using std::abs;
  using std::conj;
  using std::sqrt;
  Svd2<Real> out;
  const Real scale = max_abs_entry(m);
  if (scale == 0) return out;
  const Mat2T<Real> n = m / scale;

  const Real h00 = std::norm(n(0, 0)) + std::norm(n(1, 0));
  const Real h11 = std::norm(n(0, 1)) + std::norm(n(1, 1));
  const C h01 = conj(n(0, 0)) * n(0, 1) + conj(n(1, 0)) * n(1, 1);
  const Real half = (h00 - h11) / 2;
  const Real lam = (h00 + h11) / 2 + sqrt(half * half + std::norm(h01));

  Vec2T<Real> p(h01, C(lam - h00));
  Vec2T<Real> q(C(lam - h11), conj(h01));
  Vec2T<Real> v1 = p.norm() >= q.norm() ? p : q;
  if (v1.norm() == 0) v1 = Vec2T<Real>(C(1), C(0));
  v1 /= v1.norm();
  const Vec2T<Real> v2(-conj(v1(1)), conj(v1(0)));

  Vec2T<Real> u1 = n * v1;
  const Real s1 = u1.norm();
  u1 /= s1;
  Vec2T<Real> u2(-conj(u1(1)), conj(u1(0)));
  const C t = u2.dot(n * v2);
  if (abs(t) > 0) u2 *= t / abs(t);

  out.s1 = s1 * scale;
  out.s2 = abs(det(n)) / s1 * scale;
  out.U.col(0) = u1;
  out.U.col(1) = u2;
  out.V.col(0) = v1;
  out.V.col(1) = v2;
  return out;
}

/// Finite window of 2x2 matrices B(j), j in [lo, hi].
class MatSequence {
 public:
  MatSequence() = default;
  /// sup_bound <= 0 means: use the largest factor norm.
  MatSequence(long lo, std::vector<Mat2> values, double sup_bound = 0.0);

  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return lo_ + static_cast<long>(values_.size()) - 1; }
  long length() const noexcept { return static_cast<long>(values_.size()); }
  bool contains(long j) const noexcept { return j >= lo() && j <= hi(); }
  const Mat2& at(long j) const;
  const Mat2& operator[](long j) const { return values_[j - lo_]; }
  double sup_bound() const noexcept { return sup_; }
  const std::vector<Mat2>& values() const noexcept { return values_; }

 private:
  long lo_ = 0;
  std::vector<Mat2> values_;
  double sup_ = 0;
};

/// B(j+n-1) ... B(j). Identity for n = 0.
Mat2 cocycle_product(const MatSequence& seq, long j, long n);

/// B(j-n)^{-1} ... B(j-1)^{-1}.
Mat2 backward_product(const MatSequence& seq, long j, long n);

/// min |B_n(j)| over every admissible j of the window.
double norm_floor(const MatSequence& seq, long n);

/// min |B_n(j)| over j in [j_from, j_to].
double norm_floor(const MatSequence& seq, long n, long j_from, long j_to);

}  // namespace domsplit
