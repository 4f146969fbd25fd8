#include "domsplit/mat2.hpp"

#include <string>

namespace domsplit {

MatSequence::MatSequence(long lo, std::vector<Mat2> values, double sup_bound)
    : lo_(lo), values_(std::move(values)) {
  double m = 0;
  for (const auto& v : values_) {
    if (!v.allFinite()) throw DomainError("non-finite matrix entry");
    m = std::max(m, operator_norm(v));
  }
  if (sup_bound > 0) {
    if (sup_bound < m) throw DomainError("sup bound smaller than a factor norm");
    sup_ = sup_bound;
  } else {
    sup_ = m;
  }
}

const Mat2& MatSequence::at(long j) const {
  if (!contains(j))
    throw RangeError("index " + std::to_string(j) + " outside window [" +
                     std::to_string(lo()) + ", " + std::to_string(hi()) + "]");
  return values_[j - lo_];
}

namespace {

void check_span(const MatSequence& seq, long first, long last) {
  if (first > last) return;
  if (!seq.contains(first) || !seq.contains(last))
    throw RangeError("product [" + std::to_string(first) + ", " +
                     std::to_string(last) + "] leaves the window");
}

template <typename Real>
Mat2T<Real> forward(const MatSequence& seq, long j, long n) {
  Mat2T<Real> p = Mat2T<Real>::Identity();
  for (long k = j; k < j + n; ++k)
    p = seq[k].template cast<std::complex<Real>>() * p;
  return p;
}

template <typename Real>
Mat2T<Real> inverse2(const Mat2T<Real>& m) {
  Mat2T<Real> r;
  const auto d = det(m);
  r << m(1, 1) / d, -m(0, 1) / d, -m(1, 0) / d, m(0, 0) / d;
  return r;
}

template <typename Real>
Mat2T<Real> backward(const MatSequence& seq, long j, long n) {
  Mat2T<Real> p = Mat2T<Real>::Identity();
  for (long k = j - 1; k >= j - n; --k) {
    if (is_singular(seq[k]))
      throw SingularFactor(k, "singular factor at " + std::to_string(k));
    p = inverse2<Real>(seq[k].template cast<std::complex<Real>>()) * p;
  }
  return p;
}

}  // namespace

Mat2 cocycle_product(const MatSequence& seq, long j, long n) {
  if (n < 0) throw DomainError("negative product length");
  check_span(seq, j, j + n - 1);
  if (n > 32) return forward<long double>(seq, j, n).cast<cplx>();
  return forward<double>(seq, j, n);
}

Mat2 backward_product(const MatSequence& seq, long j, long n) {
  if (n < 0) throw DomainError("negative product length");
  check_span(seq, j - n, j - 1);
  if (n > 32) return backward<long double>(seq, j, n).cast<cplx>();
  return backward<double>(seq, j, n);
}

double norm_floor(const MatSequence& seq, long n, long j_from, long j_to) {
  if (j_from > j_to) throw RangeError("empty range");
  check_span(seq, j_from, j_to + n - 1);
  double m = std::numeric_limits<double>::infinity();
  for (long j = j_from; j <= j_to; ++j)
    m = std::min(m, operator_norm(cocycle_product(seq, j, n)));
  return m;
}

double norm_floor(const MatSequence& seq, long n) {
  return norm_floor(seq, n, seq.lo(), seq.hi() - std::max(n, 1L) + 1);
}

}  // namespace domsplit
