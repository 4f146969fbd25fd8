#include "domsplit/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "domsplit/errors.hpp"

namespace domsplit {

namespace {

long count_block(const double* d, const double* e2, long n, double x,
                 double pivmin) {
  long c = 0;
  double q = d[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0) ++c;
  for (long i = 1; i < n; ++i) {
    q = d[i] - x - e2[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++c;
  }
  return c;
}

void block_eigenvalues(const double* d, const double* e2, long n,
                       std::vector<double>& out) {
  if (n == 1) {
    out.push_back(d[0]);
    return;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double emax = 0;
  for (long i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::sqrt(e2[i - 1]) : 0.0) +
                     (i + 1 < n ? std::sqrt(e2[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
    if (i + 1 < n) emax = std::max(emax, e2[i]);
  }
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);
  const double span = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-14 * span + pivmin;
  hi += 1e-14 * span + pivmin;
  const double eps = std::numeric_limits<double>::epsilon();

  // Recursive interval splitting; each leaf isolates a run of indices.
  struct Job {
    double a, b;
    long ca, cb;
  };
  std::vector<Job> stack{{lo, hi, 0, n}};
  std::vector<double> vals;
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    if (j.cb <= j.ca) continue;
    const double tol = 2 * eps * std::max(std::abs(j.a), std::abs(j.b)) + pivmin;
    if (j.b - j.a <= tol) {
      for (long k = j.ca; k < j.cb; ++k) vals.push_back(0.5 * (j.a + j.b));
      continue;
    }
    const double m = 0.5 * (j.a + j.b);
    if (m <= j.a || m >= j.b) {
      for (long k = j.ca; k < j.cb; ++k) vals.push_back(m);
      continue;
    }
    const long cm = count_block(d, e2, n, m, pivmin);
    stack.push_back({j.a, m, j.ca, cm});
    stack.push_back({m, j.b, cm, j.cb});
  }
  out.insert(out.end(), vals.begin(), vals.end());
}

}  // namespace

long sturm_count(const std::vector<double>& diag,
                 const std::vector<double>& off2, double x) {
  const long n = static_cast<long>(diag.size());
  long c = 0, start = 0;
  double emax = 0;
  for (double e : off2) emax = std::max(emax, e);
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);
  for (long i = 0; i < n; ++i) {
    if (i + 1 == n || off2[i] == 0.0) {
      c += count_block(diag.data() + start, off2.data() + start, i - start + 1,
                       x, pivmin);
      start = i + 1;
    }
  }
  return c;
}

std::vector<double> sturm_eigenvalues(const std::vector<double>& diag,
                                      const std::vector<double>& off2) {
  const long n = static_cast<long>(diag.size());
  if (n > 0 && static_cast<long>(off2.size()) != n - 1)
    throw DomainError("off-diagonal length mismatch");
  std::vector<double> out;
  out.reserve(n);
  long start = 0;
  for (long i = 0; i < n; ++i) {
    if (i + 1 == n || off2[i] == 0.0) {
      block_eigenvalues(diag.data() + start, off2.data() + start, i - start + 1,
                        out);
      start = i + 1;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TridiagonalLU::TridiagonalLU(std::vector<std::complex<double>> lower,
                             std::vector<std::complex<double>> diag,
                             std::vector<std::complex<double>> upper)
    : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)) {
  const long n = size();
  if (n == 0) throw DomainError("empty tridiagonal matrix");
  if (static_cast<long>(dl_.size()) != n - 1 ||
      static_cast<long>(du_.size()) != n - 1)
    throw DomainError("tridiagonal band length mismatch");
  du2_.assign(n > 2 ? n - 2 : 0, 0.0);
  swapped_.assign(n > 1 ? n - 1 : 0, 0);
  for (long i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (d_[i] != 0.0) {
        const auto f = dl_[i] / d_[i];
        dl_[i] = f;
        d_[i + 1] -= f * du_[i];
      }
    } else {
      const auto f = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = f;
      const auto t = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = t - f * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -f * du_[i + 1];
      }
      swapped_[i] = 1;
    }
  }
  for (long i = 0; i < n; ++i)
    if (d_[i] == 0.0) throw DomainError("singular tridiagonal matrix");
}

void TridiagonalLU::solve(std::vector<std::complex<double>>& b) const {
  const long n = size();
  if (static_cast<long>(b.size()) != n) throw DomainError("rhs length mismatch");
  for (long i = 0; i + 1 < n; ++i) {
    if (!swapped_[i]) {
      b[i + 1] -= dl_[i] * b[i];
    } else {
      const auto t = b[i];
      b[i] = b[i + 1];
      b[i + 1] = t - dl_[i] * b[i];
    }
  }
  b[n - 1] /= d_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
  for (long i = n - 3; i >= 0; --i)
    b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
}

}  // namespace domsplit
