#pragma once

#include <complex>
#include <vector>

namespace domsplit {

/// Eigenvalues of a real symmetric tridiagonal matrix by Sturm bisection.
/// off2[k] is the squared off-diagonal between rows k and k+1. Exact zeros
/// split the matrix into independent blocks. Ascending order.
std::vector<double> sturm_eigenvalues(const std::vector<double>& diag,
                                      const std::vector<double>& off2);

/// Number of eigenvalues strictly below x.
long sturm_count(const std::vector<double>& diag,
                 const std::vector<double>& off2, double x);

/// LU with partial pivoting of a complex tridiagonal matrix.
/// lower[k] = T(k+1, k), upper[k] = T(k, k+1).
class TridiagonalLU {
 public:
  TridiagonalLU(std::vector<std::complex<double>> lower,
                std::vector<std::complex<double>> diag,
                std::vector<std::complex<double>> upper);

  /// Solves T x = rhs in place.
  void solve(std::vector<std::complex<double>>& rhs) const;
  long size() const noexcept { return static_cast<long>(d_.size()); }

 private:
  std::vector<std::complex<double>> dl_, d_, du_, du2_;
  std::vector<char> swapped_;
};

}  // namespace domsplit
