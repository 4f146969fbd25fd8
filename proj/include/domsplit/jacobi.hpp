#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "domsplit/mat2.hpp"
#include "domsplit/tridiag.hpp"

namespace domsplit {

/// How coefficients are continued outside the stored window.
enum class Extension { periodic, constant, zero, sampled };

/// Jacobi operator
///   (J psi)(n) = conj(a_{n-1}) psi(n-1) + a_n psi(n+1) + b_n psi(n)
/// stored on the window [lo, hi].
class JacobiOperator {
 public:
  /// Coefficients outside the window, for Extension::sampled.
  using Sampler = std::function<std::pair<cplx, double>(long)>;

  /// Off-diagonal entries with |a_j| <= zero_tol are treated as exact zeros.
  JacobiOperator(long lo, std::vector<cplx> a, std::vector<double> b,
                 Extension ext = Extension::zero, double zero_tol = 0.0);
  JacobiOperator(long lo, std::vector<cplx> a, std::vector<double> b,
                 Sampler outside);

  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return lo_ + static_cast<long>(b_.size()) - 1; }
  long length() const noexcept { return static_cast<long>(b_.size()); }

  cplx a(long j) const;
  double b(long j) const;
  bool a_is_zero(long j) const { return a(j) == cplx(0); }

  /// M with sup |a|, sup |b| < M over the window.
  double bound() const noexcept { return bound_; }
  double sup_a() const noexcept { return sup_a_; }
  Extension extension() const noexcept { return ext_; }
  double zero_tolerance() const noexcept { return zero_tol_; }

  /// Coefficients exactly as supplied.
  const std::vector<cplx>& raw_a() const noexcept { return raw_a_; }
  const std::vector<double>& raw_b() const noexcept { return b_; }

 private:
  long wrap(long j) const;

  long lo_;
  std::vector<cplx> raw_a_, a_;
  std::vector<double> b_;
  Extension ext_;
  double zero_tol_ = 0;
  Sampler outside_;
  double bound_ = 0, sup_a_ = 0;
};

/// Finite section on the sites (j1, j2].
struct Truncation {
  long j1 = 0, j2 = 0;
  std::vector<double> diag;
  /// upper[k] = J(k, k+1) = a_{j1+1+k}.
  std::vector<cplx> upper;

  long size() const noexcept { return j2 - j1; }
  Eigen::MatrixXcd dense() const;
};

Truncation truncate(const JacobiOperator& op, long j1, long j2);

/// Eigenvalues after the diagonal unitary gauge a -> |a|.
std::vector<double> eigenvalues(const Truncation& t);

/// B^E(j) = [[E - b_j, -conj(a_{j-1})], [a_j, 0]] on the operator window.
MatSequence cocycle_map(const JacobiOperator& op, cplx E);
Mat2 cocycle_matrix(const JacobiOperator& op, cplx E, long j);

/// det(E - J_[j, j+N)); 1 for N = 0 and 0 for N = -1.
cplx char_poly(const JacobiOperator& op, long j, long N, cplx E);

/// B^E_N(j) assembled from characteristic polynomials.
Mat2 cocycle_via_charpoly(const JacobiOperator& op, long j, long N, cplx E);

struct SpectrumOptions {
  /// Truncation sizes; empty means half, three quarters and all of the window.
  std::vector<long> sizes;
  /// Two eigenvalues closer than this are identified across the ladder.
  /// Zero or less means 8 M / (smallest size).
  double resolution = 0.0;
  /// Move truncation boundaries onto nearby exact zeros of a.
  long snap_reach = 64;
};

struct Interval {
  double lo, hi;
};

struct SpectrumApprox {
  struct Rung {
    long j1, j2;
    std::vector<double> eigenvalues;
  };
  std::vector<Rung> rungs;
  /// Eigenvalues of the largest section reproduced by every other section.
  std::vector<double> eigenvalues;
  /// Eigenvalues of the largest section that some section does not reproduce.
  std::vector<double> unconfirmed;
  /// Confirmed eigenvalues merged across gaps <= resolution.
  std::vector<Interval> cover;
  double resolution = 0;
};

SpectrumApprox spectrum(const JacobiOperator& op, const SpectrumOptions& opt = {});

/// 0 for real E inside the cover, else distance to the cover.
double dist_to_spectrum(const SpectrumApprox& s, cplx E);

/// Distance to the nearest endpoint of the cover.
double dist_to_spectrum_boundary(const SpectrumApprox& s, cplx E);

/// Resolvent of a finite section, one factorisation reused across columns.
class Resolvent {
 public:
  Resolvent(const JacobiOperator& op, cplx E, long j1, long j2);
  /// g_k(n) for n in (j1, j2].
  std::vector<cplx> column(long k) const;
  long first() const noexcept { return j1_ + 1; }
  long last() const noexcept { return j2_; }
  cplx energy() const noexcept { return E_; }

 private:
  long j1_, j2_;
  cplx E_;
  TridiagonalLU lu_;
};

struct GreensData {
  cplx energy;
  long column = 0;
  long first = 0;
  std::vector<cplx> values;
  long margin = 0;
  double delta = 0;
  /// Largest gamma with |g(n)| <= (2/delta) exp(-gamma |n - column|) over
  /// the sites above the rounding floor.
  double gamma_fit = 0;
  /// Least-squares slope of -log |g(n)| against |n - column|.
  double gamma_ls = 0;
  /// Row of the operator through the column site.
  cplx a_left, a_right;
  double b_center = 0;

  cplx value(long n) const;
  long last() const noexcept { return first + static_cast<long>(values.size()) - 1; }
};

struct GreensOptions {
  long margin = 40;
  /// Sites either side of the column kept in GreensData.
  long radius = 40;
  /// Reject energies with delta below min_delta * M.
  double min_delta = 1e-8;
  /// Required exp(-gamma * margin).
  double boundary_tol = 1e-8;
  long max_margin = 4096;
};

GreensData greens_column(const JacobiOperator& op, cplx E, long j,
                         const SpectrumApprox& spec, const GreensOptions& opt = {});
GreensData greens_column(const JacobiOperator& op, cplx E, long j, long margin);

/// |conj(a_{j-1}) g_j(j-1) + a_j g_j(j+1) + (b_j - E) g_j(j) - 1|.
double normalization_identity_check(const GreensData& g);

/// |a_{j-1} g_{j-1}(j) + conj(a_j) g_{j+1}(j) + (b_j - E) g_j(j) - 1|.
double row_identity_residual(const JacobiOperator& op, cplx E, long j, long margin);

/// Rigorous exponential rate asinh(delta / (4 sup|a|)).
double combes_thomas_rate(const JacobiOperator& op, double delta);

/// a_m (phi(m+1) psi(m) - phi(m) psi(m+1)).
cplx wronskian(const JacobiOperator& op, const std::vector<cplx>& phi,
               const std::vector<cplx>& psi, long first, long m);

/// Formal solution of J psi = E psi on [from, to] with given psi(j0), psi(j0-1).
/// Requires a_j != 0 along the way.
std::vector<cplx> transfer_solution(const JacobiOperator& op, cplx E, long j0,
                                    cplx at_j0, cplx at_j0_minus_1, long from,
                                    long to);

}  // namespace domsplit
