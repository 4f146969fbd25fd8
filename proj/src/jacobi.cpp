#include "domsplit/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace domsplit {

JacobiOperator::JacobiOperator(long lo, std::vector<cplx> a,
                               std::vector<double> b, Extension ext,
                               double zero_tol)
    : lo_(lo), raw_a_(std::move(a)), b_(std::move(b)), ext_(ext),
      zero_tol_(zero_tol) {
  if (b_.empty()) throw DomainError("empty operator window");
  if (raw_a_.size() != b_.size())
    throw DomainError("a and b must cover the same window");
  if (ext == Extension::sampled)
    throw DomainError("sampled extension needs a sampler");
  a_ = raw_a_;
  double sup = 0;
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (!std::isfinite(std::abs(a_[i])) || !std::isfinite(b_[i]))
      throw DomainError("non-finite coefficient");
    if (std::abs(a_[i]) <= zero_tol_) a_[i] = 0.0;
    sup_a_ = std::max(sup_a_, std::abs(a_[i]));
    sup = std::max({sup, std::abs(a_[i]), std::abs(b_[i])});
  }
  bound_ = std::max(sup * (1 + 1e-12), std::numeric_limits<double>::min());
}

JacobiOperator::JacobiOperator(long lo, std::vector<cplx> a,
                               std::vector<double> b, Sampler outside)
    : JacobiOperator(lo, std::move(a), std::move(b), Extension::zero, 0.0) {
  ext_ = Extension::sampled;
  outside_ = std::move(outside);
}

long JacobiOperator::wrap(long j) const {
  const long L = length();
  switch (ext_) {
    case Extension::periodic:
      return lo_ + (((j - lo_) % L) + L) % L;
    case Extension::constant:
      return std::clamp(j, lo_, hi());
    default:
      return -1;
  }
}

cplx JacobiOperator::a(long j) const {
  if (j >= lo_ && j <= hi()) return a_[j - lo_];
  if (ext_ == Extension::zero) return 0.0;
  if (ext_ == Extension::sampled) return outside_(j).first;
  return a_[wrap(j) - lo_];
}

double JacobiOperator::b(long j) const {
  if (j >= lo_ && j <= hi()) return b_[j - lo_];
  if (ext_ == Extension::zero) return 0.0;
  if (ext_ == Extension::sampled) return outside_(j).second;
  return b_[wrap(j) - lo_];
}

Eigen::MatrixXcd Truncation::dense() const {
  const long n = size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (long k = 0; k < n; ++k) m(k, k) = diag[k];
  for (long k = 0; k + 1 < n; ++k) {
    m(k, k + 1) = upper[k];
    m(k + 1, k) = std::conj(upper[k]);
  }
  return m;
}

Truncation truncate(const JacobiOperator& op, long j1, long j2) {
  if (j2 <= j1) throw DomainError("empty truncation");
  Truncation t;
  t.j1 = j1;
  t.j2 = j2;
  for (long n = j1 + 1; n <= j2; ++n) {
    t.diag.push_back(op.b(n));
    if (n < j2) t.upper.push_back(op.a(n));
  }
  return t;
}

std::vector<double> eigenvalues(const Truncation& t) {
  std::vector<double> off2(t.upper.size());
  for (std::size_t k = 0; k < off2.size(); ++k) off2[k] = std::norm(t.upper[k]);
  return sturm_eigenvalues(t.diag, off2);
}

Mat2 cocycle_matrix(const JacobiOperator& op, cplx E, long j) {
  Mat2 m;
  m << E - op.b(j), -std::conj(op.a(j - 1)), op.a(j), 0.0;
  return m;
}

MatSequence cocycle_map(const JacobiOperator& op, cplx E) {
  std::vector<Mat2> v;
  v.reserve(op.length());
  for (long j = op.lo(); j <= op.hi(); ++j) v.push_back(cocycle_matrix(op, E, j));
  return MatSequence(op.lo(), std::move(v));
}

cplx char_poly(const JacobiOperator& op, long j, long N, cplx E) {
  if (N < -1) throw DomainError("characteristic polynomial needs N >= -1");
  if (N == -1) return 0.0;
  cplx q2 = 0.0, q1 = 1.0;
  for (long k = 1; k <= N; ++k) {
    const long i = j + N - k;
    const cplx q = (E - op.b(i)) * q1 - std::norm(op.a(i)) * q2;
    q2 = q1;
    q1 = q;
  }
  return q1;
}

Mat2 cocycle_via_charpoly(const JacobiOperator& op, long j, long N, cplx E) {
  if (N < 0) throw DomainError("negative product length");
  if (N == 0) return Mat2::Identity();
  const cplx al = std::conj(op.a(j - 1));
  const cplx ar = op.a(j + N - 1);
  Mat2 m;
  m << char_poly(op, j, N, E), -al * char_poly(op, j + 1, N - 1, E),
      ar * char_poly(op, j, N - 1, E), -al * ar * char_poly(op, j + 1, N - 2, E);
  return m;
}

namespace {

long nearest_zero(const JacobiOperator& op, long target, long reach, long lo,
                  long hi) {
  for (long d = 0; d <= reach; ++d) {
    for (long z : {target - d, target + d}) {
      if (z >= lo && z <= hi && op.a_is_zero(z)) return z;
    }
  }
  return target;
}

bool has_near(const std::vector<double>& sorted, double x, double tol) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x - tol);
  return it != sorted.end() && *it <= x + tol;
}

}  // namespace

SpectrumApprox spectrum(const JacobiOperator& op, const SpectrumOptions& opt) {
  const long L = op.length();
  std::vector<long> sizes = opt.sizes;
  if (sizes.empty()) sizes = {std::max(1L, L / 2), std::max(1L, 3 * L / 4), L};
  SpectrumApprox out;
  out.resolution = opt.resolution;
  if (!(out.resolution > 0)) {
    long smallest = L;
    for (long n : sizes) smallest = std::min(smallest, std::max(1L, n));
    out.resolution = 8.0 * op.bound() / smallest;
  }
  const long centre = op.lo() + L / 2;
  std::size_t biggest = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const long n = std::min(sizes[i], L);
    if (n < 1) throw DomainError("truncation size must be positive");
    long j1 = centre - n / 2 - 1 + static_cast<long>(i);
    j1 = std::clamp(j1, op.lo() - 1, op.hi() - n);
    long j2 = j1 + n;
    if (opt.snap_reach > 0) {
      const long s1 = nearest_zero(op, j1, opt.snap_reach, op.lo() - 1, op.hi() - 1);
      const long s2 = nearest_zero(op, j2, opt.snap_reach, s1 + 1, op.hi());
      if (s2 > s1) {
        j1 = s1;
        j2 = s2;
      }
    }
    out.rungs.push_back({j1, j2, eigenvalues(truncate(op, j1, j2))});
    if (j2 - j1 > out.rungs[biggest].j2 - out.rungs[biggest].j1) biggest = i;
  }
  for (double e : out.rungs[biggest].eigenvalues) {
    bool ok = true;
    for (std::size_t i = 0; i < out.rungs.size() && ok; ++i)
      if (i != biggest) ok = has_near(out.rungs[i].eigenvalues, e, out.resolution);
    (ok ? out.eigenvalues : out.unconfirmed).push_back(e);
  }
  for (double e : out.eigenvalues) {
    if (!out.cover.empty() && e - out.cover.back().hi <= out.resolution)
      out.cover.back().hi = e;
    else
      out.cover.push_back({e, e});
  }
  return out;
}

double dist_to_spectrum(const SpectrumApprox& s, cplx E) {
  double best = std::numeric_limits<double>::infinity();
  const double x = E.real(), y = E.imag();
  auto it = std::lower_bound(s.cover.begin(), s.cover.end(), x,
                             [](const Interval& iv, double v) { return iv.hi < v; });
  for (auto k : {it - 1, it}) {
    if (k < s.cover.begin() || k >= s.cover.end()) continue;
    const double dx = std::max({k->lo - x, 0.0, x - k->hi});
    best = std::min(best, std::hypot(dx, y));
  }
  return best;
}

double dist_to_spectrum_boundary(const SpectrumApprox& s, cplx E) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : s.cover)
    best = std::min({best, std::abs(E - iv.lo), std::abs(E - iv.hi)});
  return best;
}

namespace {

TridiagonalLU shifted_section(const JacobiOperator& op, cplx E, long j1, long j2) {
  std::vector<cplx> lower, diag, upper;
  for (long n = j1 + 1; n <= j2; ++n) {
    diag.push_back(op.b(n) - E);
    if (n < j2) {
      upper.push_back(op.a(n));
      lower.push_back(std::conj(op.a(n)));
    }
  }
  return TridiagonalLU(std::move(lower), std::move(diag), std::move(upper));
}

}  // namespace

Resolvent::Resolvent(const JacobiOperator& op, cplx E, long j1, long j2)
    : j1_(j1), j2_(j2), E_(E), lu_(shifted_section(op, E, j1, j2)) {}

std::vector<cplx> Resolvent::column(long k) const {
  if (k <= j1_ || k > j2_) throw RangeError("column outside the section");
  std::vector<cplx> rhs(j2_ - j1_, 0.0);
  rhs[k - first()] = 1.0;
  lu_.solve(rhs);
  return rhs;
}

cplx GreensData::value(long n) const {
  if (n < first || n > last()) throw RangeError("site outside stored column");
  return values[n - first];
}

namespace {

void fit_rates(GreensData& g) {
  double peak = 0;
  for (const auto& v : g.values) peak = std::max(peak, std::abs(v));
  const double floor = 1e-13 * peak;
  double gfit = std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (long n = g.first; n <= g.last(); ++n) {
    const double d = std::abs(n - g.column);
    const double v = std::abs(g.value(n));
    if (d == 0 || !(v > floor)) continue;
    gfit = std::min(gfit, std::log(2.0 / (g.delta * v)) / d);
    const double y = -std::log(v);
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
    ++cnt;
  }
  if (!std::isfinite(gfit)) gfit = std::log(2.0 / (g.delta * floor));
  g.gamma_fit = gfit;
  const double den = cnt * sxx - sx * sx;
  g.gamma_ls = cnt > 1 && den > 0 ? (cnt * sxy - sx * sy) / den : gfit;
}

}  // namespace

GreensData greens_column(const JacobiOperator& op, cplx E, long j,
                         const SpectrumApprox& spec, const GreensOptions& opt) {
  if (opt.margin < 20) throw DomainError("margin must be at least 20");
  GreensData g;
  g.energy = E;
  g.column = j;
  g.delta = dist_to_spectrum(spec, E);
  if (!(g.delta >= opt.min_delta * op.bound()))
    throw IllConditioned(g.delta, "energy too close to the spectrum");
  g.a_left = op.a(j - 1);
  g.a_right = op.a(j);
  g.b_center = op.b(j);
  long margin = opt.margin;
  for (;;) {
    const long j1 = j - opt.radius - margin - 1;
    const long j2 = j + opt.radius + margin;
    Resolvent r(op, E, j1, j2);
    const auto col = r.column(j);
    g.first = j - opt.radius;
    g.values.assign(col.begin() + margin, col.begin() + margin + 2 * opt.radius + 1);
    g.margin = margin;
    fit_rates(g);
    const double rate = std::min(g.gamma_fit, g.gamma_ls);
    if (rate > 0 && std::exp(-rate * margin) < opt.boundary_tol) break;
    const long want = rate > 0 ? static_cast<long>(std::ceil(
                                     std::log(1.0 / opt.boundary_tol) / rate)) + 1
                               : 2 * margin;
    if (margin >= opt.max_margin) break;
    margin = std::min(opt.max_margin, std::max(want, margin + 1));
  }
  return g;
}

GreensData greens_column(const JacobiOperator& op, cplx E, long j, long margin) {
  GreensOptions opt;
  opt.margin = margin;
  return greens_column(op, E, j, spectrum(op), opt);
}

double normalization_identity_check(const GreensData& g) {
  const long j = g.column;
  const cplx lhs = std::conj(g.a_left) * g.value(j - 1) + g.a_right * g.value(j + 1) +
                   (g.b_center - g.energy) * g.value(j);
  return std::abs(lhs - 1.0);
}

double row_identity_residual(const JacobiOperator& op, cplx E, long j, long margin) {
  Resolvent r(op, E, j - margin - 2, j + margin + 1);
  const auto gm = r.column(j - 1), g0 = r.column(j), gp = r.column(j + 1);
  const long i = j - r.first();
  const cplx lhs = op.a(j - 1) * gm[i] + std::conj(op.a(j)) * gp[i] +
                   (op.b(j) - E) * g0[i];
  return std::abs(lhs - 1.0);
}

double combes_thomas_rate(const JacobiOperator& op, double delta) {
  if (op.sup_a() == 0) return std::numeric_limits<double>::infinity();
  return std::asinh(delta / (4.0 * op.sup_a()));
}

cplx wronskian(const JacobiOperator& op, const std::vector<cplx>& phi,
               const std::vector<cplx>& psi, long first, long m) {
  const long i = m - first;
  if (i < 0 || i + 1 >= static_cast<long>(std::min(phi.size(), psi.size())))
    throw RangeError("Wronskian site outside the solutions");
  return op.a(m) * (phi[i + 1] * psi[i] - phi[i] * psi[i + 1]);
}

std::vector<cplx> transfer_solution(const JacobiOperator& op, cplx E, long j0,
                                    cplx at_j0, cplx at_j0_minus_1, long from,
                                    long to) {
  if (from > j0 - 1 || to < j0) throw RangeError("range must contain j0-1, j0");
  std::vector<cplx> psi(to - from + 1);
  psi[j0 - from] = at_j0;
  psi[j0 - 1 - from] = at_j0_minus_1;
  for (long n = j0; n < to; ++n) {
    if (op.a_is_zero(n)) throw DomainError("zero coupling at " + std::to_string(n));
    psi[n + 1 - from] = ((E - op.b(n)) * psi[n - from] -
                         std::conj(op.a(n - 1)) * psi[n - 1 - from]) / op.a(n);
  }
  for (long n = j0 - 1; n > from; --n) {
    if (op.a_is_zero(n - 1))
      throw DomainError("zero coupling at " + std::to_string(n - 1));
    psi[n - 1 - from] = ((E - op.b(n)) * psi[n - from] - op.a(n) * psi[n + 1 - from]) /
                        std::conj(op.a(n - 1));
  }
  return psi;
}

}  // namespace domsplit
