#include "domsplit/certifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace domsplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Real>
Mat2T<Real> scaled_product(const MatSequence& seq, long j, long n) {
  Mat2T<Real> p = Mat2T<Real>::Identity();
  for (long k = j; k < j + n; ++k) {
    p = seq[k].template cast<std::complex<Real>>() * p;
    const Real s = max_abs_entry(p);
    if (s > 0) p /= s;
  }
  return p;
}

Mat2 product_for_directions(const MatSequence& seq, long j, long n) {
  if (n > 32) return scaled_product<long double>(seq, j, n).cast<cplx>();
  return scaled_product<double>(seq, j, n);
}

ProjPoint range_of(const Mat2& p, long at) {
  const Vec2 c0 = p.col(0), c1 = p.col(1);
  const Vec2 r = c0.norm() >= c1.norm() ? c0 : c1;
  if (r.norm() == 0) throw DegenerateCocycle(at, "partial product vanishes");
  return ProjPoint(r);
}

ProjPoint kernel_of(const Mat2& p, long at) {
  const Vec2 r0(p(0, 0), p(0, 1)), r1(p(1, 0), p(1, 1));
  const Vec2 r = r0.norm() >= r1.norm() ? r0 : r1;
  if (r.norm() == 0) throw DegenerateCocycle(at, "partial product vanishes");
  return ProjPoint(Vec2(-r(1), r(0)));
}

Mat2 frame(const SplittingField& f, long j) {
  Mat2 d;
  d.col(0) = f.u_at(j).rep();
  d.col(1) = f.s_at(j).rep();
  return d;
}

Mat2 inverse(const Mat2& m) {
  Mat2 r;
  const cplx d = det(m);
  r << m(1, 1) / d, -m(0, 1) / d, -m(1, 0) / d, m(0, 0) / d;
  return r;
}

}  // namespace

SplittingField power_directions(const MatSequence& seq, long burn) {
  if (burn < 1) throw DomainError("burn-in must be positive");
  if (seq.length() <= 2 * burn) throw RangeError("window too short for burn-in");
  SplittingField f;
  f.lo = seq.lo() + burn;
  f.hi = seq.hi() - burn;
  f.burn_in = burn;
  f.provenance = Provenance::power_iteration;

  std::vector<char> sing(seq.length());
  for (long k = seq.lo(); k <= seq.hi(); ++k) sing[k - seq.lo()] = is_singular(seq[k]);
  auto singular = [&](long k) { return sing[k - seq.lo()] != 0; };

  for (long j = f.lo; j <= f.hi; ++j) {
    long last = std::numeric_limits<long>::min();
    for (long k = j - 1; k >= j - burn; --k)
      if (singular(k)) {
        last = k;
        break;
      }
    if (last != std::numeric_limits<long>::min()) {
      f.u.push_back(range_of(product_for_directions(seq, last, j - last), j));
    } else {
      f.u.push_back(ProjPoint(Vec2(svd2(product_for_directions(seq, j - burn, burn)).U.col(0))));
    }

    long first = std::numeric_limits<long>::max();
    for (long k = j; k < j + burn; ++k)
      if (singular(k)) {
        first = k;
        break;
      }
    if (first != std::numeric_limits<long>::max()) {
      f.s.push_back(kernel_of(product_for_directions(seq, j, first - j + 1), j));
    } else {
      f.s.push_back(ProjPoint(Vec2(svd2(product_for_directions(seq, j, burn)).V.col(1))));
    }
  }
  return f;
}

SplittingField greens_directions(const JacobiOperator& op, cplx E, long lo,
                                 long hi, long margin) {
  if (hi < lo) throw RangeError("empty direction range");
  Resolvent r(op, E, lo - 3 - margin, hi + 1 + margin);
  // rows k-2 .. k+2 of column k
  const long k0 = lo - 2, k1 = hi + 1;
  std::vector<std::array<cplx, 5>> near(k1 - k0 + 1);
  double peak = 0;
  for (long k = k0; k <= k1; ++k) {
    const auto col = r.column(k);
    for (int d = -2; d <= 2; ++d) {
      const long n = k + d;
      near[k - k0][d + 2] = (n >= r.first() && n <= r.last()) ? col[n - r.first()] : 0.0;
    }
    peak = std::max(peak, std::abs(col[k - r.first()]));
  }
  auto g = [&](long k, long n) { return near[k - k0][n - k + 2]; };

  SplittingField f;
  f.lo = lo;
  f.hi = hi;
  f.provenance = Provenance::greens_columns;
  auto pick = [&](const Vec2& p, const Vec2& q, bool forced, long j) {
    const double np = p.norm(), nq = q.norm();
    if (std::max(np, nq) <= 1e-14 * peak)
      throw InternalInconsistency("both Green's function candidates vanish at " +
                                  std::to_string(j));
    if (forced || np >= 0.5 * std::max(np, nq)) return ProjPoint(p);
    return ProjPoint(q);
  };
  for (long j = lo; j <= hi; ++j) {
    const Vec2 sp(g(j - 1, j), g(j - 1, j - 1));
    const Vec2 sq(g(j - 2, j), g(j - 2, j - 1));
    f.s.push_back(pick(sp, sq, op.a_is_zero(j - 2), j));
    const Vec2 up(g(j, j), g(j, j - 1));
    const Vec2 uq(g(j + 1, j), g(j + 1, j - 1));
    f.u.push_back(pick(up, uq, op.a_is_zero(j), j));
  }
  return f;
}

InvarianceReport verify_invariance(const MatSequence& seq, const SplittingField& f) {
  InvarianceReport rep;
  for (long j = f.lo; j < f.hi; ++j) {
    const Mat2& B = seq.at(j);
    const Vec2 bu = B * f.u_at(j).rep();
    if (bu.norm() == 0 || (is_singular(B) && bu.norm() <= 1e-13 * operator_norm(B)))
      throw DegenerateCocycle(j, "B(j) annihilates u(j)");
    const double du = chordal_dist(ProjPoint(bu), f.u_at(j + 1));
    double ds = 0;
    const Vec2 bs = B * f.s_at(j).rep();
    const bool killed = is_singular(B) && bs.norm() <= 1e-10 * operator_norm(B);
    if (!killed) ds = chordal_dist(ProjPoint(bs), f.s_at(j + 1));
    rep.u_residual = std::max(rep.u_residual, du);
    rep.s_residual = std::max(rep.s_residual, ds);
    if (std::max(du, ds) > rep.residual) {
      rep.residual = std::max(du, ds);
      rep.worst_site = j;
    }
  }
  return rep;
}

Domination domination_at(const MatSequence& seq, const SplittingField& f, long N,
                         double lambda) {
  const long last = std::min(f.hi, seq.hi() - N + 1);
  if (last < f.lo) throw RangeError("no site admits an N-step product");
  double worst = kInf;
  for (long j = f.lo; j <= last; ++j) {
    Vec2 pu = f.u_at(j).rep(), ps = f.s_at(j).rep();
    for (long k = j; k < j + N; ++k) {
      pu = seq[k] * pu;
      ps = seq[k] * ps;
      const double s = std::max(pu.norm(), ps.norm());
      if (s > 0) {
        pu /= s;
        ps /= s;
      }
    }
    const double ns = ps.norm();
    worst = std::min(worst, ns == 0 ? kInf : pu.norm() / ns);
  }
  return {N, worst - lambda, worst};
}

std::optional<Domination> verify_domination(const MatSequence& seq,
                                            const SplittingField& f, long n_max,
                                            double lambda) {
  const long last = std::min(f.hi, seq.hi());
  if (last < f.lo) return std::nullopt;
  std::vector<Vec2> pu, ps;
  for (long j = f.lo; j <= last; ++j) {
    pu.push_back(f.u_at(j).rep());
    ps.push_back(f.s_at(j).rep());
  }
  for (long N = 1; N <= n_max; ++N) {
    double worst = kInf;
    bool any = false;
    for (long j = f.lo; j <= last; ++j) {
      const long k = j + N - 1;
      if (k > seq.hi()) break;
      auto& a = pu[j - f.lo];
      auto& b = ps[j - f.lo];
      a = seq[k] * a;
      b = seq[k] * b;
      const double s = std::max(a.norm(), b.norm());
      if (s > 0) {
        a /= s;
        b /= s;
      }
      const double nb = b.norm();
      worst = std::min(worst, nb == 0 ? kInf : a.norm() / nb);
      any = true;
    }
    if (!any) break;
    if (worst > lambda) return Domination{N, worst - lambda, worst};
  }
  return std::nullopt;
}

double verify_separation(const SplittingField& f) {
  double m = kInf;
  for (long j = f.lo; j <= f.hi; ++j) m = std::min(m, chordal_dist(f.u_at(j), f.s_at(j)));
  return m;
}

namespace {

struct SiteData {
  Mat2 lam;
  double K;
};

std::vector<SiteData> conjugated_products(const MatSequence& seq,
                                          const SplittingField& f, long N) {
  std::vector<SiteData> out;
  for (long j = f.lo; j + N <= f.hi && j + N - 1 <= seq.hi(); ++j) {
    const Mat2 d0 = frame(f, j), d1 = frame(f, j + N);
    const Mat2 d1i = inverse(d1);
    out.push_back({d1i * cocycle_product(seq, j, N) * d0,
                   operator_norm(d1i) * operator_norm(d0)});
  }
  return out;
}

}  // namespace

std::optional<ConeCertificate> cone_certificate(const MatSequence& seq,
                                                const SplittingField& f, long N,
                                                const std::vector<double>& grid) {
  const auto sites = conjugated_products(seq, f, N);
  if (sites.empty()) return std::nullopt;
  std::optional<ConeCertificate> best;
  for (double al : grid) {
    for (double ap : grid) {
      if (!(ap < al)) continue;
      double worst = kInf;
      for (const auto& s : sites) {
        const double n = operator_norm(s.lam);
        if (n == 0) {
          worst = -kInf;
          break;
        }
        try {
          worst = std::min(worst, contained_in_disk(mobius_disk_image(s.lam / n, al), ap).margin);
        } catch (const UndefinedAction&) {
          worst = -kInf;
        }
        if (worst <= 0) break;
      }
      if (worst > 0 && (!best || worst > best->clearance))
        best = ConeCertificate{al, ap, worst, N};
    }
  }
  return best;
}

const char* to_string(DSStatus s) {
  switch (s) {
    case DSStatus::valid:
      return "valid";
    case DSStatus::marginal:
      return "marginal";
    case DSStatus::failed:
      return "failed";
  }
  return "failed";
}

namespace {

DSCertificate fail(DSCertificate c, int cond, std::string why) {
  c.status = DSStatus::failed;
  c.failed_condition = cond;
  c.reason = std::move(why);
  return c;
}

double max_field_gap(const SplittingField& a, const SplittingField& b) {
  const long lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  double m = 0;
  for (long j = lo; j <= hi; ++j)
    m = std::max({m, chordal_dist(a.u_at(j), b.u_at(j)), chordal_dist(a.s_at(j), b.s_at(j))});
  return m;
}

long auto_burn_in(const MatSequence& seq, long floor_burn) {
  const long n = std::min<long>(40, seq.length() / 2);
  double rate = 1.0;
  if (n >= 1) {
    const long c = seq.lo() + (seq.length() - n) / 2;
    const auto sv = singular_values(product_for_directions(seq, c, n));
    rate = sv.second > 0 ? std::pow(sv.first / sv.second, 1.0 / n) : kInf;
  }
  if (!(rate > 1.0 + 1e-9)) return 4 * floor_burn;
  if (!std::isfinite(rate)) return floor_burn;
  const double want = std::ceil(30.0 / std::log2(rate));
  return std::max<long>(floor_burn, std::min(want, 1e6));
}

}  // namespace

DSCertificate certify(const MatSequence& seq, const CertifierOptions& opt) {
  const long len = seq.length();
  const long max_burn = (len - std::max<long>(10, len / 4)) / 2;
  if (max_burn < 2) throw RangeError("window too short to certify");
  long burn = opt.burn_in > 0 ? opt.burn_in : auto_burn_in(seq, opt.burn_in_min);
  burn = std::min(burn, max_burn);

  SplittingField field;
  try {
    if (2 * burn <= max_burn && opt.burn_in == 0) {
      SplittingField prev = power_directions(seq, burn);
      for (;;) {
        SplittingField next = power_directions(seq, 2 * burn);
        next.convergence_error = max_field_gap(prev, next);
        next.converged = next.convergence_error <= opt.converge_tol;
        burn *= 2;
        field = std::move(next);
        if (field.converged || 2 * burn > max_burn) break;
        prev = field;
      }
    } else {
      field = power_directions(seq, burn);
      const SplittingField half = power_directions(seq, std::max<long>(1, burn / 2));
      field.convergence_error = max_field_gap(half, field);
      field.converged = field.convergence_error <= opt.converge_tol;
    }
  } catch (const DegenerateCocycle& e) {
    DSCertificate c;
    return fail(c, 4, e.what());
  }
  if (!field.converged) {
    DSCertificate c;
    c.field = std::move(field);
    return fail(std::move(c), 2, "direction fields do not converge");
  }
  return certify_field(seq, std::move(field), opt);
}

DSCertificate certify_field(const MatSequence& seq, SplittingField field,
                            const CertifierOptions& opt) {
  DSCertificate c;
  c.lambda = opt.lambda;
  c.field = std::move(field);
  const SplittingField& f = c.field;
  if (f.size() < 2) return fail(std::move(c), 1, "field too short");

  try {
    c.invariance_residual = verify_invariance(seq, f).residual;
  } catch (const DegenerateCocycle& e) {
    c.invariance_residual = kInf;
    return fail(std::move(c), 1, e.what());
  }
  if (!(c.invariance_residual <= opt.res_max))
    return fail(std::move(c), 1, "fields are not invariant");

  auto dom = verify_domination(seq, f, opt.n_max, opt.lambda);
  if (!dom) return fail(std::move(c), 2, "no domination up to n_max");
  bool marginal = false;
  if (dom->margin < opt.marginal_band) {
    std::optional<Domination> better;
    for (long N = dom->N + 1; N <= opt.n_max && N <= seq.length(); ++N) {
      const auto d = domination_at(seq, f, N, opt.lambda);
      if (d.margin >= opt.marginal_band) {
        better = d;
        break;
      }
    }
    if (better)
      dom = better;
    else
      marginal = true;
  }
  c.N = dom->N;
  c.domination_margin = dom->margin;

  c.delta_sep = verify_separation(f);
  if (!(c.delta_sep >= opt.delta_min))
    return fail(std::move(c), 3, "splitting directions not separated");

  const long last = std::min(f.hi, seq.hi() - c.N + 1);
  c.m_N = norm_floor(seq, c.N, f.lo, last);
  c.floor_threshold = opt.floor_rel * std::pow(seq.sup_bound(), static_cast<double>(c.N));
  for (long n = 1; n <= opt.floor_prime_n; ++n) {
    const long l = std::min(f.hi, seq.hi() - n + 1);
    if (l < f.lo) break;
    c.floor_prime.push_back(norm_floor(seq, n, f.lo, l));
  }
  if (!(c.m_N >= c.floor_threshold))
    return fail(std::move(c), 4, "N-step norm floor below threshold");

  c.status = marginal ? DSStatus::marginal : DSStatus::valid;
  c.cone = cone_certificate(seq, f, c.N, opt.alpha_grid);
  if (opt.stability && c.cone) c.epsilon = stability_radius(seq, c, opt);
  return c;
}

double stability_radius(const MatSequence& seq, const DSCertificate& cert,
                        const CertifierOptions& opt) {
  if (!cert.holds() || cert.N < 1) return 0.0;
  const long N = cert.N;
  const auto sites = conjugated_products(seq, cert.field, N);
  if (sites.empty()) return 0.0;
  double K = 0, gamma = kInf, off = 0, q = 0;
  for (const auto& s : sites) {
    K = std::max(K, s.K);
    const double lp = std::abs(s.lam(0, 0)), lm = std::abs(s.lam(1, 1));
    gamma = std::min(gamma, lp);
    off = std::max({off, std::abs(s.lam(0, 1)), std::abs(s.lam(1, 0))});
    q = std::max(q, lp > 0 ? lm / lp : kInf);
  }
  if (!(gamma > 0) || !std::isfinite(q)) return 0.0;
  const double M = seq.sup_bound();
  const double MN = std::pow(M, static_cast<double>(N));
  double best = 0;
  for (double al : opt.alpha_grid) {
    for (double ap : opt.alpha_grid) {
      if (!(ap < al)) continue;
      const double c0 = ap - al * q;
      if (!(c0 > 0)) continue;
      const double c_small = gamma / (2 * (1 + al));
      const double C = (1 + al) * (2 + al) / gamma;
      const double eta_lam = std::min(c_small, c0 / C) * (1 - 1e-9);
      const double eta_b = (eta_lam - off) / K;
      if (!(eta_b > 0)) continue;
      const double eps = M * std::expm1(std::log1p(eta_b / MN) / N);
      best = std::max(best, eps);
    }
  }
  return best;
}

MatSequence subsample(const MatSequence& seq, long N, long m) {
  if (N < 1) throw DomainError("subsampling step must be positive");
  auto fdiv = [](long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  const long k_lo = -fdiv(-(seq.lo() - m), N);
  const long k_hi = fdiv(seq.hi() - m - N + 1, N);
  if (k_hi < k_lo) throw RangeError("window too short to subsample");
  std::vector<Mat2> v;
  for (long k = k_lo; k <= k_hi; ++k) v.push_back(cocycle_product(seq, k * N + m, N));
  return MatSequence(k_lo, std::move(v));
}

bool SubsampleCheck::consistent() const {
  bool all = true;
  for (bool b : subsampled) all = all && b;
  return all == original;
}

SubsampleCheck subsample_equivalence_check(const MatSequence& seq, long N,
                                           const CertifierOptions& opt) {
  SubsampleCheck r;
  r.original = certify(seq, opt).holds();
  for (long m = 0; m < N; ++m) r.subsampled.push_back(certify(subsample(seq, N, m), opt).holds());
  return r;
}

}  // namespace domsplit
