#include "domsplit/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace domsplit {

namespace {

double frac(double x) {
  const double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

long pos_mod(long a, long m) { return ((a % m) + m) % m; }

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

BaseDynamics BaseDynamics::rotation(long p, long q) {
  if (q < 1) throw DomainError("rotation denominator must be positive");
  BaseDynamics t;
  t.kind_ = Kind::rotation;
  t.p_ = pos_mod(p, q);
  t.q_ = q;
  return t;
}

BaseDynamics BaseDynamics::periodic(long period) {
  if (period < 1) throw DomainError("period must be positive");
  BaseDynamics t;
  t.kind_ = Kind::periodic;
  t.p_ = 1;
  t.q_ = period;
  return t;
}

BaseDynamics BaseDynamics::explicit_sequence() {
  BaseDynamics t;
  t.kind_ = Kind::explicit_sequence;
  return t;
}

BaseState BaseDynamics::step(const BaseState& s, long n) const {
  BaseState r = s;
  r.index = s.index + n;
  if (kind_ != Kind::explicit_sequence) r.index = pos_mod(r.index, q_);
  return r;
}

double BaseDynamics::omega(const BaseState& s) const {
  if (kind_ == Kind::explicit_sequence) return s.phase;
  const long k = pos_mod(pos_mod(s.index, q_) * p_, q_);
  return frac(s.phase + static_cast<double>(k) / static_cast<double>(q_));
}

double cos_2pi(double x) {
  const double r = frac(x);
  if (r == 0.0) return 1.0;
  if (r == 0.25 || r == 0.75) return 0.0;
  if (r == 0.5) return -1.0;
  return std::cos(kTwoPi * r);
}

double circle_dist(double x, double y) {
  const double d = frac(x - y);
  return std::min(d, 1.0 - d);
}

SamplingPair SamplingPair::almost_mathieu(double lambda, double theta) {
  SamplingPair p;
  p.name = "almost_mathieu";
  p.a = [](double, long) { return cplx(1.0); };
  p.b = [lambda, theta](double w, long) { return 2.0 * lambda * cos_2pi(w + theta); };
  p.lip_a = 0;
  p.lip_b = 2.0 * std::abs(lambda) * kTwoPi;
  return p;
}

SamplingPair SamplingPair::singular_cosine(double lambda, double theta) {
  SamplingPair p;
  p.name = "singular_cosine";
  p.a = [](double w, long) { return cplx(cos_2pi(w)); };
  p.b = [lambda, theta](double w, long) { return 2.0 * lambda * cos_2pi(w + theta); };
  p.lip_a = kTwoPi;
  p.lip_b = 2.0 * std::abs(lambda) * kTwoPi;
  return p;
}

SamplingPair SamplingPair::constant(cplx a, double b) {
  SamplingPair p;
  p.name = "constant";
  p.a = [a](double, long) { return a; };
  p.b = [b](double, long) { return b; };
  return p;
}

SamplingPair SamplingPair::periodic(std::vector<cplx> a, std::vector<double> b) {
  if (a.empty() || a.size() != b.size()) throw DomainError("periodic pair needs equal, non-empty tables");
  const long P = static_cast<long>(a.size());
  SamplingPair p;
  p.name = "periodic";
  auto slot = [P](double w) {
    const long k = static_cast<long>(std::llround(frac(w) * P));
    return static_cast<std::size_t>(pos_mod(k, P));
  };
  p.a = [a, slot](double w, long) { return a[slot(w)]; };
  p.b = [b, slot](double w, long) { return b[slot(w)]; };
  p.lip_a = p.lip_b = std::numeric_limits<double>::infinity();
  return p;
}

SamplingPair SamplingPair::table(long first, std::vector<cplx> a, std::vector<double> b) {
  if (a.empty() || a.size() != b.size()) throw DomainError("table pair needs equal, non-empty tables");
  const long L = static_cast<long>(a.size());
  SamplingPair p;
  p.name = "table";
  p.a = [a, first, L](double, long i) { return a[pos_mod(i - first, L)]; };
  p.b = [b, first, L](double, long i) { return b[pos_mod(i - first, L)]; };
  p.lip_a = p.lip_b = std::numeric_limits<double>::infinity();
  return p;
}

std::pair<long, long> convergent(double x, int k) {
  if (!(x > 0 && x < 1)) throw DomainError("convergents need x in (0, 1)");
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int i = 0; i <= k; ++i) {
    const long a = static_cast<long>(std::floor(r));
    const long p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double f = r - a;
    if (f < 1e-15) break;
    r = 1.0 / f;
  }
  return {p1, q1};
}

JacobiOperator realize(const BaseDynamics& T, const SamplingPair& pair,
                       const BaseState& omega, long lo, long hi) {
  if (hi < lo) throw RangeError("empty window");
  auto coeff = [T, pair, omega](long n) {
    const BaseState s = T.step(omega, n);
    const double w = T.omega(s);
    return std::pair<cplx, double>(pair.a(w, s.index), pair.b(w, s.index));
  };
  std::vector<cplx> a;
  std::vector<double> b;
  for (long n = lo; n <= hi; ++n) {
    const auto c = coeff(n);
    a.push_back(c.first);
    b.push_back(c.second);
  }
  return JacobiOperator(lo, std::move(a), std::move(b), coeff);
}

InclusionReport orbit_spectrum_inclusion(const BaseDynamics& T, const SamplingPair& pair,
                                         const BaseState& omega, const BaseState& omega0,
                                         double eps, const InclusionOptions& opt) {
  if (T.kind() == BaseDynamics::Kind::explicit_sequence)
    throw Unsupported("orbit inclusion needs a rotation");
  InclusionReport r;
  const double w = T.omega(omega);
  const long m_max = std::min(opt.m_max, T.q() - 1);
  r.orbit_distance = std::numeric_limits<double>::infinity();
  for (long m = 0; m <= m_max; ++m) {
    const double d = circle_dist(T.omega(T.step(omega0, m)), w);
    if (d < r.orbit_distance) {
      r.orbit_distance = d;
      r.m = m;
    }
  }
  r.kappa = (2.0 * pair.lip_a + pair.lip_b) * r.orbit_distance;
  if (!(r.kappa < eps)) return r;

  const long h = opt.window / 2;
  const auto s = spectrum(realize(T, pair, omega, -h, h), opt.spectrum);
  const auto s0 = spectrum(realize(T, pair, omega0, -h, h), opt.spectrum);
  for (double e : s.eigenvalues) r.worst_distance = std::max(r.worst_distance, dist_to_spectrum(s0, e));
  r.verdict = r.worst_distance <= eps ? Inclusion::yes : Inclusion::no;
  return r;
}

DynamicalReport dynamical_ds_check(const BaseDynamics& T, const SamplingPair& pair,
                                   cplx E, const std::vector<double>& grid,
                                   long half_window, const CertifierOptions& opt) {
  DynamicalReport rep;
  rep.omegas = grid;
  rep.all_hold = !grid.empty();
  rep.min_delta_sep = std::numeric_limits<double>::infinity();
  rep.grid_step = std::numeric_limits<double>::infinity();
  std::vector<ProjPoint> u0, s0;
  for (double w : grid) {
    const auto op = realize(T, pair, BaseState{w, 0}, -half_window, half_window);
    const auto cert = certify(cocycle_map(op, E), opt);
    rep.status.push_back(cert.status);
    rep.N.push_back(cert.N);
    rep.delta_sep.push_back(cert.delta_sep);
    if (!cert.holds() || !cert.field.contains(0)) {
      rep.all_hold = false;
      u0.emplace_back();
      s0.emplace_back();
      continue;
    }
    rep.min_delta_sep = std::min(rep.min_delta_sep, cert.delta_sep);
    rep.max_N = std::max(rep.max_N, cert.N);
    u0.push_back(cert.field.u_at(0));
    s0.push_back(cert.field.s_at(0));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    rep.grid_step = std::min(rep.grid_step, circle_dist(grid[i], grid[i - 1]));
    rep.modulus_u = std::max(rep.modulus_u, chordal_dist(u0[i], u0[i - 1]));
    rep.modulus_s = std::max(rep.modulus_s, chordal_dist(s0[i], s0[i - 1]));
  }
  return rep;
}

}  // namespace domsplit
