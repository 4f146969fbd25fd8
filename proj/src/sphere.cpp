#include "domsplit/sphere.hpp"

#include <cmath>
#include <limits>

namespace domsplit {

ProjPoint::ProjPoint(const Vec2& v) {
  if (!v.allFinite()) throw DomainError("non-finite projective vector");
  const double s = std::max(std::abs(v(0)), std::abs(v(1)));
  if (s == 0) throw DomainError("zero vector has no projective class");
  Vec2 w = v / s;
  w /= w.norm();
  const int k = std::abs(w(0)) >= std::abs(w(1)) ? 0 : 1;
  const double m = std::abs(w(k));
  w *= std::conj(w(k)) / m;
  w(k) = cplx(std::sqrt(1.0 - std::norm(w(1 - k))), 0.0);
  rep_ = w;
}

ProjPoint ProjPoint::from_affine(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return infinity();
  return ProjPoint(Vec2(cplx(1), z));
}

cplx ProjPoint::to_affine() const {
  if (is_infinity()) return {std::numeric_limits<double>::infinity(), 0.0};
  return rep_(1) / rep_(0);
}

double chordal_dist(const ProjPoint& p, const ProjPoint& q) {
  const cplx d = p.rep()(0) * q.rep()(1) - p.rep()(1) * q.rep()(0);
  return std::min(2.0, 2.0 * std::abs(d));
}

double chordal_dist_affine(cplx z, cplx w) {
  const bool zi = !std::isfinite(std::abs(z));
  const bool wi = !std::isfinite(std::abs(w));
  if (zi && wi) return 0.0;
  if (zi) return 2.0 / std::sqrt(1.0 + std::norm(w));
  if (wi) return 2.0 / std::sqrt(1.0 + std::norm(z));
  return 2.0 * std::abs(z - w) /
         (std::sqrt(1.0 + std::norm(z)) * std::sqrt(1.0 + std::norm(w)));
}

ProjPoint act(const Mat2& A, const ProjPoint& p) {
  const Vec2 w = A * p.rep();
  const double nw = w.norm();
  if (nw == 0 || (is_singular(A) && nw <= 1e-13 * operator_norm(A)))
    throw UndefinedAction("point lies in the kernel");
  return ProjPoint(w);
}

cplx act_affine(const Mat2& A, cplx z) {
  return act(A, ProjPoint::from_affine(z)).to_affine();
}

bool GenCircle::contains(cplx z) const {
  switch (kind) {
    case Kind::disk:
      return std::abs(z - center) <= radius;
    case Kind::exterior_disk:
      return std::abs(z - center) >= radius;
    case Kind::half_plane:
      return ((z - line_point) * std::conj(line_normal)).real() >= 0;
  }
  return false;
}

namespace {

cplx circumcenter(cplx p1, cplx p2, cplx p3) {
  const cplx a = p2 - p1;
  const cplx b = p3 - p1;
  const double d = 2.0 * (a.real() * b.imag() - a.imag() * b.real());
  const double na = std::norm(a);
  const double nb = std::norm(b);
  const double x = (na * b.imag() - nb * a.imag()) / d;
  const double y = (a.real() * nb - b.real() * na) / d;
  return p1 + cplx(x, y);
}

}  // namespace

GenCircle mobius_disk_image(const Mat2& A, double alpha) {
  if (!(alpha > 0)) throw DomainError("disk radius must be positive");
  GenCircle g;
  const cplx a = A(0, 0), b = A(0, 1);

  if (is_singular(A)) {
    // Rank one: the disk collapses onto the range.
    const Vec2 c0 = A.col(0), c1 = A.col(1);
    const Vec2 r = c0.norm() >= c1.norm() ? c0 : c1;
    if (r.norm() == 0) throw UndefinedAction("zero matrix has no action");
    const cplx w = ProjPoint(r).to_affine();
    if (!std::isfinite(w.real())) {
      g.kind = GenCircle::Kind::exterior_disk;
      g.center = 0;
      g.radius = std::numeric_limits<double>::infinity();
      return g;
    }
    g.center = w;
    g.radius = 0;
    return g;
  }

  const double pole_abs = b == cplx(0) ? std::numeric_limits<double>::infinity()
                                       : std::abs(a / b);
  const double pole_arg = b == cplx(0) ? 0.0 : std::arg(-a / b);
  const double pi = std::acos(-1.0);
  cplx w[3];
  for (int k = 0; k < 3; ++k) {
    const double t = pole_arg + pi / 3.0 + 2.0 * pi * k / 3.0;
    w[k] = act_affine(A, std::polar(alpha, t));
  }
  const cplx probe = act_affine(A, cplx(0));

  if (std::abs(pole_abs - alpha) <= 1e-12 * alpha) {
    g.kind = GenCircle::Kind::half_plane;
    // w[1] sits opposite the pole; use the farthest pair for the line.
    cplx p = w[0], q = w[2];
    const cplx dir = (q - p) / std::abs(q - p);
    cplx nrm = dir * cplx(0, 1);
    if (((probe - p) * std::conj(nrm)).real() < 0) nrm = -nrm;
    g.line_point = p;
    g.line_normal = nrm;
    return g;
  }
  g.center = circumcenter(w[0], w[1], w[2]);
  g.radius = std::abs(w[1] - g.center);
  g.kind = pole_abs > alpha ? GenCircle::Kind::disk
                            : GenCircle::Kind::exterior_disk;
  return g;
}

Containment contained_in_disk(const GenCircle& g, double alpha_prime) {
  if (g.kind != GenCircle::Kind::disk)
    return {false, -std::numeric_limits<double>::infinity()};
  const double m = alpha_prime - (std::abs(g.center) + g.radius);
  return {m > 0, m};
}

double schwarz_pick_rho(double alpha, double alpha_prime) {
  if (!(alpha_prime > 0 && alpha_prime < alpha))
    throw DomainError("need 0 < alpha' < alpha");
  const double x = alpha_prime / alpha;
  return 2.0 * x / (1.0 + x * x);
}

double separation_constant(double alpha, double alpha_prime) {
  if (!(alpha_prime > 0 && alpha_prime < alpha))
    throw DomainError("need 0 < alpha' < alpha");
  return 2.0 * (alpha - alpha_prime) /
         std::sqrt((1.0 + alpha * alpha) * (1.0 + alpha_prime * alpha_prime));
}

}  // namespace domsplit
