#include <doctest.h>

#include <cmath>
#include <random>

#include "domsplit/sphere.hpp"
#include "test_util.hpp"

using namespace domsplit;

namespace {

// Stereographic image on the sphere of radius 1 in R^3 (north pole = infinity).
Eigen::Vector3d on_sphere(cplx z) {
  if (!std::isfinite(std::abs(z))) return {0, 0, 1};
  const double r2 = std::norm(z);
  return {2 * z.real() / (1 + r2), 2 * z.imag() / (1 + r2), (r2 - 1) / (r2 + 1)};
}

double sphere_chord(cplx z, cplx w) { return (on_sphere(z) - on_sphere(w)).norm(); }

cplx random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0, 1);
  return std::polar(radius * std::sqrt(u(rng)), 6.283185307179586 * u(rng));
}

}  // namespace

TEST_CASE("chordal distance matches the Euclidean chord on the sphere") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 400; ++t) {
    const cplx z = random_point(rng, 5), w = random_point(rng, 5);
    const auto pz = ProjPoint::from_affine(z), pw = ProjPoint::from_affine(w);
    CHECK(std::abs(chordal_dist(pz, pw) - sphere_chord(z, w)) <= 1e-12);
    CHECK(std::abs(chordal_dist_affine(z, w) - sphere_chord(z, w)) <= 1e-12);
    CHECK(chordal_dist(pz, pw) <= 2.0);
  }
  CHECK(chordal_dist(ProjPoint(), ProjPoint::infinity()) == 2.0);
  CHECK(std::abs(chordal_dist(ProjPoint::from_affine(1.0), ProjPoint::from_affine(-1.0)) - 2.0) < 1e-15);
  CHECK(std::abs(chordal_dist_affine(3.0, INFINITY) - sphere_chord(3.0, INFINITY)) < 1e-15);
}

TEST_CASE("projective points are scale invariant") {
  const Vec2 v(cplx(1, 2), cplx(-3, 0.5));
  const ProjPoint p(v), q(Vec2(v * cplx(-0.2, 7.0)));
  CHECK(chordal_dist(p, q) < 1e-15);
  CHECK(std::abs(p.to_affine() - v(1) / v(0)) < 1e-14);
  CHECK(ProjPoint(Vec2(cplx(0), cplx(0, 3))).is_infinity());
  CHECK(ProjPoint(Vec2(cplx(0, -2), cplx(0))).rep() == Vec2(cplx(1), cplx(0)));
  CHECK_THROWS_AS(ProjPoint(Vec2::Zero()), DomainError);
}

TEST_CASE("action is a Mobius map") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const Mat2 A = testutil::random_mat(rng);
    const cplx z = random_point(rng, 3);
    const cplx w = act_affine(A, z);
    const cplx ref = (A(1, 0) + A(1, 1) * z) / (A(0, 0) + A(0, 1) * z);
    CHECK(std::abs(w - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  Mat2 P;
  P << 1.0, 0.0, 2.0, 0.0;  // kernel e2
  CHECK_THROWS_AS(act(P, ProjPoint::infinity()), UndefinedAction);
  CHECK(std::abs(act(P, ProjPoint()).to_affine() - 2.0) < 1e-15);
}

TEST_CASE("Lipschitz bounds of the projective action") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    const Mat2 A = testutil::random_mat(rng);
    const double M = operator_norm(A), delta = std::abs(det(A));
    const auto z = ProjPoint::from_affine(random_point(rng, 4));
    const auto w = ProjPoint::from_affine(random_point(rng, 4));
    const double d = chordal_dist(z, w);
    const double dA = chordal_dist(act(A, z), act(A, w));
    CHECK(dA <= M * M * M * M / (delta * delta) * d * (1 + 1e-10) + 1e-15);
    CHECK(dA >= delta / (M * M) * d * (1 - 1e-10) - 1e-15);
  }
}

TEST_CASE("disk images against the closed form") {
  std::mt19937_64 rng(13);
  int disks = 0, exteriors = 0;
  for (int t = 0; t < 400; ++t) {
    const Mat2 A = testutil::random_mat(rng);
    const double alpha = 0.2 + 0.1 * (t % 20);
    const auto g = mobius_disk_image(A, alpha);
    const cplx a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
    const double den = std::norm(a) - alpha * alpha * std::norm(b);
    const cplx centre = (c * std::conj(a) - alpha * alpha * d * std::conj(b)) / den;
    const double radius = alpha * std::abs(a * d - b * c) / std::abs(den);
    const double tol = 1e-9 * std::max(1.0, std::abs(centre) + radius);
    CHECK(std::abs(g.center - centre) <= tol);
    CHECK(std::abs(g.radius - radius) <= tol);
    if (den > 0) {
      CHECK(g.kind == GenCircle::Kind::disk);
      ++disks;
    } else {
      CHECK(g.kind == GenCircle::Kind::exterior_disk);
      ++exteriors;
    }
    // images of interior points land in the region
    for (int k = 0; k < 5; ++k) {
      const cplx z = random_point(rng, alpha * 0.999);
      const cplx w = act_affine(A, z);
      if (std::isfinite(std::abs(w))) CHECK(g.contains(w));
    }
  }
  CHECK(disks > 50);
  CHECK(exteriors > 50);
}

TEST_CASE("disk image special cases") {
  Mat2 D = Mat2::Zero();
  D(0, 0) = 2.0;
  D(1, 1) = 0.5;
  auto g = mobius_disk_image(D, 1.0);
  CHECK(g.kind == GenCircle::Kind::disk);
  CHECK(std::abs(g.center) < 1e-15);
  CHECK(std::abs(g.radius - 0.25) < 1e-15);
  auto c = contained_in_disk(g, 0.5);
  CHECK(c.contained);
  CHECK(std::abs(c.margin - 0.25) < 1e-15);

  // pole on the boundary: z -> 1 / (1 - z) sends D_1 to Re w > 1/2
  Mat2 H;
  H << 1.0, -1.0, 1.0, 0.0;
  g = mobius_disk_image(H, 1.0);
  CHECK(g.kind == GenCircle::Kind::half_plane);
  CHECK(g.contains(0.6));
  CHECK(g.contains(cplx(3.0, 40.0)));
  CHECK_FALSE(g.contains(0.4));
  CHECK(std::abs(std::abs(std::arg(g.line_normal))) < 1e-12);
  CHECK_FALSE(contained_in_disk(g, 10.0).contained);

  // rank one collapses to the range point
  Mat2 R;
  R << 1.0, 2.0, 3.0, 6.0;
  g = mobius_disk_image(R, 0.5);
  CHECK(g.radius == 0.0);
  CHECK(std::abs(g.center - 3.0) < 1e-14);
}

TEST_CASE("Schwarz-Pick contraction by Monte Carlo") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (auto [al, ap] : {std::pair{1.0, 0.5}, std::pair{1.0, 0.9}, std::pair{0.3, 0.2}}) {
    const double rho = schwarz_pick_rho(al, ap);
    CHECK(rho < 1.0);
    double worst = 0;
    int used = 0;
    while (used < 2000) {
      Mat2 A = testutil::random_mat(rng);
      const auto g = mobius_disk_image(A, al);
      if (g.kind != GenCircle::Kind::disk) continue;
      // post-compose with w -> p w + q so the image is a random disk inside D_ap
      const double r = ap * (0.05 + 0.9 * u(rng));
      const cplx c = random_point(rng, (ap - r) * 0.999);
      const cplx p = r / g.radius, q = c - p * g.center;
      Mat2 S;
      S << 1.0, 0.0, q, p;
      A = S * A;
      const cplx z1 = random_point(rng, al), z2 = random_point(rng, al);
      const cplx f1 = act_affine(A, z1), f2 = act_affine(A, z2);
      const double a2 = al * al;
      const double lhs = std::abs(f2 - f1) / std::abs(a2 - std::conj(f1) * f2);
      const double rhs = std::abs(z2 - z1) / std::abs(a2 - std::conj(z1) * z2);
      worst = std::max(worst, lhs / rhs);
      ++used;
    }
    CHECK(worst <= rho * (1 + 1e-12));
    CHECK(worst > 0.0);
  }
  CHECK(std::abs(schwarz_pick_rho(1.0, 0.5) - 0.8) < 1e-15);
  CHECK_THROWS_AS(schwarz_pick_rho(0.5, 1.0), DomainError);
}

TEST_CASE("separation constant bounds chordal distances") {
  std::mt19937_64 rng(19);
  for (auto [al, ap] : {std::pair{1.0, 0.5}, std::pair{2.0, 1.9}, std::pair{0.3, 0.1}}) {
    const double delta = separation_constant(al, ap);
    for (int t = 0; t < 500; ++t) {
      const cplx z = random_point(rng, ap);
      std::uniform_real_distribution<double> u(0, 1);
      const cplx w = std::polar(al / (0.001 + u(rng)), 6.283185307179586 * u(rng));
      if (std::abs(w) < al) continue;
      CHECK(chordal_dist_affine(z, w) >= delta * (1 - 1e-12));
    }
    // attained on a common ray
    CHECK(std::abs(chordal_dist_affine(ap, al) - delta) < 1e-14);
  }
}
