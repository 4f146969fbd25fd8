#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "domsplit/jacobi.hpp"
#include "test_util.hpp"

using namespace domsplit;

namespace {

JacobiOperator free_chain(long lo, long hi) {
  return JacobiOperator(lo, std::vector<cplx>(hi - lo + 1, 1.0),
                        std::vector<double>(hi - lo + 1, 0.0), Extension::periodic);
}

std::vector<double> dense_eigenvalues(const Truncation& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.dense());
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + t.size());
  return v;
}

cplx dense_charpoly(const JacobiOperator& op, long j, long N, cplx E) {
  if (N == 0) return 1.0;
  const Eigen::MatrixXcd J = truncate(op, j - 1, j + N - 1).dense();
  const Eigen::MatrixXcd A = E * Eigen::MatrixXcd::Identity(N, N) - J;
  return A.partialPivLu().determinant();
}

}  // namespace

TEST_CASE("Sturm eigenvalues match a dense Hermitian solver") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto op = testutil::random_operator(rng, 0, 60 + t);
    const auto tr = truncate(op, 3, 50 + t);
    const auto mine = eigenvalues(tr);
    const auto ref = dense_eigenvalues(tr);
    REQUIRE(mine.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(mine[k] - ref[k]) <= 1e-12 * op.bound());
  }
}

TEST_CASE("spectrum is invariant under the phase gauge") {
  std::mt19937_64 rng(22);
  auto op = testutil::random_operator(rng, -20, 20);
  std::vector<cplx> a;
  for (long j = -20; j <= 20; ++j) a.push_back(std::abs(op.a(j)));
  const JacobiOperator gauged(-20, a, op.raw_b(), Extension::periodic);
  const auto e1 = dense_eigenvalues(truncate(op, -20, 18));
  const auto e2 = dense_eigenvalues(truncate(gauged, -20, 18));
  for (std::size_t k = 0; k < e1.size(); ++k) CHECK(std::abs(e1[k] - e2[k]) < 1e-12);
}

TEST_CASE("Sturm count handles exact zeros") {
  const std::vector<double> d{0.0, 1.0, 5.0, 5.0};
  const std::vector<double> e2{1.0, 0.0, 0.0};
  const auto ev = sturm_eigenvalues(d, e2);
  CHECK(ev.size() == 4);
  CHECK(std::abs(ev[0] - (1 - std::sqrt(5.0)) / 2) < 1e-14);
  CHECK(ev[2] == 5.0);
  CHECK(ev[3] == 5.0);
  CHECK(sturm_count(d, e2, 4.9) == 2);
}

TEST_CASE("cocycle advances formal solutions") {
  std::mt19937_64 rng(23);
  const auto op = testutil::random_operator(rng, -30, 30);
  const cplx E(0.3, 0.1);
  const auto psi = transfer_solution(op, E, 0, cplx(1.0, 0.5), cplx(-0.2, 1.0), -20, 20);
  for (long j = -19; j < 20; ++j) {
    const Vec2 x(psi[j + 20], psi[j - 1 + 20]);
    const Vec2 y = cocycle_matrix(op, E, j) * x;
    const Vec2 z = op.a(j) * Vec2(psi[j + 1 + 20], psi[j + 20]);
    CHECK((y - z).norm() <= 1e-9 * std::max(1.0, z.norm()));
    // solves the eigenvalue equation
    const cplx r = std::conj(op.a(j - 1)) * psi[j - 1 + 20] + op.a(j) * psi[j + 1 + 20] +
                   op.b(j) * psi[j + 20] - E * psi[j + 20];
    CHECK(std::abs(r) <= 1e-9 * std::max(1.0, std::abs(psi[j + 20])));
  }
}

TEST_CASE("characteristic polynomials against dense determinants") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 30; ++t) {
    const auto op = testutil::random_operator(rng, -10, 30);
    const cplx E(-1.5 + 0.1 * t, 0.05 * (t % 3));
    CHECK(char_poly(op, 2, -1, E) == cplx(0));
    CHECK(char_poly(op, 2, 0, E) == cplx(1));
    for (long N = 1; N <= 12; ++N) {
      const cplx ref = dense_charpoly(op, 2, N, E);
      CHECK(std::abs(char_poly(op, 2, N, E) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("cocycle products assembled from characteristic polynomials") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 30; ++t) {
    const auto op = testutil::random_operator(rng, -5, 40);
    const cplx E(0.7 - 0.1 * t, 0.02 * t);
    const auto seq = cocycle_map(op, E);
    for (long N = 0; N <= 12; ++N) {
      const Mat2 p = cocycle_product(seq, 3, N);
      const Mat2 q = cocycle_via_charpoly(op, 3, N, E);
      CHECK((p - q).norm() <= 1e-10 * std::max(1.0, p.norm()));
    }
  }
}

TEST_CASE("free chain spectrum") {
  const auto op = free_chain(-200, 200);
  SpectrumOptions so;
  so.resolution = 0.02;
  const auto s = spectrum(op, so);
  REQUIRE(s.cover.size() == 1);
  CHECK(s.cover[0].lo < -1.999);
  CHECK(s.cover[0].hi > 1.999);
  CHECK(s.cover[0].hi <= 2.0);
  CHECK(s.unconfirmed.empty());
  CHECK(dist_to_spectrum(s, 0.0) == 0.0);
  CHECK(dist_to_spectrum(s, cplx(1.0, 0.3)) == 0.3);
  CHECK(std::abs(dist_to_spectrum(s, 3.0) - 1.0) < 1e-3);
}

TEST_CASE("spectrum of a pinched operator is the union of block spectra") {
  const std::vector<double> bvals{0.3, -0.7, 1.1, 0.2, -0.4};
  std::vector<cplx> a;
  std::vector<double> b;
  for (long j = -100; j <= 99; ++j) {
    const long r = ((j % 5) + 5) % 5;
    a.push_back(r == 0 ? cplx(0) : std::polar(1.0, 0.3 * r));
    b.push_back(bvals[r]);
  }
  const JacobiOperator op(-100, a, b, Extension::periodic);
  const auto block = dense_eigenvalues(truncate(op, 0, 5));
  const auto s = spectrum(op);
  for (double e : s.eigenvalues) {
    double best = 1;
    for (double x : block) best = std::min(best, std::abs(e - x));
    CHECK(best <= 1e-10);
  }
  for (double x : block) CHECK(dist_to_spectrum(s, x) <= 1e-10);
  CHECK(s.unconfirmed.empty());
}

TEST_CASE("tridiagonal LU against a dense solve") {
  std::mt19937_64 rng(26);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 10; ++t) {
    const long n = 5 + 7 * t;
    std::vector<cplx> lo(n - 1), d(n), up(n - 1), rhs(n);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd r(n);
    for (long i = 0; i < n; ++i) {
      d[i] = cplx(nd(rng), nd(rng)) * 0.1;  // small pivots force row swaps
      A(i, i) = d[i];
      rhs[i] = r(i) = cplx(nd(rng), nd(rng));
      if (i + 1 < n) {
        lo[i] = cplx(nd(rng), nd(rng));
        up[i] = cplx(nd(rng), nd(rng));
        A(i + 1, i) = lo[i];
        A(i, i + 1) = up[i];
      }
    }
    TridiagonalLU lu(lo, d, up);
    lu.solve(rhs);
    const Eigen::VectorXcd ref = A.fullPivLu().solve(r);
    for (long i = 0; i < n; ++i) CHECK(std::abs(rhs[i] - ref(i)) <= 1e-9 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("Green's function columns against a dense inverse") {
  std::mt19937_64 rng(27);
  const auto op = testutil::random_operator(rng, -80, 80);
  const cplx E(0.4, 0.3);
  Resolvent r(op, E, -61, 60);
  const Eigen::MatrixXcd J = truncate(op, -61, 60).dense();
  const Eigen::MatrixXcd G =
      (J - E * Eigen::MatrixXcd::Identity(J.rows(), J.cols())).inverse();
  for (long k : {-40, 0, 17}) {
    const auto col = r.column(k);
    for (long n = -60; n <= 60; ++n)
      CHECK(std::abs(col[n + 60] - G(n + 60, k + 60)) <= 1e-12 * G.norm());
  }
}

TEST_CASE("Green's function identities and Combes-Thomas decay") {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 10; ++t) {
    const auto op = testutil::random_operator(rng, -300, 300);
    const double eta = 0.2 + 0.05 * t;
    const cplx E(-1.0 + 0.2 * t, eta);
    const auto g = greens_column(op, E, 5, 40);
    CHECK(normalization_identity_check(g) < 1e-9);
    CHECK(row_identity_residual(op, E, 5, 60) < 1e-9);
    // |Im E| is a lower bound for the distance to the spectrum
    const double gct = combes_thomas_rate(op, eta);
    for (long n = g.first; n <= g.last(); ++n)
      CHECK(std::abs(g.value(n)) <= 2.0 / eta * std::exp(-gct * std::abs(n - 5)));
    CHECK(g.gamma_fit > 0);
    CHECK(g.gamma_fit >= combes_thomas_rate(op, g.delta));
    CHECK(std::exp(-std::min(g.gamma_fit, g.gamma_ls) * g.margin) < 1e-8);
  }
}

TEST_CASE("Green's functions vanish across a zero coupling") {
  std::vector<cplx> a(101, 1.0);
  a[50] = 0.0;  // a_0 = 0 decouples (-inf, 0] from [1, inf)
  const JacobiOperator op(-50, a, std::vector<double>(101, 0.5), Extension::periodic);
  Resolvent r(op, cplx(3.0, 0.0), -40, 40);
  const auto left = r.column(-3), right = r.column(4);
  for (long n = 1; n <= 40; ++n) CHECK(left[n - r.first()] == cplx(0));
  for (long n = -39; n <= 0; ++n) CHECK(right[n - r.first()] == cplx(0));
}

TEST_CASE("energies too close to the spectrum are rejected") {
  const auto op = free_chain(-100, 100);
  const auto s = spectrum(op);
  try {
    greens_column(op, 0.5, 0, s);
    FAIL("expected IllConditioned");
  } catch (const IllConditioned& e) {
    CHECK(e.delta() == 0.0);
  }
}

TEST_CASE("Wronskian of two solutions") {
  std::mt19937_64 rng(29);
  const auto real_op = testutil::random_operator(rng, -40, 40, false);
  const cplx E(0.25, 0.0);
  auto phi = transfer_solution(real_op, E, 0, 1.0, 0.0, -30, 30);
  auto psi = transfer_solution(real_op, E, 0, 0.0, 1.0, -30, 30);
  const cplx w0 = wronskian(real_op, phi, psi, -30, 0);
  for (long m = -29; m < 29; ++m)
    CHECK(std::abs(wronskian(real_op, phi, psi, -30, m) - w0) <= 1e-9 * std::abs(w0));

  // complex couplings only preserve the modulus
  const auto cop = testutil::random_operator(rng, -40, 40, true);
  phi = transfer_solution(cop, E, 0, 1.0, 0.0, -30, 30);
  psi = transfer_solution(cop, E, 0, 0.0, 1.0, -30, 30);
  const double m0 = std::abs(wronskian(cop, phi, psi, -30, 0));
  for (long m = -29; m < 29; ++m)
    CHECK(std::abs(std::abs(wronskian(cop, phi, psi, -30, m)) - m0) <= 1e-9 * m0);
}

TEST_CASE("operator construction rejects malformed input") {
  CHECK_THROWS_AS(JacobiOperator(0, {1.0, 1.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(JacobiOperator(0, {}, {}), DomainError);
  CHECK_THROWS_AS(JacobiOperator(0, {cplx(NAN, 0)}, {0.0}), DomainError);
  const JacobiOperator tol(0, {1e-20, 1.0}, {0.0, 1.0}, Extension::zero, 1e-13);
  CHECK(tol.a_is_zero(0));
  CHECK(tol.raw_a()[0] == cplx(1e-20));
  const JacobiOperator per(0, {1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, Extension::periodic);
  CHECK(per.a(-1) == cplx(3.0));
  CHECK(per.a(4) == cplx(2.0));
  const JacobiOperator con(0, {1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, Extension::constant);
  CHECK(con.a(-5) == cplx(1.0));
  CHECK(con.a(9) == cplx(3.0));
}
