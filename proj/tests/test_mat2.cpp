#include <doctest.h>

#include <Eigen/SVD>

#include "domsplit/mat2.hpp"
#include "test_util.hpp"

using namespace domsplit;

TEST_CASE("svd2 reconstructs random matrices") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    Mat2 m = testutil::random_mat(rng, std::pow(10.0, (t % 13) - 6));
    if (t % 5 == 0) m.col(1) = m.col(0) * cplx(0.3, -2.0);  // rank one
    const auto s = svd2(m);
    Mat2 d = Mat2::Zero();
    d(0, 0) = s.s1;
    d(1, 1) = s.s2;
    const double scale = operator_norm(m);
    CHECK((s.U * d * s.V.adjoint() - m).norm() <= 1e-12 * scale);
    CHECK((s.U.adjoint() * s.U - Mat2::Identity()).norm() <= 1e-13);
    CHECK((s.V.adjoint() * s.V - Mat2::Identity()).norm() <= 1e-13);
    CHECK(s.s1 >= s.s2);
    CHECK(std::abs(s.s1 * s.s2 - std::abs(det(m))) <= 1e-12 * scale * scale);

    Eigen::JacobiSVD<Eigen::Matrix2cd> ref(m);
    CHECK(std::abs(ref.singularValues()(0) - s.s1) <= 1e-12 * scale);
    CHECK(std::abs(ref.singularValues()(1) - s.s2) <= 1e-12 * scale);
  }
}

TEST_CASE("svd2 in extended precision") {
  Mat2T<long double> m;
  m << 3.0L, 1.0L, 0.0L, 1e-9L;
  const auto s = svd2(m);
  Mat2T<long double> d = Mat2T<long double>::Zero();
  d(0, 0) = s.s1;
  d(1, 1) = s.s2;
  CHECK(static_cast<double>((s.U * d * s.V.adjoint() - m).norm()) < 1e-17);
}

TEST_CASE("diagonal matrices give exact axes") {
  Mat2 m = Mat2::Zero();
  m(0, 0) = 2.0;
  m(1, 1) = 0.5;
  const auto s = svd2(m);
  CHECK(s.s1 == 2.0);
  CHECK(s.s2 == 0.5);
  CHECK(std::abs(s.V(0, 0)) == 1.0);
  CHECK(s.V(1, 0) == cplx(0));
}

TEST_CASE("singularity test") {
  Mat2 m;
  m << 1.0, 2.0, 2.0, 4.0;
  CHECK(is_singular(m));
  m(1, 1) = 4.1;
  CHECK_FALSE(is_singular(m));
}

TEST_CASE("cocycle products") {
  std::mt19937_64 rng(11);
  std::vector<Mat2> v;
  for (int k = 0; k < 80; ++k) v.push_back(testutil::random_mat(rng, 0.7));
  const MatSequence seq(-40, v);

  CHECK(cocycle_product(seq, 3, 0) == Mat2::Identity());
  CHECK((cocycle_product(seq, 5, 1) - seq[5]).norm() == 0.0);

  // B_{n+m}(j) = B_m(j+n) B_n(j)
  for (long n : {1, 3, 7}) {
    for (long m : {2, 5}) {
      const Mat2 lhs = cocycle_product(seq, -10, n + m);
      const Mat2 rhs = cocycle_product(seq, -10 + n, m) * cocycle_product(seq, -10, n);
      CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
    }
  }

  // Extended-precision path agrees with a plain double product.
  Mat2 plain = Mat2::Identity();
  for (long k = -30; k < 10; ++k) plain = seq[k] * plain;
  const Mat2 ext = cocycle_product(seq, -30, 40);
  CHECK((plain - ext).norm() <= 1e-11 * ext.norm());

  // B_{-n}(j) B_n(j - n) = I
  for (long n : {1, 4, 9}) {
    const Mat2 p = backward_product(seq, 12, n) * cocycle_product(seq, 12 - n, n);
    CHECK((p - Mat2::Identity()).norm() <= 1e-9);
  }

  CHECK_THROWS_AS(cocycle_product(seq, 35, 10), RangeError);
  CHECK_THROWS_AS(backward_product(seq, -38, 5), RangeError);
  CHECK_THROWS_AS(seq.at(40), RangeError);
}

TEST_CASE("backward product reports the singular factor") {
  Mat2 good;
  good << 2.0, 1.0, 1.0, 1.0;
  Mat2 bad;
  bad << 1.0, 0.0, 3.0, 0.0;
  std::vector<Mat2> v(10, good);
  v[4] = bad;
  const MatSequence seq(0, v);
  try {
    backward_product(seq, 8, 6);
    FAIL("expected SingularFactor");
  } catch (const SingularFactor& e) {
    CHECK(e.index() == 4);
  }
}

TEST_CASE("norm floor of a decaying diagonal sequence") {
  std::vector<Mat2> v;
  for (long j = -10; j <= 10; ++j) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::ldexp(1.0, -static_cast<int>(std::abs(j)));
    m(1, 1) = std::ldexp(1.0, -static_cast<int>(std::abs(j)) - 1);
    v.push_back(m);
  }
  const MatSequence seq(-10, v);
  CHECK(seq.sup_bound() == 1.0);
  // |B_2(j)| = 2^{-|j|-|j+1|}, smallest at the window ends.
  CHECK(norm_floor(seq, 2) == std::ldexp(1.0, -19));
  CHECK(norm_floor(seq, 2, -3, 3) == std::ldexp(1.0, -7));
}

TEST_CASE("sup bound must dominate the factors") {
  Mat2 m = Mat2::Identity() * 3.0;
  CHECK_THROWS_AS(MatSequence(0, {m}, 2.0), DomainError);
  CHECK(MatSequence(0, {m}, 5.0).sup_bound() == 5.0);
}
