#include "hnl/state.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hnl;
using namespace hnl::test;

TEST_CASE("validate_state admits physical states") {
  CHECK_NOTHROW(validate_state(Mat4(0.25 * Mat4::Identity())));
  CHECK_NOTHROW(validate_state(phi_plus_state().rho));

  // small asymmetry within tolerance is repaired
  Mat4 m = 0.25 * Mat4::Identity();
  m(0, 1) += Cplx(0.0, 5e-12);
  const TwoQubitState s = validate_state(m);
  CHECK(max_abs_diff(Mat4(s.rho - s.rho.adjoint()), Mat4::Zero()) == 0.0);
  CHECK(std::abs(s.rho.trace().real() - 1.0) <= 1e-15);
}

TEST_CASE("validate_state names the violated invariant") {
  Mat4 asym = 0.25 * Mat4::Identity();
  asym(0, 1) = 0.1;
  CHECK_THROWS_WITH_AS(validate_state(asym), doctest::Contains("NotHermitian"),
                       Error);

  CHECK_THROWS_WITH_AS(validate_state(Mat4(0.5 * Mat4::Identity())),
                       doctest::Contains("NotUnitTrace"), Error);

  Mat4 neg = Mat4::Zero();
  neg(0, 0) = 1.0;
  neg(3, 3) = -1e-3;
  neg /= (1.0 - 1e-3);
  CHECK_THROWS_WITH_AS(validate_state(neg), doctest::Contains("NotPositive"),
                       Error);

  try {
    validate_state(neg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive);
  }
}

TEST_CASE("partial_trace known marginals") {
  CHECK(max_abs_diff(partial_trace(phi_plus_state(), Side::A),
                     Mat2(0.5 * Mat2::Identity())) <= 1e-15);

  Mat2 ket0 = Mat2::Zero();
  ket0(0, 0) = 1.0;
  CHECK(max_abs_diff(partial_trace(ket00_state(), Side::B), ket0) <= 1e-15);

  for (double p : {0.0, 0.3, 0.7, 1.0}) {
    const Mat2 ma = partial_trace(werner_state(p), Side::A);
    CHECK(max_abs_diff(ma, Mat2(0.5 * Mat2::Identity())) <= 1e-15);
    CHECK(std::abs(ma.trace().real() - 1.0) <= 1e-15);
  }
}

TEST_CASE("partial_transpose known values and involution") {
  CHECK(max_abs_diff(partial_transpose(validate_state(Mat4(0.25 * Mat4::Identity()))),
                     Mat4(0.25 * Mat4::Identity())) == 0.0);
  CHECK(max_abs_diff(partial_transpose(ket00_state()), ket00_state().rho) == 0.0);

  // analytic minimum eigenvalue (1 - 3p)/4 of the transposed Werner state
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.6, 1.0}) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(partial_transpose(werner_state(p)),
                                           Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() ==
          doctest::Approx((1.0 - 3.0 * p) / 4.0).epsilon(1e-12));
  }

  // involution, against an independent index shuffle
  SeedStream stream(99);
  for (int k = 0; k < 10; ++k) {
    const TwoQubitState s = random_ginibre_state(stream.at(k));
    const Mat4 pt = partial_transpose(s);
    Mat4 back;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int ap = 0; ap < 2; ++ap)
          for (int bp = 0; bp < 2; ++bp)
            back(2 * a + bp, 2 * ap + b) = pt(2 * a + b, 2 * ap + bp);
    CHECK(max_abs_diff(back, s.rho) <= 1e-14);
  }
}

TEST_CASE("is_separable on the Werner family") {
  CHECK(is_separable(werner_state(0.2)));
  CHECK_FALSE(is_separable(werner_state(0.8)));
  CHECK(is_separable(ket00_state()));

  // bisect the flip point; analytically at p = 1/3
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (is_separable(werner_state(mid), 1e-14))
      lo = mid;
    else
      hi = mid;
  }
  CHECK(std::abs(0.5 * (lo + hi) - 1.0 / 3.0) <= 1e-9);
}

TEST_CASE("random_pure_state draws are projectors") {
  const SeedStream root(7);
  for (int k = 0; k < 100; ++k) {
    const TwoQubitState s = random_pure_state(root.at(k));
    CHECK(std::abs(s.rho.trace().real() - 1.0) <= 1e-14);
    CHECK(std::abs(purity(s) - 1.0) <= 1e-12);
    CHECK_NOTHROW(validate_state(s.rho, 1e-10));
    CHECK_NOTHROW(validate_state(random_ginibre_state(root.at(k)).rho, 1e-10));
  }

  // determinism
  const TwoQubitState a = random_pure_state(root.at(5));
  const TwoQubitState b = random_pure_state(root.at(5));
  CHECK(max_abs_diff(a.rho, b.rho) == 0.0);
  const TwoQubitState c = random_pure_state(root.at(6));
  CHECK(max_abs_diff(a.rho, c.rho) > 1e-3);
}

TEST_CASE("random_pure_state mean approaches the maximally mixed state") {
  const SeedStream root(11);
  Mat4 mean = Mat4::Zero();
  const int n = 10000;
  for (int k = 0; k < n; ++k) mean += random_pure_state(root.at(k)).rho;
  mean /= static_cast<double>(n);
  CHECK(max_abs_diff(mean, Mat4(0.25 * Mat4::Identity())) <= 0.02);
}

TEST_CASE("random_channel_choi marginal and physicality") {
  const SeedStream root(13);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const TwoQubitState s = random_channel_choi(root.at(k), 4);
    CHECK_NOTHROW(validate_state(s.rho, 1e-10));
    const Mat2 ma = partial_trace(s, Side::A);
    worst = std::max(worst,
                     max_abs_diff(ma, Mat2(0.5 * Mat2::Identity())));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("random_channel_choi with trivial environment is maximally entangled") {
  const SeedStream root(17);
  for (int k = 0; k < 20; ++k) {
    const TwoQubitState s = random_channel_choi(root.at(k), 1);
    CHECK(std::abs(purity(s) - 1.0) <= 1e-12);
    CHECK(max_abs_diff(partial_trace(s, Side::A), Mat2(0.5 * Mat2::Identity())) <=
          1e-14);
  }
  CHECK_THROWS_AS(random_channel_choi(root, 0), Error);
}

TEST_CASE("normal_form_family_state positivity guard") {
  CHECK_NOTHROW(normal_form_family_state(1.0, 0.5, 0.5, 0.4));
  CHECK_NOTHROW(normal_form_family_state(1.0, 0.5, 0.5, 0.5));  // boundary
  CHECK_THROWS_AS(normal_form_family_state(1.0, 0.5, 0.5, 0.6), Error);
  CHECK_THROWS_AS(normal_form_family_state(1.0, 1.2, 0.5, 0.0), Error);
  CHECK_THROWS_AS(normal_form_family_state(-1.0, 0.0, 0.0, 0.0), Error);

  // trace is one for generic parameters
  const TwoQubitState s = normal_form_family_state(2.0, 0.6, 1.2, 0.7);
  CHECK(std::abs(s.rho.trace().real() - 1.0) <= 1e-15);
}

TEST_CASE("werner_state rejects out-of-range p") {
  CHECK_THROWS_AS(werner_state(-0.1), Error);
  CHECK_THROWS_AS(werner_state(1.1), Error);
}

TEST_CASE("seed streams are deterministic and disjoint") {
  SeedStream a(42), b(42);
  CHECK(a.at(3).raw() == b.at(3).raw());
  CHECK(a.at(3).raw() != a.at(4).raw());
  CHECK(SeedStream(1).at(0).raw() != SeedStream(2).at(0).raw());

  auto e1 = a.at(9).engine();
  auto e2 = b.at(9).engine();
  for (int i = 0; i < 16; ++i) CHECK(e1() == e2());
}
