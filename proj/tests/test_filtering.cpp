#include "hnl/filtering.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hnl;
using namespace hnl::test;

namespace {

const RMat4& M = minkowski();

double lorentz_defect(const LorentzMap& l) {
  return (l.l.transpose() * M * l.l - M).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("lorentz_of_filter known maps") {
  CHECK(max_abs_diff(lorentz_of_filter(Mat2::Identity()).l, RMat4::Identity()) <=
        1e-15);

  // diag(sqrt(2), 1/sqrt(2)) boosts along the 3-axis
  Mat2 boost = Mat2::Zero();
  boost(0, 0) = std::sqrt(2.0);
  boost(1, 1) = 1.0 / std::sqrt(2.0);
  const RMat4 l = lorentz_of_filter(boost).l;
  CHECK(l(0, 0) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(l(3, 3) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(l(0, 3) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(l(3, 0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(l(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(l(0, 0) * l(0, 0) - l(0, 3) * l(0, 3) - 1.0) <= 1e-14);

  // a Pauli unitary gives a pure spatial rotation
  const RMat4 lx = lorentz_of_filter(pauli(1)).l;
  CHECK(lx(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs_diff(lx, RMat4(RVec4(1, 1, -1, -1).asDiagonal())) <= 1e-14);

  Mat2 singular = Mat2::Zero();
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(lorentz_of_filter(singular), Error);
}

TEST_CASE("every induced map is proper orthochronous, and composition is a "
          "homomorphism") {
  SeedStream stream(55);
  for (int k = 0; k < 1000; ++k) {
    const Mat2 a = random_invertible_2x2(stream);
    const LorentzMap l = lorentz_of_filter(a);
    CHECK(lorentz_defect(l) <= 1e-10);
    CHECK(std::abs(l.l.determinant() - 1.0) <= 1e-10);
    CHECK(l.l(0, 0) >= 1.0 - 1e-12);
  }
  for (int k = 0; k < 200; ++k) {
    const Mat2 a1 = random_invertible_2x2(stream);
    const Mat2 a2 = random_invertible_2x2(stream);
    const RMat4 lhs = lorentz_of_filter(Mat2(a1 * a2)).l;
    const RMat4 rhs = lorentz_of_filter(a1).l * lorentz_of_filter(a2).l;
    CHECK(max_abs_diff(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("apply_filter basics") {
  const TwoQubitState w = werner_state(0.6);

  const FilteredState id = apply_filter(w, LocalFilter{});
  CHECK(max_abs_diff(id.state.rho, w.rho) <= 1e-15);
  CHECK(id.success_prob == doctest::Approx(1.0).epsilon(1e-14));

  // unitary filters preserve the spectrum and succeed with probability one
  const Mat2 u = su2_from_rotation(
      RMat3(Eigen::AngleAxisd(0.83, RVec3(1, 2, -1).normalized()).toRotationMatrix()));
  const Mat2 v = su2_from_rotation(
      RMat3(Eigen::AngleAxisd(-1.1, RVec3(0, 1, 3).normalized()).toRotationMatrix()));
  const FilteredState rot = apply_filter(w, LocalFilter{u, v});
  CHECK(rot.success_prob == doctest::Approx(1.0).epsilon(1e-12));
  const LorentzSpectrum sa = lorentz_spectrum(c_matrix(correlation_matrix(w)));
  const LorentzSpectrum sb =
      lorentz_spectrum(c_matrix(correlation_matrix(rot.state)));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(sa.lambda[i] - sb.lambda[i]) <= 1e-12);
}

TEST_CASE("filtering a singlet reshapes its Schmidt spectrum") {
  // A = diag(t, 1) leaves a pure state with Schmidt pair prop to (t, 1);
  // the CHSH value is 2 sqrt(1 + (2t/(1+t^2))^2)
  for (double t : {0.2, 0.5, 1.0}) {
    Mat2 a = Mat2::Identity();
    a(0, 0) = t;
    const FilteredState f = apply_filter(werner_state(1.0), LocalFilter{a});
    const double chsh =
        2.0 * std::sqrt(horodecki_value(correlation_matrix(f.state)));
    const double schmidt = 2.0 * t / (1.0 + t * t);
    CHECK(chsh == doctest::Approx(2.0 * std::sqrt(1.0 + schmidt * schmidt))
                      .epsilon(1e-10));
  }
}

TEST_CASE("apply_filter rejects annihilating or singular filters") {
  Mat2 tiny = Mat2::Identity() * 1e-13;
  CHECK_THROWS_AS(apply_filter(werner_state(0.5), LocalFilter{tiny, Mat2::Identity()}),
                  Error);
}

TEST_CASE("transport agrees with filtering the state directly") {
  SeedStream stream(77);
  double worst = 0.0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 100; ++k) {
    const TwoQubitState s = random_ginibre_state(stream.at(k));
    SeedStream fs = stream.at(1000 + k);
    const LocalFilter f{random_invertible_2x2(fs), random_invertible_2x2(fs)};

    const CorrelationMatrix r0 = correlation_matrix(s);
    const CorrelationMatrix moved = transport_correlation(r0, f);
    const FilteredState direct = apply_filter(s, f);
    const CorrelationMatrix rd = correlation_matrix(direct.state);

    CHECK(moved.r(0, 0) == doctest::Approx(direct.success_prob).epsilon(1e-10));
    worst = std::max(worst,
                     max_abs_diff(RMat4(moved.r / moved.r(0, 0)), rd.r));

    // the spectrum scales by |det a|^2 |det b|^2 under transport
    const double scale = std::pow(std::abs(f.a.determinant()) *
                                      std::abs(f.b.determinant()),
                                  2.0);
    const LorentzSpectrum s0 = lorentz_spectrum(c_matrix(r0));
    const LorentzSpectrum s1 = lorentz_spectrum(c_matrix(moved));
    for (int i = 0; i < 4; ++i) {
      const double expect = scale * s0.lambda[i];
      worst_ratio = std::max(worst_ratio, std::abs(s1.lambda[i] - expect) /
                                              (1.0 + expect));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(worst_ratio <= 1e-8);
}

TEST_CASE("identity transport is a no-op") {
  const CorrelationMatrix r = correlation_matrix(werner_state(0.3));
  const CorrelationMatrix moved = transport_correlation(r, LocalFilter{});
  CHECK(max_abs_diff(moved.r, r.r) <= 1e-14);
}

TEST_CASE("eigenvalue ratios are invariant under full-rank filtering") {
  SeedStream stream(88);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const TwoQubitState s = (k % 2) ? random_ginibre_state(stream.at(k))
                                    : random_channel_choi(stream.at(k), 4);
    SeedStream fs = stream.at(5000 + k);
    const LocalFilter f{random_invertible_2x2(fs), random_invertible_2x2(fs)};
    const LorentzSpectrum before =
        lorentz_spectrum(c_matrix(correlation_matrix(s)));
    if (before.lambda[0] <= 1e-8) continue;
    const TwoQubitState filtered = apply_filter(s, f).state;
    const LorentzSpectrum after =
        lorentz_spectrum(c_matrix(correlation_matrix(filtered)));
    REQUIRE(after.lambda[0] > 0.0);
    for (int i = 1; i < 4; ++i) {
      const double lhs = after.lambda[i] / after.lambda[0];
      const double rhs = before.lambda[i] / before.lambda[0];
      CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + rhs));
    }
    ++checked;
  }
  CHECK(checked >= 990);
}

TEST_CASE("su2_from_rotation reproduces the rotation on Bloch vectors") {
  SeedStream stream(123);
  for (int k = 0; k < 100; ++k) {
    const double angle = 2.0 * 3.14159265358979 * stream.next_double();
    RVec3 axis(2.0 * stream.next_double() - 1.0, 2.0 * stream.next_double() - 1.0,
               2.0 * stream.next_double() - 1.0);
    if (axis.norm() < 1e-3) continue;
    axis.normalize();
    const RMat3 o = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    const Mat2 u = su2_from_rotation(o);
    CHECK(max_abs_diff(Mat2(u * u.adjoint()), Mat2(Mat2::Identity())) <= 1e-12);
    for (int i = 1; i <= 3; ++i) {
      Mat2 lhs = u * pauli(i) * u.adjoint();
      Mat2 rhs = Mat2::Zero();
      for (int j = 1; j <= 3; ++j) rhs += o(j - 1, i - 1) * pauli(j);
      CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
    }
  }
}

TEST_CASE("normal_form: Bell-diagonal input is already reduced") {
  const NormalFormResult nf = normal_form(werner_state(0.7));
  CHECK(nf.params.case_tag == NormalFormCase::bell_diagonal);
  CHECK(nf.params.iterations <= 2);
  // the filter is unitary up to sign conventions
  CHECK(std::abs(std::abs(nf.filter.a.determinant()) - 1.0) <= 1e-12);
  std::array<double, 4> mags;
  for (int i = 0; i < 4; ++i) mags[i] = std::abs(nf.params.diag[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  CHECK(mags[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mags[1] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(mags[3] == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("normal_form: entangled pure states reduce to a Bell state") {
  const TwoQubitState s = schmidt_state(3.14159265358979 / 6.0);
  const NormalFormResult nf = normal_form(s);
  CHECK(nf.params.case_tag == NormalFormCase::bell_diagonal);
  const Mat2 ma = partial_trace(nf.state, Side::A);
  const Mat2 mb = partial_trace(nf.state, Side::B);
  CHECK(max_abs_diff(ma, Mat2(0.5 * Mat2::Identity())) <= 1e-9);
  CHECK(max_abs_diff(mb, Mat2(0.5 * Mat2::Identity())) <= 1e-9);
  // a pure state filters to the maximally entangled one: full violation
  const double m = horodecki_value(correlation_matrix(nf.state));
  CHECK(2.0 * std::sqrt(m) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("normal_form: generic full-rank states reach Bell-diagonal form "
          "and reproduce the spectrum ratios") {
  SeedStream stream(404);
  for (int k = 0; k < 50; ++k) {
    const TwoQubitState s = random_ginibre_state(stream.at(k));
    const NormalFormResult nf = normal_form(s);
    REQUIRE(nf.params.case_tag == NormalFormCase::bell_diagonal);

    const Mat2 ma = partial_trace(nf.state, Side::A);
    const Mat2 mb = partial_trace(nf.state, Side::B);
    CHECK(max_abs_diff(ma, Mat2(0.5 * Mat2::Identity())) <= 1e-8);
    CHECK(max_abs_diff(mb, Mat2(0.5 * Mat2::Identity())) <= 1e-8);

    const LorentzSpectrum in = lorentz_spectrum(c_matrix(correlation_matrix(s)));
    std::array<double, 4> sq;
    for (int i = 0; i < 4; ++i) sq[i] = nf.params.diag[i] * nf.params.diag[i];
    std::sort(sq.begin(), sq.end(), std::greater<double>());
    for (int i = 0; i < 4; ++i) {
      const double expect = in.lambda[i] / in.lambda[0];
      CHECK(std::abs(sq[i] / sq[0] - expect) <= 1e-8 * (1.0 + expect));
    }

    // Horodecki value of the reduced state matches the invariant ratio
    const double m = horodecki_value(correlation_matrix(nf.state));
    CHECK(std::abs(m - (in.lambda[1] + in.lambda[2]) / in.lambda[0]) <= 1e-8);
  }
}

TEST_CASE("normal_form: the rank-deficient family is recognized directly") {
  const TwoQubitState s = normal_form_family_state(1.0, 0.5, 0.5, 0.4);
  const NormalFormResult nf = normal_form(s);
  CHECK(nf.params.case_tag == NormalFormCase::rank_deficient_i);
  CHECK(nf.params.iterations == 0);
  CHECK(nf.params.fit_residual <= 1e-12);
  CHECK(nf.params.a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nf.params.b == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nf.params.c == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(nf.params.d) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("normal_form: general family members classify through the "
          "invariant spectrum") {
  // b != c, still the d != 0 class; canonical parameters follow from the
  // doubly degenerate spectrum ((a-b)(a-c) twice, d^2 twice)
  const TwoQubitState s = normal_form_family_state(1.0, 0.3, 0.6, 0.4);
  const NormalFormResult nf = normal_form(s);
  CHECK(nf.params.case_tag == NormalFormCase::rank_deficient_i);
  CHECK(nf.params.b == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(nf.params.c == doctest::Approx(0.5).epsilon(1e-9));
  const double expect_d = 0.5 * std::sqrt(0.16 / 0.28);
  CHECK(nf.params.d == doctest::Approx(expect_d).epsilon(1e-6));
}

TEST_CASE("normal_form: product states land in the value cases") {
  const NormalFormResult iv = normal_form(ket00_state());
  CHECK(iv.params.case_tag == NormalFormCase::product_iv);

  const NormalFormResult iii = normal_form(zero_mixed_state());
  CHECK(iii.params.case_tag == NormalFormCase::product_iii);

  const NormalFormResult ii = normal_form(mixed_zero_state());
  CHECK(ii.params.case_tag == NormalFormCase::product_ii);
}

TEST_CASE("normal_form argument validation") {
  CHECK_THROWS_AS(normal_form(werner_state(0.5), -1.0), Error);
  CHECK_THROWS_AS(normal_form(werner_state(0.5), 1e-9, 0), Error);
}

TEST_CASE("quasi_distill_family drives the state toward its Bell-diagonal "
          "limit") {
  const TwoQubitState s = normal_form_family_state(1.0, 0.5, 0.5, 0.4);
  const NormalFormResult nf = normal_form(s);

  // the limit point: middle block (1, k; k, 1)/2 with k = d/sqrt((a-b)(a-c))
  const double k = 0.4 / 0.5;
  Mat4 limit = Mat4::Zero();
  limit(1, 1) = limit(2, 2) = 0.5;
  limit(1, 2) = limit(2, 1) = 0.5 * k;

  const TwoQubitState f10 =
      apply_filter(s, compose(quasi_distill_family(nf.params, 10.0), nf.filter))
          .state;
  CHECK(trace_distance(f10.rho, limit) <= 0.02);

  const TwoQubitState f100 =
      apply_filter(s, compose(quasi_distill_family(nf.params, 100.0), nf.filter))
          .state;
  CHECK(trace_distance(f100.rho, limit) <= 2e-4);
  const double chsh =
      2.0 * std::sqrt(horodecki_value(correlation_matrix(f100)));
  CHECK(std::abs(chsh - 2.0 * std::sqrt(1.64)) <= 1e-3);
}

TEST_CASE("quasi-distillation trade-off is monotone and bounded") {
  const TwoQubitState s = normal_form_family_state(1.0, 0.5, 0.5, 0.4);
  const NormalFormResult nf = normal_form(s);
  const std::vector<double> grid{1, 2, 5, 10, 20, 50, 100};
  const auto rows = quasi_distill_table(s, nf, grid);
  REQUIRE(rows.size() == grid.size());

  const LorentzSpectrum spec = lorentz_spectrum(c_matrix(correlation_matrix(s)));
  const double bound =
      2.0 * std::sqrt((spec.lambda[1] + spec.lambda[2]) / spec.lambda[0]);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].chsh <= bound + 1e-9);
    if (i) {
      CHECK(rows[i].chsh >= rows[i - 1].chsh - 1e-9);
      CHECK(rows[i].success_prob <= rows[i - 1].success_prob + 1e-12);
    }
  }
  // n = 1 is the identity member of the family here, so it keeps the
  // whole probability
  CHECK(rows.front().success_prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rows.back().chsh - bound) <= 1e-3);
}

TEST_CASE("quasi_distill_family rejects the wrong cases") {
  NormalFormParams p;
  p.case_tag = NormalFormCase::rank_deficient_i;
  p.a = 1.0;
  p.b = 0.5;
  p.c = 0.5;
  p.d = 0.0;
  CHECK_THROWS_AS(quasi_distill_family(p, 10.0), Error);

  p.d = 0.4;
  CHECK_THROWS_AS(quasi_distill_family(p, 0.5), Error);

  p.case_tag = NormalFormCase::bell_diagonal;
  CHECK_THROWS_AS(quasi_distill_family(p, 10.0), Error);

  p.case_tag = NormalFormCase::rank_deficient_i;
  CHECK_NOTHROW(quasi_distill_family(p, 1.0));
}
