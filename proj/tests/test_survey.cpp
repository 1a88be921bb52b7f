#include "hnl/survey.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hnl;
using namespace hnl::test;

TEST_CASE("class_label on the Werner family and the rank-deficient family") {
  CHECK(class_label(werner_state(0.2)) == StateClass::separable);
  CHECK(class_label(werner_state(0.6)) == StateClass::entangled_no_hidden_nl);
  CHECK(class_label(werner_state(0.9)) == StateClass::chsh_violating);
  CHECK(class_label(normal_form_family_state(1.0, 0.5, 0.5, 0.4)) ==
        StateClass::hidden_nl_only);
}

TEST_CASE("wilson_interval frozen values") {
  // k = 0: low edge collapses to 0, high edge to z^2/(n + z^2)
  const FractionCI zero = wilson_interval(0, 100);
  CHECK(zero.value == 0.0);
  CHECK(zero.ci_low == 0.0);
  const double z2 = 1.959963984540054 * 1.959963984540054;
  CHECK(zero.ci_high == doctest::Approx(z2 / (100.0 + z2)).epsilon(1e-12));

  const FractionCI half = wilson_interval(50, 100);
  CHECK(half.value == doctest::Approx(0.5));
  CHECK(half.ci_low == doctest::Approx(1.0 - half.ci_high).epsilon(1e-12));
  CHECK(half.ci_low > 0.40);
  CHECK(half.ci_high < 0.60);

  const FractionCI all = wilson_interval(100, 100);
  CHECK(all.value == 1.0);
  CHECK(all.ci_high == 1.0);
  CHECK(all.ci_low == doctest::Approx(100.0 / (100.0 + z2)).epsilon(1e-12));
}

TEST_CASE("sample_measure tags") {
  const SeedStream seed(21);
  const TwoQubitState choi = sample_measure("stinespring-env4", seed);
  CHECK(max_abs_diff(partial_trace(choi, Side::A), Mat2(0.5 * Mat2::Identity())) <=
        1e-12);
  const TwoQubitState gin = sample_measure("ginibre-filtered", seed);
  CHECK(max_abs_diff(partial_trace(gin, Side::A), Mat2(0.5 * Mat2::Identity())) <=
        1e-12);
  CHECK_THROWS_AS(sample_measure("no-such-measure", seed), Error);
}

TEST_CASE("run_survey is deterministic and worker-count independent") {
  SurveyConfig cfg;
  cfg.n_samples = 3000;
  cfg.seed = 99;
  cfg.threads = 1;
  const SurveyReport a = run_survey(cfg);
  cfg.threads = 2;
  const SurveyReport b = run_survey(cfg);
  CHECK(a.class_counts == b.class_counts);
  CHECK(a.consistency_violations == 0);
  CHECK(b.consistency_violations == 0);
  CHECK(a.frac_separable.value == b.frac_separable.value);

  // nesting of the cumulative fractions
  CHECK(a.frac_separable.value <= a.frac_not_hidden_nonlocal.value);
  CHECK(a.frac_not_hidden_nonlocal.value <= a.frac_no_unfiltered_chsh.value);
  const std::uint64_t total = a.class_counts[0] + a.class_counts[1] +
                              a.class_counts[2] + a.class_counts[3];
  CHECK(total == cfg.n_samples);
}

TEST_CASE("run_survey single-sample degenerate report") {
  SurveyConfig cfg;
  cfg.n_samples = 1;
  cfg.seed = 4;
  const SurveyReport rep = run_survey(cfg);
  const double v = rep.frac_not_hidden_nonlocal.value;
  CHECK((v == 0.0 || v == 1.0));
  CHECK(rep.frac_not_hidden_nonlocal.ci_high - rep.frac_not_hidden_nonlocal.ci_low >
        0.5);
}

TEST_CASE("run_survey validates its configuration") {
  SurveyConfig cfg;
  cfg.n_samples = 0;
  CHECK_THROWS_AS(run_survey(cfg), Error);
  cfg.n_samples = 10;
  cfg.measure_tag = "bogus";
  CHECK_THROWS_AS(run_survey(cfg), Error);
}

TEST_CASE("progress callback is monotone and reaches one") {
  SurveyConfig cfg;
  cfg.n_samples = 2500;
  cfg.seed = 12;
  cfg.threads = 2;
  double last = 0.0;
  bool monotone = true;
  run_survey(cfg, [&](double f) {
    if (f < last) monotone = false;
    last = f;
  });
  CHECK(monotone);
  CHECK(last == doctest::Approx(1.0));
}

TEST_CASE("independent seeds give overlapping separable intervals" *
          doctest::timeout(300)) {
  SurveyConfig cfg;
  cfg.n_samples = 100000;
  cfg.threads = 0;
  cfg.seed = 1001;
  const SurveyReport a = run_survey(cfg);
  cfg.seed = 2002;
  const SurveyReport b = run_survey(cfg);
  CHECK(a.frac_separable.ci_low <= b.frac_separable.ci_high);
  CHECK(b.frac_separable.ci_low <= a.frac_separable.ci_high);
  CHECK(a.consistency_violations == 0);
  CHECK(b.consistency_violations == 0);
}
