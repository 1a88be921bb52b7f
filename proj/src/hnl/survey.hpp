/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_SURVEY_HPP
#define HNL_SURVEY_HPP

#include "hnl/correlation.hpp"
#include "hnl/state.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace hnl {

enum class StateClass {
  separable = 0,
  entangled_no_hidden_nl = 1,
  hidden_nl_only = 2,
  chsh_violating = 3,
};

const char* state_class_name(StateClass c);

/// Tolerance bundle used when classifying samples.
struct SurveyTolerances {
  double separability = kDefaultStateTol;   // PPT eigenvalue floor
  double criterion_rel = kCriterionRelTol;  // strict-inequality margin
  double spectrum = kSpectrumTol;           // imaginary-residual bound
};

/// Exactly one label per state, from (separable, hidden-nonlocal,
/// unfiltered violation). Combinations that break the nesting chain raise
/// ConsistencyViolation; run_survey counts those instead of aborting.
StateClass class_label(const TwoQubitState& s,
                       const SurveyTolerances& tol = SurveyTolerances{});

struct SurveyConfig {
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::string measure_tag = "stinespring-env4";  // or "ginibre-filtered"
  SurveyTolerances tolerances;
  int threads = 0;  // 0 = hardware concurrency
};

struct FractionCI {
  double value = 0.0;
  double ci_low = 0.0;   // 95% Wilson interval
  double ci_high = 0.0;
};

struct SurveyReport {
  std::uint64_t n = 0;
  std::array<std::uint64_t, 4> class_counts{};  // indexed by StateClass
  FractionCI frac_not_hidden_nonlocal;
  FractionCI frac_separable;
  FractionCI frac_no_unfiltered_chsh;
  std::uint64_t consistency_violations = 0;
  std::string measure_tag;
  std::uint64_t seed = 0;
};

FractionCI wilson_interval(std::uint64_t successes, std::uint64_t n);

using ProgressFn = std::function<void(double fraction_done)>;

/// Monte-Carlo estimate of the class fractions over states with the
/// side-A marginal maximally mixed. Samples are processed in chunks of
/// 1024; per-sample streams derive from (seed, index), so the report is a
/// pure function of the config at any worker count.
SurveyReport run_survey(const SurveyConfig& cfg, const ProgressFn& progress = {});

/// Sample of the measure named by tag (used by run_survey and the
/// verification CLI). Raises InvalidConfig for unknown tags.
TwoQubitState sample_measure(const std::string& tag, const SeedStream& seed);

}  // namespace hnl

#endif
