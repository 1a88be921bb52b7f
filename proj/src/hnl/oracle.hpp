/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_ORACLE_HPP
#define HNL_ORACLE_HPP

#include "hnl/correlation.hpp"
#include "hnl/filtering.hpp"
#include "hnl/state.hpp"

#include <cstdint>

namespace hnl {

struct FilterSearchConfig {
  int n_random = 2000;   // random filter draws
  int n_refine = 3;      // coordinate refinement passes
  double t_min = 0.01;   // smallest filter singular-value ratio
  std::uint64_t seed = 0;
};

struct OracleResult {
  double best_chsh = 0.0;
  LocalFilter best_filter;
  double success_prob_at_best = 1.0;
  /// Supremum of the CHSH value over the filtering orbit:
  /// max(2, 2 sqrt((lambda_1 + lambda_2) / lambda_0)). Filtering toward the
  /// product boundary approaches the value 2 from below for every state, so
  /// the closed form is the supremum exactly where it exceeds 2.
  double closed_form_bound = 0.0;
  double gap = 0.0;  // closed_form_bound - best_chsh, >= -1e-6
};

/// Direct search for the largest post-filter CHSH value. Filters are
/// parameterized as positive matrices V diag(t, 1) V^dag with t in
/// [t_min, 1] and V a Bloch direction, three parameters per side; unitary
/// factors are absorbed by the measurement optimization inside
/// horodecki_value, so positive filters lose no generality. Random draws
/// use per-draw seed streams derived from (seed, index); identical seeds
/// give identical results at any parallelism level.
OracleResult search_filters(const TwoQubitState& s,
                            const FilterSearchConfig& cfg);

/// Two-sided check of the closed-form criterion against the search:
/// criterion positive demands best_chsh > 2 - slack (the optimum may only
/// be approached in the small-t limit), criterion negative demands
/// best_chsh <= 2 + 1e-6.
bool certify(const TwoQubitState& s, const FilterSearchConfig& cfg,
             double slack);

/// Same decision rule applied to an existing search result.
bool certify_result(bool criterion_hidden, const OracleResult& res,
                    double slack);

}  // namespace hnl

#endif
