/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_FILTERING_HPP
#define HNL_FILTERING_HPP

#include "hnl/correlation.hpp"
#include "hnl/state.hpp"
#include "hnl/types.hpp"

#include <vector>

namespace hnl {

/// Filters with |det| below this count as rank deficient and are rejected;
/// the induced Lorentz map would not be finite.
inline constexpr double kMinAbsDet = 1e-12;

/// Pair of full-rank 2x2 operators applied as a (x) b with post-selection.
struct LocalFilter {
  Mat2 a = Mat2::Identity();
  Mat2 b = Mat2::Identity();
  double min_abs_det = kMinAbsDet;
};

/// Validates both determinants against min_abs_det.
LocalFilter make_filter(const Mat2& a, const Mat2& b,
                        double min_abs_det = kMinAbsDet);

/// outer after inner: (outer.a inner.a, outer.b inner.b).
LocalFilter compose(const LocalFilter& outer, const LocalFilter& inner);

/// Proper orthochronous Lorentz matrix: l^T M l = M, det l = 1, l(0,0) >= 1.
struct LorentzMap {
  RMat4 l;
};

/// Lorentz representative of a single-side filter.
LorentzMap lorentz_of_filter(const Mat2& a, double min_abs_det = kMinAbsDet);

struct FilteredState {
  TwoQubitState state;
  double success_prob = 1.0;  // Tr(a^dag a (x) b^dag b rho)
};

/// Normalized post-selected state together with the success probability.
FilteredState apply_filter(const TwoQubitState& s, const LocalFilter& f);

/// Correlation matrix of the unnormalized filtered state,
/// L_a r L_b^T |det a| |det b|. Dividing by its (0,0) entry reproduces
/// correlation_matrix(apply_filter(s, f).state).
CorrelationMatrix transport_correlation(const CorrelationMatrix& r,
                                        const LocalFilter& f);

enum class NormalFormCase {
  bell_diagonal,
  rank_deficient_i,
  product_ii,
  product_iii,
  product_iv,
};

const char* normal_form_case_name(NormalFormCase c);

/// Parameters of the reduced form reached by normal_form. For
/// bell_diagonal, diag holds the diagonal of the reduced correlation
/// matrix and (a, b, c, d) = (1, 0, 0, 0). For the other cases the reduced
/// correlation matrix is
///   [ a 0 0 b ; 0 d 0 0 ; 0 0 d 0 ; c 0 0 b+c-a ]
/// normalized to a = 1, and positivity gives (a-b)(a-c) >= d^2.
struct NormalFormParams {
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;
  NormalFormCase case_tag = NormalFormCase::bell_diagonal;
  std::array<double, 4> diag{1.0, 0.0, 0.0, 0.0};
  double fit_residual = 0.0;
  int iterations = 0;
};

struct NormalFormResult {
  TwoQubitState state;  // apply_filter(input, filter).state, in reduced form
  LocalFilter filter;
  NormalFormParams params;
};

/// Reduces a state toward its filtering normal form by alternating
/// marginal whitening (filter (2 rho_A)^{-1/2} per side, renormalizing each
/// step). Convergence of both marginals to I/2 within eps yields the
/// bell_diagonal case; a singular marginal or stalled (sub-geometric)
/// progress identifies the non-diagonalizable classes, which are fitted to
/// the four-parameter form above. Raises ConvergenceFailure when max_iter
/// is exhausted or a stalled state does not fit any class.
NormalFormResult normal_form(const TwoQubitState& s, double eps = 1e-9,
                             int max_iter = 10000);

/// The one-parameter filter family
///   a = diag(sqrt((a-c)/(a-b)) / n, 1),  b = diag(1/n, 1)
/// that drives a rank_deficient_i state toward its Bell-diagonal limit as
/// n grows; the CHSH value approaches 2 sqrt(1 + d^2/((a-b)(a-c))) while
/// the success probability falls off as 1/n^2. Requires case
/// rank_deficient_i with d != 0 and n >= 1.
LocalFilter quasi_distill_family(const NormalFormParams& p, double n);

struct DistillRow {
  double n = 1.0;
  double success_prob = 1.0;
  double chsh = 0.0;  // unfiltered CHSH value of the filtered state
};

/// Probability-versus-violation trade-off of the quasi-distillation family
/// applied on top of nf.filter, evaluated on the original state s.
std::vector<DistillRow> quasi_distill_table(const TwoQubitState& s,
                                            const NormalFormResult& nf,
                                            const std::vector<double>& n_grid);

/// SU(2) representative of a rotation: u (n . sigma) u^dag = (o n) . sigma.
Mat2 su2_from_rotation(const RMat3& o);

}  // namespace hnl

#endif
