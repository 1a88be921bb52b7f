/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_CORRELATION_HPP
#define HNL_CORRELATION_HPP

#include "hnl/state.hpp"
#include "hnl/types.hpp"

#include <array>

namespace hnl {

/// Absolute bound on the imaginary residue of each Pauli expectation.
inline constexpr double kCorrelationImagTol = 1e-12;

/// Relative bound on imaginary parts of the transport-matrix spectrum.
inline constexpr double kSpectrumTol = 1e-8;

/// Relative margin on the strict criterion comparison; values at the
/// boundary classify as not hidden-nonlocal (a CHSH value of exactly 2 is
/// not a violation).
inline constexpr double kCriterionRelTol = 1e-12;

/// Below this, the leading eigenvalue counts as zero and the reported
/// violation is 0 rather than 0/0.
inline constexpr double kLambdaZeroTol = 1e-12;

/// Real 4x4 matrix of Pauli expectations r_ij = Tr(rho sigma_i (x) sigma_j);
/// r(0,0) = 1 when normalized.
struct CorrelationMatrix {
  RMat4 r;
  bool normalized = true;
};

CorrelationMatrix correlation_matrix(const TwoQubitState& s);

/// M r M r^T with M = diag(1,-1,-1,-1). Not symmetric in general.
RMat4 c_matrix(const CorrelationMatrix& r);

/// The four eigenvalues of the transport matrix, clamped to [0, inf) and
/// sorted descending. These are squared Lorentz singular values of r, so a
/// physical input yields a real nonnegative spectrum; reality is asserted,
/// not assumed.
struct LorentzSpectrum {
  std::array<double, 4> lambda{};
  double max_imag_residual = 0.0;
  bool clamp_applied = false;
};

LorentzSpectrum lorentz_spectrum(const RMat4& c, double tol = kSpectrumTol);

struct HiddenNonlocality {
  bool hidden = false;
  double violation = 0.0;  // optimal filtered CHSH value, in [0, 2 sqrt 2]
};

/// Strict test lambda_1 + lambda_2 > lambda_0 with the optimal filtered
/// CHSH value 2 sqrt((lambda_1 + lambda_2) / lambda_0). A zero leading
/// eigenvalue reports (false, 0).
HiddenNonlocality hidden_nonlocality(const LorentzSpectrum& spec,
                                     double rel_tol = kCriterionRelTol,
                                     double abs_tol = kLambdaZeroTol);

/// Sum of the two largest eigenvalues of T^T T, T the lower-right 3x3 block
/// of the normalized r. CHSH is violated by some fixed measurements iff the
/// value exceeds 1; the unfiltered maximum is 2 sqrt(value).
double horodecki_value(const CorrelationMatrix& r);

struct CriterionReport {
  LorentzSpectrum spectrum;
  bool hidden_nonlocal = false;
  double max_filtered_chsh = 0.0;
  double horodecki_M = 0.0;
  double chsh_unfiltered = 0.0;
  bool separable = false;
};

CriterionReport analyze(const TwoQubitState& s);

}  // namespace hnl

#endif
