/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "hnl/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hnl {

CorrelationMatrix correlation_matrix(const TwoQubitState& s) {
  RMat4 r;
  double max_imag = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // Tr(rho P) = sum_{kl} rho_kl P_lk
      const Cplx t = (s.rho.cwiseProduct(pauli_pair(i, j).transpose())).sum();
      max_imag = std::max(max_imag, std::abs(t.imag()));
      r(i, j) = t.real();
    }
  }
  if (max_imag > kCorrelationImagTol) {
    std::ostringstream os;
    os << "imaginary residue " << max_imag << " in a Pauli expectation";
    raise(Errc::non_real_correlation, os.str());
  }
  return CorrelationMatrix{r, std::abs(r(0, 0) - 1.0) <= 1e-12};
}

RMat4 c_matrix(const CorrelationMatrix& r) {
  const RMat4& m = minkowski();
  return m * r.r * m * r.r.transpose();
}

LorentzSpectrum lorentz_spectrum(const RMat4& c, double tol) {
  Eigen::EigenSolver<RMat4> es(c, /*computeEigenvectors=*/false);
  const auto ev = es.eigenvalues();

  const double scale = tol * (1.0 + c.norm());
  double max_imag = 0.0;
  for (int i = 0; i < 4; ++i) max_imag = std::max(max_imag, std::abs(ev(i).imag()));
  if (max_imag > scale) {
    std::ostringstream os;
    os << "imaginary eigenvalue part " << max_imag << " exceeds " << scale;
    raise(Errc::complex_spectrum, os.str());
  }

  LorentzSpectrum out;
  out.max_imag_residual = max_imag;
  for (int i = 0; i < 4; ++i) {
    double v = ev(i).real();
    if (v < 0.0) {
      if (v < -scale) {
        std::ostringstream os;
        os << "negative eigenvalue " << v << " beyond tolerance " << scale;
        raise(Errc::complex_spectrum, os.str());
      }
      v = 0.0;
      out.clamp_applied = true;
    }
    out.lambda[i] = v;
  }
  std::sort(out.lambda.begin(), out.lambda.end(), std::greater<double>());
  return out;
}

HiddenNonlocality hidden_nonlocality(const LorentzSpectrum& spec, double rel_tol,
                                     double abs_tol) {
  const double l0 = spec.lambda[0];
  const double l12 = spec.lambda[1] + spec.lambda[2];
  if (l0 <= abs_tol) return HiddenNonlocality{false, 0.0};
  const double violation =
      std::min(2.0 * std::sqrt(2.0), 2.0 * std::sqrt(l12 / l0));
  return HiddenNonlocality{l12 > l0 * (1.0 + rel_tol), violation};
}

double horodecki_value(const CorrelationMatrix& r) {
  RMat3 t = r.r.block<3, 3>(1, 1);
  if (!r.normalized && std::abs(r.r(0, 0)) > 0.0) t /= r.r(0, 0);
  Eigen::SelfAdjointEigenSolver<RMat3> es(RMat3(t.transpose() * t),
                                          Eigen::EigenvaluesOnly);
  const auto w = es.eigenvalues();  // ascending
  return w(2) + w(1);
}

CriterionReport analyze(const TwoQubitState& s) {
  CriterionReport rep;
  const CorrelationMatrix r = correlation_matrix(s);
  rep.spectrum = lorentz_spectrum(c_matrix(r));
  const HiddenNonlocality h = hidden_nonlocality(rep.spectrum);
  rep.hidden_nonlocal = h.hidden;
  rep.max_filtered_chsh = h.violation;
  rep.horodecki_M = horodecki_value(r);
  rep.chsh_unfiltered = 2.0 * std::sqrt(std::max(0.0, rep.horodecki_M));
  rep.separable = is_separable(s, s.norm_tol);
  return rep;
}

}  // namespace hnl
