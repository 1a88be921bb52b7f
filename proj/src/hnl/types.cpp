/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "hnl/types.hpp"

#include <cmath>

namespace hnl {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ok: return "Ok";
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::not_unit_trace: return "NotUnitTrace";
    case Errc::not_positive: return "NotPositive";
    case Errc::non_real_correlation: return "NonRealCorrelation";
    case Errc::complex_spectrum: return "ComplexSpectrum";
    case Errc::singular_filter: return "SingularFilter";
    case Errc::filter_annihilates: return "FilterAnnihilates";
    case Errc::convergence_failure: return "ConvergenceFailure";
    case Errc::wrong_case: return "WrongCase";
    case Errc::consistency_violation: return "ConsistencyViolation";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

namespace {

std::array<Mat2, 4> make_paulis() {
  const Cplx i(0.0, 1.0);
  std::array<Mat2, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -i, i, 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

std::array<Mat4, 16> make_pauli_pairs() {
  std::array<Mat4, 16> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i * 4 + j] = kron2(pauli(i), pauli(j));
  return out;
}

}  // namespace

const Mat2& pauli(int i) {
  static const std::array<Mat2, 4> s = make_paulis();
  return s[i];
}

const Mat4& pauli_pair(int i, int j) {
  static const std::array<Mat4, 16> p = make_pauli_pairs();
  return p[i * 4 + j];
}

const RMat4& minkowski() {
  static const RMat4 m = RVec4(1, -1, -1, -1).asDiagonal();
  return m;
}

const Mat4& lorentz_basis_transform() {
  static const Mat4 t = [] {
    const Cplx i(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    Mat4 m;
    m << 1, 0, 0, 1,
         0, 1, 1, 0,
         0, i, -i, 0,
         1, 0, 0, -1;
    return Mat4(s * m);
  }();
  return t;
}

}  // namespace hnl
