/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_TYPES_HPP
#define HNL_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace hnl {

using Cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using RMat3 = Eigen::Matrix3d;
using RMat4 = Eigen::Matrix4d;
using RVec3 = Eigen::Vector3d;
using RVec4 = Eigen::Vector4d;

enum class Errc {
  ok = 0,
  not_hermitian,
  not_unit_trace,
  not_positive,
  non_real_correlation,
  complex_spectrum,
  singular_filter,
  filter_annihilates,
  convergence_failure,
  wrong_case,
  consistency_violation,
  invalid_config,
  parse_error,
  invalid_argument,
};

const char* errc_name(Errc c);

/// Domain error carrying one of the Errc codes; what() starts with the
/// code name so diagnostics stay greppable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

/// sigma_0 = I, sigma_1 = X, sigma_2 = Y, sigma_3 = Z.
const Mat2& pauli(int i);

/// kron(sigma_i, sigma_j), indexed i * 4 + j.
const Mat4& pauli_pair(int i, int j);

/// diag(1, -1, -1, -1).
const RMat4& minkowski();

/// Unitary change of basis that carries a local operator pair A (x) conj(A)
/// into its real Lorentz representative.
const Mat4& lorentz_basis_transform();

inline Mat4 kron2(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace hnl

#endif
