#ifndef HNL_TEST_HELPERS_HPP
#define HNL_TEST_HELPERS_HPP

#include "hnl/state.hpp"
#include "hnl/types.hpp"

#include <cmath>

namespace hnl::test {

inline double max_abs_diff(const Mat4& x, const Mat4& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const RMat4& x, const RMat4& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Mat2& x, const Mat2& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

/// |00><00|
inline TwoQubitState ket00_state() {
  Mat4 rho = Mat4::Zero();
  rho(0, 0) = 1.0;
  return validate_state(rho);
}

/// |0><0| (x) I/2
inline TwoQubitState zero_mixed_state() {
  Mat4 rho = Mat4::Zero();
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.5;
  return validate_state(rho);
}

/// I/2 (x) |0><0|
inline TwoQubitState mixed_zero_state() {
  Mat4 rho = Mat4::Zero();
  rho(0, 0) = 0.5;
  rho(2, 2) = 0.5;
  return validate_state(rho);
}

/// cos(theta)|00> + sin(theta)|11>
inline TwoQubitState schmidt_state(double theta) {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = std::cos(theta);
  psi(3) = std::sin(theta);
  return validate_state(Mat4(psi * psi.adjoint()));
}

/// Random full-rank 2x2 complex matrix, redrawn until well conditioned.
inline Mat2 random_invertible_2x2(SeedStream& stream) {
  for (;;) {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        m(i, j) = Cplx(2.0 * stream.next_double() - 1.0,
                       2.0 * stream.next_double() - 1.0);
    if (std::abs(m.determinant()) > 0.05) return m;
  }
}

}  // namespace hnl::test

#endif
