/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "hnl/state.hpp"

#include <cmath>
#include <sstream>

namespace hnl {

namespace {

std::string magnitude(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

TwoQubitState validate_state(const Mat4& m, double tol) {
  if (!m.allFinite()) raise(Errc::invalid_argument, "matrix has NaN/Inf entries");

  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol)
    raise(Errc::not_hermitian,
          "max |rho - rho^dag| = " + magnitude(herm_dev) + " exceeds tol " + magnitude(tol));
  Mat4 rho = 0.5 * (m + m.adjoint());

  const double tr = rho.trace().real();
  const double trace_dev = std::abs(tr - 1.0);
  if (trace_dev > tol)
    raise(Errc::not_unit_trace,
          "|Tr(rho) - 1| = " + magnitude(trace_dev) + " exceeds tol " + magnitude(tol));
  // renormalizing a trace that is off by an ulp would only churn the
  // entries; round trips through the file format stay exact this way
  if (trace_dev > 1e-15) rho /= tr;

  Eigen::SelfAdjointEigenSolver<Mat4> es(rho, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol)
    raise(Errc::not_positive,
          "min eigenvalue " + magnitude(min_eig) + " below -tol " + magnitude(tol));

  return TwoQubitState{rho, tol};
}

Mat2 partial_trace(const TwoQubitState& s, Side keep) {
  const Mat4& r = s.rho;
  Mat2 out;
  if (keep == Side::A) {
    // trace over B: indices (a b, a' b') summed over b = b'
    out(0, 0) = r(0, 0) + r(1, 1);
    out(0, 1) = r(0, 2) + r(1, 3);
    out(1, 0) = r(2, 0) + r(3, 1);
    out(1, 1) = r(2, 2) + r(3, 3);
  } else {
    out(0, 0) = r(0, 0) + r(2, 2);
    out(0, 1) = r(0, 1) + r(2, 3);
    out(1, 0) = r(1, 0) + r(3, 2);
    out(1, 1) = r(1, 1) + r(3, 3);
  }
  return out;
}

Mat4 partial_transpose(const TwoQubitState& s) {
  const Mat4& r = s.rho;
  Mat4 out;
  // transpose the B index pair: (a b, a' b') -> (a b', a' b)
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp)
          out(2 * a + bp, 2 * ap + b) = r(2 * a + b, 2 * ap + bp);
  return out;
}

bool is_separable(const TwoQubitState& s, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(partial_transpose(s), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

double purity(const TwoQubitState& s) {
  return (s.rho * s.rho).trace().real();
}

double trace_distance(const Mat4& x, const Mat4& y) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(Mat4(x - y), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

TwoQubitState werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    raise(Errc::invalid_argument, "Werner parameter p must lie in [0, 1]");
  Mat4 rho = (1.0 - p) * 0.25 * Mat4::Identity();
  // |psi-> = (|01> - |10>)/sqrt(2)
  rho(1, 1) += 0.5 * p;
  rho(2, 2) += 0.5 * p;
  rho(1, 2) -= 0.5 * p;
  rho(2, 1) -= 0.5 * p;
  return TwoQubitState{rho, kDefaultStateTol};
}

TwoQubitState phi_plus_state() {
  Mat4 rho = Mat4::Zero();
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  return TwoQubitState{rho, kDefaultStateTol};
}

TwoQubitState random_pure_state(const SeedStream& seed) {
  auto eng = seed.engine();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector4cd psi;
  for (int i = 0; i < 4; ++i) psi(i) = Cplx(gauss(eng), gauss(eng));
  psi.normalize();
  return TwoQubitState{Mat4(psi * psi.adjoint()), kDefaultStateTol};
}

TwoQubitState random_ginibre_state(const SeedStream& seed) {
  auto eng = seed.engine();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Cplx(gauss(eng), gauss(eng));
  Mat4 rho = g * g.adjoint();
  rho /= rho.trace().real();
  return TwoQubitState{rho, kDefaultStateTol};
}

TwoQubitState random_channel_choi(const SeedStream& seed, int env_dim) {
  if (env_dim < 1) raise(Errc::invalid_argument, "env_dim must be >= 1");
  auto eng = seed.engine();
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Haar isometry: QR of a (2 env) x 2 Ginibre block, phases fixed so the
  // distribution matches the first two columns of a Haar unitary.
  const int rows = 2 * env_dim;
  Eigen::MatrixXcd g(rows, 2);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Cplx(gauss(eng), gauss(eng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, 2);
  Eigen::MatrixXcd r = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const Cplx d = r(j, j);
    q.col(j) *= (d == Cplx(0) ? Cplx(1) : Cplx(d / std::abs(d)));
  }

  // Row (o * env_dim + e) of the isometry holds component (o, e); the Kraus
  // operator for environment index e is the pair of rows (e, env_dim + e).
  const TwoQubitState phi = phi_plus_state();
  Mat4 acc = Mat4::Zero();
  for (int e = 0; e < env_dim; ++e) {
    Mat2 k;
    k.row(0) = q.row(e);
    k.row(1) = q.row(env_dim + e);
    const Mat4 w = kron2(Mat2::Identity(), k);
    acc += w * phi.rho * w.adjoint();
  }
  const Mat4 rho = 0.5 * (acc + acc.adjoint());
  return TwoQubitState{rho, kDefaultStateTol};
}

TwoQubitState normal_form_family_state(double a, double b, double c, double d) {
  if (!(a > 0))
    raise(Errc::invalid_argument, "family parameter a must be positive");
  if (b + c < -1e-15 * a || a - b < -1e-15 * a || a - c < -1e-15 * a)
    raise(Errc::invalid_argument, "family parameters violate b+c >= 0, b <= a, c <= a");
  if ((a - b) * (a - c) < d * d - 1e-15 * a * a)
    raise(Errc::invalid_argument, "family parameters violate (a-b)(a-c) >= d^2");
  Mat4 rho = Mat4::Zero();
  const double norm = 1.0 / (2.0 * a);
  rho(0, 0) = (b + c) * norm;
  rho(1, 1) = (a - b) * norm;
  rho(2, 2) = (a - c) * norm;
  rho(1, 2) = d * norm;
  rho(2, 1) = d * norm;
  return TwoQubitState{rho, kDefaultStateTol};
}

}  // namespace hnl
