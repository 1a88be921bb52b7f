/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_STATE_HPP
#define HNL_STATE_HPP

#include "hnl/rng.hpp"
#include "hnl/types.hpp"

namespace hnl {

inline constexpr double kDefaultStateTol = 1e-10;

enum class Side { A, B };

/// Two-qubit density matrix in the |00>,|01>,|10>,|11> basis (row-major,
/// first ket is side A). Build one through validate_state(); the matrix is
/// Hermitian to machine precision and trace one after admission.
struct TwoQubitState {
  Mat4 rho;
  double norm_tol = kDefaultStateTol;
};

/// Admits m as a physical state. Deviations within tol are repaired
/// (symmetrization, trace renormalization); anything larger is rejected
/// with the violated invariant and its magnitude.
TwoQubitState validate_state(const Mat4& m, double tol = kDefaultStateTol);

/// Reduced density matrix of the kept side.
Mat2 partial_trace(const TwoQubitState& s, Side keep);

/// Transpose on side B. Hermitian and trace one, not necessarily positive.
Mat4 partial_transpose(const TwoQubitState& s);

/// PPT test; exact for two qubits. True iff the partial transpose has no
/// eigenvalue below -tol.
bool is_separable(const TwoQubitState& s, double tol = kDefaultStateTol);

double purity(const TwoQubitState& s);

/// 0.5 * trace norm of (x - y) for Hermitian x, y.
double trace_distance(const Mat4& x, const Mat4& y);

// --- generators ------------------------------------------------------

/// p |psi-><psi-| + (1 - p) I/4, p in [0, 1].
TwoQubitState werner_state(double p);

/// (|00> + |11>)/sqrt(2) projector.
TwoQubitState phi_plus_state();

/// Haar-random unit vector in C^4, returned as a projector.
TwoQubitState random_pure_state(const SeedStream& seed);

/// G G^dag / Tr(G G^dag) with G a 4x4 complex Ginibre sample; full rank
/// almost surely.
TwoQubitState random_ginibre_state(const SeedStream& seed);

/// Choi state of a Haar-random qubit channel: sample an isometry
/// V: C^2 -> C^2 (x) C^env (two columns of a Haar unitary via QR), form
/// Phi(X) = Tr_env(V X V^dag) and return (id (x) Phi) applied to the
/// maximally entangled projector. The side-A marginal is I/2 by
/// construction. env_dim = 4 spans all qubit channels.
TwoQubitState random_channel_choi(const SeedStream& seed, int env_dim = 4);

/// The rank-deficient family
///   rho = (1/2a) [ b+c, 0,    0,    0
///                  0,   a-b,  d,    0
///                  0,   d,    a-c,  0
///                  0,   0,    0,    0 ],
/// physical iff b+c >= 0, a-b >= 0, a-c >= 0 and (a-b)(a-c) >= d^2.
TwoQubitState normal_form_family_state(double a, double b, double c, double d);

}  // namespace hnl

#endif
