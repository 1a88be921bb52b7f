/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "hnl/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

namespace hnl {

namespace {

constexpr double kPatternResidualTol = 1e-6;
constexpr double kCaseValueTol = 1e-6;
constexpr double kSpectrumDegeneracyTol = 1e-5;
constexpr int kStallWindow = 25;
constexpr double kStallRatio = 0.92;

void check_full_rank(const Mat2& m, double min_abs_det, const char* which) {
  const double ad = std::abs(m.determinant());
  if (!(ad >= min_abs_det)) {
    std::ostringstream os;
    os << "|det " << which << "| = " << ad << " below " << min_abs_det;
    raise(Errc::singular_filter, os.str());
  }
}

}  // namespace

LocalFilter make_filter(const Mat2& a, const Mat2& b, double min_abs_det) {
  check_full_rank(a, min_abs_det, "a");
  check_full_rank(b, min_abs_det, "b");
  return LocalFilter{a, b, min_abs_det};
}

LocalFilter compose(const LocalFilter& outer, const LocalFilter& inner) {
  return LocalFilter{outer.a * inner.a, outer.b * inner.b,
                     std::min(outer.min_abs_det, inner.min_abs_det)};
}

LorentzMap lorentz_of_filter(const Mat2& a, double min_abs_det) {
  const double ad = std::abs(a.determinant());
  if (!(ad >= min_abs_det)) {
    std::ostringstream os;
    os << "|det| = " << ad << " below " << min_abs_det;
    raise(Errc::singular_filter, os.str());
  }
  const Mat4& t = lorentz_basis_transform();
  const Mat4 w = t * kron2(a, a.conjugate()) * t.adjoint() / ad;
  const double imag = w.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-12 * (1.0 + w.real().norm()))
    raise(Errc::invalid_argument, "Lorentz representative has imaginary residue");
  return LorentzMap{w.real()};
}

FilteredState apply_filter(const TwoQubitState& s, const LocalFilter& f) {
  check_full_rank(f.a, f.min_abs_det, "a");
  check_full_rank(f.b, f.min_abs_det, "b");
  const Mat4 w = kron2(f.a, f.b);
  const Mat4 raw = w * s.rho * w.adjoint();
  const double p = raw.trace().real();
  if (!(p >= 1e-14)) {
    std::ostringstream os;
    os << "success probability " << p << "; numeric breakdown";
    raise(Errc::filter_annihilates, os.str());
  }
  const Mat4 out = 0.5 / p * (raw + raw.adjoint());
  return FilteredState{validate_state(out, s.norm_tol), p};
}

CorrelationMatrix transport_correlation(const CorrelationMatrix& r,
                                        const LocalFilter& f) {
  const LorentzMap la = lorentz_of_filter(f.a, f.min_abs_det);
  const LorentzMap lb = lorentz_of_filter(f.b, f.min_abs_det);
  const double scale =
      std::abs(f.a.determinant()) * std::abs(f.b.determinant());
  RMat4 out = la.l * r.r * lb.l.transpose() * scale;
  return CorrelationMatrix{out, std::abs(out(0, 0) - 1.0) <= 1e-12};
}

const char* normal_form_case_name(NormalFormCase c) {
  switch (c) {
    case NormalFormCase::bell_diagonal: return "bell_diagonal";
    case NormalFormCase::rank_deficient_i: return "rank_deficient_i";
    case NormalFormCase::product_ii: return "product_ii";
    case NormalFormCase::product_iii: return "product_iii";
    case NormalFormCase::product_iv: return "product_iv";
  }
  return "unknown";
}

Mat2 su2_from_rotation(const RMat3& o) {
  double w, x, y, z;
  const double tr = o.trace();
  if (tr > 0.0) {
    const double s = std::sqrt(tr + 1.0) * 2.0;
    w = 0.25 * s;
    x = (o(2, 1) - o(1, 2)) / s;
    y = (o(0, 2) - o(2, 0)) / s;
    z = (o(1, 0) - o(0, 1)) / s;
  } else if (o(0, 0) > o(1, 1) && o(0, 0) > o(2, 2)) {
    const double s = std::sqrt(1.0 + o(0, 0) - o(1, 1) - o(2, 2)) * 2.0;
    w = (o(2, 1) - o(1, 2)) / s;
    x = 0.25 * s;
    y = (o(0, 1) + o(1, 0)) / s;
    z = (o(0, 2) + o(2, 0)) / s;
  } else if (o(1, 1) > o(2, 2)) {
    const double s = std::sqrt(1.0 + o(1, 1) - o(0, 0) - o(2, 2)) * 2.0;
    w = (o(0, 2) - o(2, 0)) / s;
    x = (o(0, 1) + o(1, 0)) / s;
    y = 0.25 * s;
    z = (o(1, 2) + o(2, 1)) / s;
  } else {
    const double s = std::sqrt(1.0 + o(2, 2) - o(0, 0) - o(1, 1)) * 2.0;
    w = (o(1, 0) - o(0, 1)) / s;
    x = (o(0, 2) + o(2, 0)) / s;
    y = (o(1, 2) + o(2, 1)) / s;
    z = 0.25 * s;
  }
  const Cplx i(0.0, 1.0);
  return Mat2(w * Mat2::Identity() -
              i * (x * pauli(1) + y * pauli(2) + z * pauli(3)));
}

namespace {

struct PatternFit {
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;
  double residual = 0.0;
  RMat3 o1 = RMat3::Identity();
  RMat3 o2 = RMat3::Identity();
};

RMat4 extend_rotation(const RMat3& o) {
  RMat4 out = RMat4::Identity();
  out.block<3, 3>(1, 1) = o;
  return out;
}

double pattern_residual(const RMat4& rt) {
  const double a = rt(0, 0), b = rt(0, 3), c = rt(3, 0);
  double res = 0.5 * std::abs(rt(1, 1) - rt(2, 2));
  res = std::max(res, std::abs(rt(3, 3) - (b + c - a)));
  static constexpr int off[10][2] = {{0, 1}, {0, 2}, {1, 0}, {2, 0}, {1, 2},
                                     {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}};
  for (const auto& ij : off) res = std::max(res, std::abs(rt(ij[0], ij[1])));
  return res;
}

/// Searches SO(3) x SO(3) rotations built from the signed SVD of the 3x3
/// block (times slot permutations and axis-pair sign flips) for the frame
/// in which r is closest to the four-parameter pattern.
PatternFit fit_pattern(const RMat4& r) {
  const RMat3 block = r.block<3, 3>(1, 1);
  Eigen::JacobiSVD<RMat3> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RMat3 u = svd.matrixU();
  RMat3 v = svd.matrixV();
  if (u.determinant() < 0) u.col(2) *= -1.0;
  if (v.determinant() < 0) v.col(2) *= -1.0;

  // cyclic slot permutations (det +1); column k of each maps slot k
  std::array<RMat3, 3> perms;
  perms[0] = RMat3::Identity();
  perms[1] << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  perms[2] << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  // axis-pair sign flips (det +1)
  std::array<RVec3, 4> flips = {RVec3(1, 1, 1), RVec3(-1, -1, 1),
                                RVec3(-1, 1, -1), RVec3(1, -1, -1)};

  PatternFit best;
  best.residual = std::numeric_limits<double>::infinity();
  for (const auto& p : perms) {
    const RMat3 up = u * p;
    const RMat3 vp = v * p;
    for (const auto& f1 : flips) {
      const RMat3 o1 = up * f1.asDiagonal();
      for (const auto& f2 : flips) {
        const RMat3 o2 = vp * f2.asDiagonal();
        const RMat4 rt =
            extend_rotation(o1).transpose() * r * extend_rotation(o2);
        const double res = pattern_residual(rt);
        if (res < best.residual) {
          best.residual = res;
          best.a = rt(0, 0);
          best.b = rt(0, 3);
          best.c = rt(3, 0);
          best.d = 0.5 * (rt(1, 1) + rt(2, 2));
          best.o1 = o1;
          best.o2 = o2;
        }
      }
    }
  }
  return best;
}

std::optional<NormalFormCase> classify_pattern(const PatternFit& f) {
  const double tol = kCaseValueTol * std::max(1.0, std::abs(f.a));
  const bool d0 = std::abs(f.d) <= tol;
  if (d0 && std::abs(f.b - f.a) <= tol && std::abs(f.c - f.a) <= tol)
    return NormalFormCase::product_iv;
  if (d0 && std::abs(f.c) <= tol && std::abs(f.b - f.a) <= tol)
    return NormalFormCase::product_ii;
  if (d0 && std::abs(f.b) <= tol && std::abs(f.c - f.a) <= tol)
    return NormalFormCase::product_iii;
  if (std::abs(f.b - 0.5 * f.a) <= tol && std::abs(f.c - 0.5 * f.a) <= tol)
    return NormalFormCase::rank_deficient_i;
  return std::nullopt;
}

LocalFilter rotation_filter(const PatternFit& fit) {
  return LocalFilter{su2_from_rotation(RMat3(fit.o1.transpose())),
                     su2_from_rotation(RMat3(fit.o2.transpose()))};
}

NormalFormResult finish_pattern_case(const TwoQubitState& original,
                                     const PatternFit& fit, NormalFormCase tag,
                                     const LocalFilter& accumulated,
                                     int iterations) {
  NormalFormResult out;
  out.filter = compose(rotation_filter(fit), accumulated);
  out.state = apply_filter(original, out.filter).state;
  out.params.a = fit.a;
  out.params.b = fit.b;
  out.params.c = fit.c;
  out.params.d = fit.d;
  out.params.case_tag = tag;
  out.params.diag = {fit.a, fit.d, fit.d, fit.b + fit.c - fit.a};
  out.params.fit_residual = fit.residual;
  out.params.iterations = iterations;
  return out;
}

Mat2 inverse_sqrt_twice(const Mat2& marginal) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(marginal);
  const auto w = es.eigenvalues();
  Mat2 d = Mat2::Zero();
  d(0, 0) = 1.0 / std::sqrt(2.0 * w(0));
  d(1, 1) = 1.0 / std::sqrt(2.0 * w(1));
  return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

}  // namespace

NormalFormResult normal_form(const TwoQubitState& s, double eps, int max_iter) {
  if (!(eps > 0.0)) raise(Errc::invalid_argument, "eps must be positive");
  if (max_iter < 1) raise(Errc::invalid_argument, "max_iter must be >= 1");

  const CorrelationMatrix r0 = correlation_matrix(s);

  // States already in the pattern frame classify without iterating.
  {
    const PatternFit fit = fit_pattern(r0.r);
    if (fit.residual <= kPatternResidualTol) {
      if (auto tag = classify_pattern(fit))
        return finish_pattern_case(s, fit, *tag, LocalFilter{}, 0);
    }
  }

  TwoQubitState cur = s;
  LocalFilter acc;
  std::vector<double> errs;
  errs.reserve(256);
  int iter = 0;
  bool stalled = false;

  for (; iter < max_iter; ++iter) {
    const Mat2 ma = partial_trace(cur, Side::A);
    const Mat2 mb = partial_trace(cur, Side::B);
    const double da = (ma - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff();
    const double db = (mb - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff();
    const double err = std::max(da, db);

    if (err <= eps) {
      // Bell-diagonal reduction: rotate the converged correlation matrix
      // diagonal and fold the rotations into the accumulated filter.
      const CorrelationMatrix rc = correlation_matrix(cur);
      const RMat3 block = rc.r.block<3, 3>(1, 1);
      Eigen::JacobiSVD<RMat3> svd(block,
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
      RMat3 u = svd.matrixU();
      RMat3 v = svd.matrixV();
      if (u.determinant() < 0) u.col(2) *= -1.0;
      if (v.determinant() < 0) v.col(2) *= -1.0;
      const RMat3 diag3 = u.transpose() * block * v;

      NormalFormResult out;
      out.filter = compose(LocalFilter{su2_from_rotation(RMat3(u.transpose())),
                                       su2_from_rotation(RMat3(v.transpose()))},
                           acc);
      out.state = apply_filter(s, out.filter).state;
      out.params.case_tag = NormalFormCase::bell_diagonal;
      out.params.a = 1.0;
      out.params.diag = {1.0, diag3(0, 0), diag3(1, 1), diag3(2, 2)};
      out.params.fit_residual = err;
      out.params.iterations = iter;
      return out;
    }

    Eigen::SelfAdjointEigenSolver<Mat2> ea(ma, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat2> eb(mb, Eigen::EigenvaluesOnly);
    const bool sing_a = ea.eigenvalues().minCoeff() < eps;
    const bool sing_b = eb.eigenvalues().minCoeff() < eps;

    if ((sing_a && sing_b) || (sing_a && db <= eps) || (sing_b && da <= eps)) {
      stalled = true;
      break;
    }

    errs.push_back(err);
    const int n = static_cast<int>(errs.size());
    if (n > 2 * kStallWindow &&
        errs[n - 1] / errs[n - 1 - kStallWindow] > kStallRatio) {
      stalled = true;
      break;
    }

    if (!sing_a && da > eps) {
      const LocalFilter step{inverse_sqrt_twice(ma), Mat2::Identity()};
      cur = apply_filter(cur, step).state;
      acc = compose(step, acc);
    }
    if (!sing_b) {
      const Mat2 mb2 = partial_trace(cur, Side::B);
      Eigen::SelfAdjointEigenSolver<Mat2> eb2(mb2, Eigen::EigenvaluesOnly);
      if (eb2.eigenvalues().minCoeff() >= eps &&
          (mb2 - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff() > eps) {
        const LocalFilter step{Mat2::Identity(), inverse_sqrt_twice(mb2)};
        cur = apply_filter(cur, step).state;
        acc = compose(step, acc);
      }
    }
  }

  if (!stalled) {
    std::ostringstream os;
    os << "no convergence after " << iter << " iterations";
    raise(Errc::convergence_failure, os.str());
  }

  // Stalled: the Bell-diagonal form is not reachable by finite filters.
  // First try to read the pattern off the current frame directly.
  const CorrelationMatrix rc = correlation_matrix(cur);
  const PatternFit fit = fit_pattern(rc.r);
  if (fit.residual <= kPatternResidualTol) {
    if (auto tag = classify_pattern(fit))
      return finish_pattern_case(s, fit, *tag, acc, iter);
  }

  // Otherwise fall back on the spectrum: the non-diagonalizable entangled
  // class carries a doubly degenerate spectrum (mu, mu, nu, nu), and its
  // canonical parameters follow from the invariant ratio nu/mu.
  const LorentzSpectrum spec = lorentz_spectrum(c_matrix(r0));
  const double l0 = spec.lambda[0];
  if (l0 > 0.0 &&
      std::abs(spec.lambda[0] - spec.lambda[1]) <= kSpectrumDegeneracyTol * l0 &&
      std::abs(spec.lambda[2] - spec.lambda[3]) <= kSpectrumDegeneracyTol * l0) {
    NormalFormResult out;
    out.filter = compose(rotation_filter(fit), acc);
    out.state = apply_filter(s, out.filter).state;
    const double ratio =
        (spec.lambda[2] + spec.lambda[3]) / (spec.lambda[0] + spec.lambda[1]);
    out.params.a = 1.0;
    out.params.b = 0.5;
    out.params.c = 0.5;
    out.params.d = 0.5 * std::sqrt(std::max(0.0, ratio));
    out.params.case_tag = NormalFormCase::rank_deficient_i;
    out.params.diag = {1.0, out.params.d, out.params.d, 0.0};
    out.params.fit_residual =
        std::max(std::abs(spec.lambda[0] - spec.lambda[1]),
                 std::abs(spec.lambda[2] - spec.lambda[3])) /
        l0;
    out.params.iterations = iter;
    return out;
  }

  std::ostringstream os;
  os << "stalled after " << iter << " iterations; pattern residual "
     << fit.residual << " and spectrum not doubly degenerate";
  raise(Errc::convergence_failure, os.str());
}

LocalFilter quasi_distill_family(const NormalFormParams& p, double n) {
  if (p.case_tag != NormalFormCase::rank_deficient_i)
    raise(Errc::wrong_case, "family is defined for rank_deficient_i only");
  if (std::abs(p.d) <= 1e-12)
    raise(Errc::wrong_case, "family requires d != 0");
  if (!(p.a - p.b > 0.0) || !(p.a - p.c > 0.0))
    raise(Errc::wrong_case, "family requires a - b > 0 and a - c > 0");
  if (!(n >= 1.0)) raise(Errc::invalid_argument, "n must be >= 1");
  Mat2 a = Mat2::Identity();
  Mat2 b = Mat2::Identity();
  a(0, 0) = std::sqrt((p.a - p.c) / (p.a - p.b)) / n;
  b(0, 0) = 1.0 / n;
  return LocalFilter{a, b};
}

std::vector<DistillRow> quasi_distill_table(const TwoQubitState& s,
                                            const NormalFormResult& nf,
                                            const std::vector<double>& n_grid) {
  std::vector<DistillRow> rows;
  rows.reserve(n_grid.size());
  for (double n : n_grid) {
    const LocalFilter f = compose(quasi_distill_family(nf.params, n), nf.filter);
    const FilteredState fs = apply_filter(s, f);
    DistillRow row;
    row.n = n;
    row.success_prob = fs.success_prob;
    row.chsh =
        2.0 * std::sqrt(std::max(0.0, horodecki_value(correlation_matrix(fs.state))));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hnl
