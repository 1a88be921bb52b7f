/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "hnl/survey.hpp"

#include "hnl/filtering.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

namespace hnl {

namespace {

constexpr std::uint64_t kChunk = 1024;

struct Tally {
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t violations = 0;

  void operator+=(const Tally& o) {
    for (int i = 0; i < 4; ++i) counts[i] += o.counts[i];
    violations += o.violations;
  }
};

/// One-sided marginal whitening pushes a generic Ginibre state into the
/// maximally-mixed-marginal family exactly.
TwoQubitState ginibre_filtered(const SeedStream& seed) {
  const TwoQubitState g = random_ginibre_state(seed);
  const Mat2 ma = partial_trace(g, Side::A);
  Eigen::SelfAdjointEigenSolver<Mat2> es(ma);
  Mat2 d = Mat2::Zero();
  d(0, 0) = 1.0 / std::sqrt(2.0 * es.eigenvalues()(0));
  d(1, 1) = 1.0 / std::sqrt(2.0 * es.eigenvalues()(1));
  const Mat2 f = es.eigenvectors() * d * es.eigenvectors().adjoint();
  return apply_filter(g, LocalFilter{f, Mat2::Identity()}).state;
}

}  // namespace

const char* state_class_name(StateClass c) {
  switch (c) {
    case StateClass::separable: return "separable";
    case StateClass::entangled_no_hidden_nl: return "entangled_no_hidden_nl";
    case StateClass::hidden_nl_only: return "hidden_nl_only";
    case StateClass::chsh_violating: return "chsh_violating";
  }
  return "unknown";
}

StateClass class_label(const TwoQubitState& s, const SurveyTolerances& tol) {
  const bool sep = is_separable(s, tol.separability);
  const CorrelationMatrix r = correlation_matrix(s);
  const HiddenNonlocality h = hidden_nonlocality(
      lorentz_spectrum(c_matrix(r), tol.spectrum), tol.criterion_rel);
  const bool violating = horodecki_value(r) > 1.0;

  if (sep && h.hidden)
    raise(Errc::consistency_violation, "separable state flagged hidden-nonlocal");
  if (violating && !h.hidden)
    raise(Errc::consistency_violation,
          "unfiltered violation without hidden nonlocality");

  if (sep) return StateClass::separable;
  if (!h.hidden) return StateClass::entangled_no_hidden_nl;
  if (!violating) return StateClass::hidden_nl_only;
  return StateClass::chsh_violating;
}

FractionCI wilson_interval(std::uint64_t successes, std::uint64_t n) {
  FractionCI out;
  if (n == 0) return out;
  const double z = 1.959963984540054;  // 95%
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2n = z * z / nn;
  const double denom = 1.0 + z2n;
  const double center = (p + 0.5 * z2n) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + 0.25 * z2n / nn) / denom;
  out.value = p;
  out.ci_low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  out.ci_high = successes == n ? 1.0 : std::min(1.0, center + half);
  return out;
}

TwoQubitState sample_measure(const std::string& tag, const SeedStream& seed) {
  if (tag == "stinespring-env4") return random_channel_choi(seed, 4);
  if (tag == "ginibre-filtered") return ginibre_filtered(seed);
  raise(Errc::invalid_config, "unknown measure tag '" + tag + "'");
}

SurveyReport run_survey(const SurveyConfig& cfg, const ProgressFn& progress) {
  if (cfg.n_samples < 1) raise(Errc::invalid_config, "n_samples must be >= 1");
  // validate the tag up front so workers cannot race on the error
  (void)sample_measure(cfg.measure_tag, SeedStream(cfg.seed));

  const SeedStream root(cfg.seed);
  const std::uint64_t n = cfg.n_samples;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  unsigned hw = std::thread::hardware_concurrency();
  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : (hw ? hw : 1);
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_chunks));

  std::vector<Tally> partial(n_chunks);
  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> done_samples{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      Tally t;
      const std::uint64_t lo = c * kChunk;
      const std::uint64_t hi = std::min(n, lo + kChunk);
      for (std::uint64_t i = lo; i < hi; ++i) {
        const TwoQubitState s = sample_measure(cfg.measure_tag, root.at(i));
        try {
          t.counts[static_cast<int>(class_label(s, cfg.tolerances))]++;
        } catch (const Error& e) {
          if (e.code() != Errc::consistency_violation) throw;
          t.violations++;
          // keep the tallies complete: fall back on the nesting priority
          if (is_separable(s, cfg.tolerances.separability))
            t.counts[static_cast<int>(StateClass::separable)]++;
          else
            t.counts[static_cast<int>(StateClass::chsh_violating)]++;
        }
      }
      partial[c] = t;
      const std::uint64_t done = done_samples.fetch_add(hi - lo) + (hi - lo);
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(static_cast<double>(done) / static_cast<double>(n));
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Tally total;
  for (const Tally& t : partial) total += t;

  SurveyReport rep;
  rep.n = n;
  rep.class_counts = total.counts;
  rep.consistency_violations = total.violations;
  rep.measure_tag = cfg.measure_tag;
  rep.seed = cfg.seed;
  const std::uint64_t sep = total.counts[0];
  const std::uint64_t not_hidden = total.counts[0] + total.counts[1];
  const std::uint64_t no_chsh =
      total.counts[0] + total.counts[1] + total.counts[2];
  rep.frac_separable = wilson_interval(sep, n);
  rep.frac_not_hidden_nonlocal = wilson_interval(not_hidden, n);
  rep.frac_no_unfiltered_chsh = wilson_interval(no_chsh, n);
  return rep;
}

}  // namespace hnl
