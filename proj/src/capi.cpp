/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "hnl.h"

#include "hnl/correlation.hpp"
#include "hnl/filtering.hpp"
#include "hnl/io.hpp"
#include "hnl/oracle.hpp"
#include "hnl/state.hpp"
#include "hnl/survey.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <new>
#include <string>
#include <vector>

struct hnl_state {
  hnl::TwoQubitState value;
};

namespace {

constexpr const char* kVersion = "0.1.0";

hnl_status status_of(hnl::Errc c) {
  switch (c) {
    case hnl::Errc::ok: return HNL_OK;
    case hnl::Errc::not_hermitian: return HNL_ERR_NOT_HERMITIAN;
    case hnl::Errc::not_unit_trace: return HNL_ERR_NOT_UNIT_TRACE;
    case hnl::Errc::not_positive: return HNL_ERR_NOT_POSITIVE;
    case hnl::Errc::non_real_correlation: return HNL_ERR_NON_REAL_CORRELATION;
    case hnl::Errc::complex_spectrum: return HNL_ERR_COMPLEX_SPECTRUM;
    case hnl::Errc::singular_filter: return HNL_ERR_SINGULAR_FILTER;
    case hnl::Errc::filter_annihilates: return HNL_ERR_FILTER_ANNIHILATES;
    case hnl::Errc::convergence_failure: return HNL_ERR_CONVERGENCE_FAILURE;
    case hnl::Errc::wrong_case: return HNL_ERR_WRONG_CASE;
    case hnl::Errc::consistency_violation: return HNL_ERR_CONSISTENCY_VIOLATION;
    case hnl::Errc::invalid_config: return HNL_ERR_INVALID_CONFIG;
    case hnl::Errc::parse_error: return HNL_ERR_PARSE;
    case hnl::Errc::invalid_argument: return HNL_ERR_INVALID_ARGUMENT;
  }
  return HNL_ERR_INTERNAL;
}

void fill_err(char* errbuf, size_t len, const char* msg) {
  if (!errbuf || len == 0) return;
  std::strncpy(errbuf, msg, len - 1);
  errbuf[len - 1] = '\0';
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

/// Runs fn, mapping domain errors to status codes at the ABI boundary.
template <typename Fn>
hnl_status guarded(char* errbuf, size_t errbuf_len, Fn&& fn) {
  try {
    return fn();
  } catch (const hnl::Error& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    fill_err(errbuf, errbuf_len, "out of memory");
    return HNL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return HNL_ERR_INTERNAL;
  }
}

hnl_status make_state(hnl_state** out, hnl::TwoQubitState&& s) {
  if (!out) return HNL_ERR_INVALID_ARGUMENT;
  *out = new hnl_state{std::move(s)};
  return HNL_OK;
}

hnl_status emit(char** dst, const std::string& text) {
  if (!dst) return HNL_ERR_INVALID_ARGUMENT;
  *dst = dup_string(text);
  return *dst ? HNL_OK : HNL_ERR_INTERNAL;
}

}  // namespace

extern "C" {

const char* hnl_status_name(hnl_status st) {
  switch (st) {
    case HNL_OK: return "Ok";
    case HNL_ERR_NOT_HERMITIAN: return "NotHermitian";
    case HNL_ERR_NOT_UNIT_TRACE: return "NotUnitTrace";
    case HNL_ERR_NOT_POSITIVE: return "NotPositive";
    case HNL_ERR_NON_REAL_CORRELATION: return "NonRealCorrelation";
    case HNL_ERR_COMPLEX_SPECTRUM: return "ComplexSpectrum";
    case HNL_ERR_SINGULAR_FILTER: return "SingularFilter";
    case HNL_ERR_FILTER_ANNIHILATES: return "FilterAnnihilates";
    case HNL_ERR_CONVERGENCE_FAILURE: return "ConvergenceFailure";
    case HNL_ERR_WRONG_CASE: return "WrongCase";
    case HNL_ERR_CONSISTENCY_VIOLATION: return "ConsistencyViolation";
    case HNL_ERR_INVALID_CONFIG: return "InvalidConfig";
    case HNL_ERR_PARSE: return "ParseError";
    case HNL_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case HNL_ERR_INTERNAL: return "InternalError";
  }
  return "UnknownError";
}

const char* hnl_version(void) { return kVersion; }

void hnl_string_free(char* s) { delete[] s; }

void hnl_state_free(hnl_state* s) { delete s; }

uint64_t hnl_seed_derive(uint64_t seed, uint64_t index) {
  return hnl::SeedStream(seed).at(index).raw();
}

hnl_status hnl_state_from_json(const char* text, hnl_state** out, char* errbuf,
                               size_t errbuf_len) {
  if (!text) return HNL_ERR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    return make_state(out, hnl::state_from_json(text));
  });
}

hnl_status hnl_state_to_json(const hnl_state* s, char** out_json, char* errbuf,
                             size_t errbuf_len) {
  if (!s) return HNL_ERR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len,
                 [&] { return emit(out_json, hnl::state_to_json(s->value)); });
}

hnl_status hnl_state_werner(double p, hnl_state** out, char* errbuf,
                            size_t errbuf_len) {
  return guarded(errbuf, errbuf_len,
                 [&] { return make_state(out, hnl::werner_state(p)); });
}

hnl_status hnl_state_random_pure(uint64_t seed, hnl_state** out, char* errbuf,
                                 size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    return make_state(out, hnl::random_pure_state(hnl::SeedStream(seed)));
  });
}

hnl_status hnl_state_random_choi(uint64_t seed, int env_dim, hnl_state** out,
                                 char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    return make_state(out,
                      hnl::random_channel_choi(hnl::SeedStream(seed), env_dim));
  });
}

hnl_status hnl_state_normal_form_family(double a, double b, double c, double d,
                                        hnl_state** out, char* errbuf,
                                        size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    return make_state(out, hnl::normal_form_family_state(a, b, c, d));
  });
}

hnl_status hnl_analyze(const hnl_state* s, char** report_json, char* errbuf,
                       size_t errbuf_len) {
  if (!s) return HNL_ERR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    return emit(report_json, hnl::report_to_json(hnl::analyze(s->value)));
  });
}

hnl_status hnl_survey_run(uint64_t n_samples, uint64_t seed,
                          const char* measure_tag, int threads,
                          hnl_progress_fn progress, void* user,
                          char** report_json, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    hnl::SurveyConfig cfg;
    cfg.n_samples = n_samples;
    cfg.seed = seed;
    cfg.measure_tag = measure_tag ? measure_tag : "stinespring-env4";
    cfg.threads = threads;
    hnl::ProgressFn cb;
    if (progress)
      cb = [progress, user](double f) { progress(f, user); };
    const hnl::SurveyReport rep = hnl::run_survey(cfg, cb);
    return emit(report_json, hnl::survey_report_to_json(rep));
  });
}

hnl_status hnl_survey_report_csv(const char* report_json, char** out_csv,
                                 char* errbuf, size_t errbuf_len) {
  if (!report_json) return HNL_ERR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&]() -> hnl_status {
    // reconstruct the counts; the CSV is a projection of the JSON report
    hnl::SurveyReport rep;
    try {
      const auto doc = nlohmann::json::parse(report_json);
      rep.n = doc.at("n").get<std::uint64_t>();
      rep.measure_tag = doc.at("measure_tag").get<std::string>();
      rep.seed = doc.at("seed").get<std::uint64_t>();
      const auto& counts = doc.at("class_counts");
      for (int i = 0; i < 4; ++i)
        rep.class_counts[i] =
            counts.at(hnl::state_class_name(static_cast<hnl::StateClass>(i)))
                .get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      hnl::raise(hnl::Errc::parse_error, e.what());
    }
    return emit(out_csv, hnl::survey_report_to_csv(rep));
  });
}

hnl_status hnl_oracle_search(const hnl_state* s, int n_random, int n_refine,
                             double t_min, uint64_t seed, char** result_json,
                             char* errbuf, size_t errbuf_len) {
  if (!s) return HNL_ERR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    hnl::FilterSearchConfig cfg{n_random, n_refine, t_min, seed};
    return emit(result_json,
                hnl::oracle_result_to_json(hnl::search_filters(s->value, cfg)));
  });
}

hnl_status hnl_certify(const hnl_state* s, int n_random, int n_refine,
                       double t_min, uint64_t seed, double slack,
                       int* certified, char** result_json, char* errbuf,
                       size_t errbuf_len) {
  if (!s || !certified) return HNL_ERR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&]() -> hnl_status {
    hnl::FilterSearchConfig cfg{n_random, n_refine, t_min, seed};
    const hnl::OracleResult res = hnl::search_filters(s->value, cfg);
    const hnl::CorrelationMatrix r = hnl::correlation_matrix(s->value);
    const hnl::HiddenNonlocality h =
        hnl::hidden_nonlocality(hnl::lorentz_spectrum(hnl::c_matrix(r)));
    *certified = hnl::certify_result(h.hidden, res, slack) ? 1 : 0;
    if (result_json)
      return emit(result_json, hnl::oracle_result_to_json(res));
    return HNL_OK;
  });
}

hnl_status hnl_distill(const hnl_state* s, double eps, int max_iter,
                       const double* n_grid, size_t n_grid_len,
                       char** result_json, char* errbuf, size_t errbuf_len) {
  if (!s) return HNL_ERR_INVALID_ARGUMENT;
  if (n_grid_len > 0 && !n_grid) return HNL_ERR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    const hnl::NormalFormResult nf = hnl::normal_form(s->value, eps, max_iter);
    std::vector<hnl::DistillRow> rows;
    if (nf.params.case_tag == hnl::NormalFormCase::rank_deficient_i &&
        std::abs(nf.params.d) > 1e-12 && n_grid_len > 0) {
      rows = hnl::quasi_distill_table(
          s->value, nf, std::vector<double>(n_grid, n_grid + n_grid_len));
    }
    return emit(result_json, hnl::normal_form_to_json(nf, rows));
  });
}

}  // extern "C"
