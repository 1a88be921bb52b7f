/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#include "hnl/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace hnl {

namespace {

using json = nlohmann::ordered_json;

std::string sig17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json ci_json(const FractionCI& f) {
  return json{{"value", f.value}, {"ci_low", f.ci_low}, {"ci_high", f.ci_high}};
}

json mat2_json(const Mat2& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int j = 0; j < 2; ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string state_to_json(const TwoQubitState& s) {
  std::ostringstream os;
  os << "{\"rho\": [";
  for (int i = 0; i < 4; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < 4; ++j) {
      const Cplx v = s.rho(i, j);
      os << (j ? ", [" : "[") << sig17(v.real()) << ", " << sig17(v.imag())
         << "]";
    }
    os << "]";
  }
  os << "]}\n";
  return os.str();
}

TwoQubitState state_from_json(const std::string& text, double tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::parse_error, e.what());
  }
  if (!doc.is_object() || !doc.contains("rho"))
    raise(Errc::parse_error, "expected an object with a \"rho\" key");
  const json& rho = doc["rho"];
  if (!rho.is_array() || rho.size() != 4)
    raise(Errc::parse_error, "\"rho\" must be a 4x4 array");
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    const json& row = rho[i];
    if (!row.is_array() || row.size() != 4)
      raise(Errc::parse_error, "\"rho\" must be a 4x4 array");
    for (int j = 0; j < 4; ++j) {
      const json& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        raise(Errc::parse_error, "entries must be [re, im] number pairs");
      m(i, j) = Cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return validate_state(m, tol);
}

std::string report_to_json(const CriterionReport& rep) {
  json doc;
  doc["spectrum"] = {
      {"lambda", rep.spectrum.lambda},
      {"max_imag_residual", rep.spectrum.max_imag_residual},
      {"clamp_applied", rep.spectrum.clamp_applied},
  };
  doc["hidden_nonlocal"] = rep.hidden_nonlocal;
  doc["max_filtered_chsh"] = rep.max_filtered_chsh;
  doc["horodecki_M"] = rep.horodecki_M;
  doc["chsh_unfiltered"] = rep.chsh_unfiltered;
  doc["separable"] = rep.separable;
  return doc.dump();
}

std::string survey_report_to_json(const SurveyReport& rep) {
  json doc;
  doc["n"] = rep.n;
  doc["measure_tag"] = rep.measure_tag;
  doc["seed"] = rep.seed;
  doc["frac_not_hidden_nonlocal"] = ci_json(rep.frac_not_hidden_nonlocal);
  doc["frac_separable"] = ci_json(rep.frac_separable);
  doc["frac_no_unfiltered_chsh"] = ci_json(rep.frac_no_unfiltered_chsh);
  doc["consistency_violations"] = rep.consistency_violations;
  json counts;
  for (int i = 0; i < 4; ++i)
    counts[state_class_name(static_cast<StateClass>(i))] = rep.class_counts[i];
  doc["class_counts"] = counts;
  return doc.dump();
}

std::string survey_report_to_csv(const SurveyReport& rep) {
  std::ostringstream os;
  os << "label,count,fraction,ci_low,ci_high\n";
  for (int i = 0; i < 4; ++i) {
    const FractionCI ci = wilson_interval(rep.class_counts[i], rep.n);
    os << state_class_name(static_cast<StateClass>(i)) << ','
       << rep.class_counts[i] << ',' << sig17(ci.value) << ','
       << sig17(ci.ci_low) << ',' << sig17(ci.ci_high) << '\n';
  }
  return os.str();
}

std::string oracle_result_to_json(const OracleResult& res) {
  json doc;
  doc["best_chsh"] = res.best_chsh;
  doc["closed_form_bound"] = res.closed_form_bound;
  doc["gap"] = res.gap;
  doc["success_prob_at_best"] = res.success_prob_at_best;
  doc["best_filter"] = {{"a", mat2_json(res.best_filter.a)},
                        {"b", mat2_json(res.best_filter.b)}};
  return doc.dump();
}

std::string normal_form_to_json(const NormalFormResult& nf,
                                const std::vector<DistillRow>& rows) {
  json doc;
  doc["case"] = normal_form_case_name(nf.params.case_tag);
  doc["params"] = {{"a", nf.params.a},
                   {"b", nf.params.b},
                   {"c", nf.params.c},
                   {"d", nf.params.d}};
  doc["diag"] = nf.params.diag;
  doc["fit_residual"] = nf.params.fit_residual;
  doc["iterations"] = nf.params.iterations;
  doc["filter"] = {{"a", mat2_json(nf.filter.a)}, {"b", mat2_json(nf.filter.b)}};
  json table = json::array();
  for (const DistillRow& r : rows)
    table.push_back(json{
        {"n", r.n}, {"success_prob", r.success_prob}, {"chsh", r.chsh}});
  doc["trade_off"] = table;
  return doc.dump();
}

}  // namespace hnl
