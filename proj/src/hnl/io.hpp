/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_IO_HPP
#define HNL_IO_HPP

#include "hnl/correlation.hpp"
#include "hnl/filtering.hpp"
#include "hnl/oracle.hpp"
#include "hnl/state.hpp"
#include "hnl/survey.hpp"

#include <string>
#include <vector>

namespace hnl {

/// State file format: {"rho": [[[re, im] x4] x4]} row-major in the
/// |00>,|01>,|10>,|11> basis. The writer emits 17 significant digits so a
/// round trip is exact.
std::string state_to_json(const TwoQubitState& s);

/// Parses and validates. Structural problems raise ParseError; physicality
/// problems raise the matching NotHermitian / NotUnitTrace / NotPositive.
TwoQubitState state_from_json(const std::string& text,
                              double tol = kDefaultStateTol);

std::string report_to_json(const CriterionReport& rep);

std::string survey_report_to_json(const SurveyReport& rep);

/// One row per class: label, count, fraction, ci_low, ci_high.
std::string survey_report_to_csv(const SurveyReport& rep);

std::string oracle_result_to_json(const OracleResult& res);

std::string normal_form_to_json(const NormalFormResult& nf,
                                const std::vector<DistillRow>& rows);

}  // namespace hnl

#endif
