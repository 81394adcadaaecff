#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sizeclust/model.hpp"

namespace sizeclust {

// Survey CSV layout:
//
//   respondent,Q1,Q2,Q3
//   levels,3,3,4          <- optional; otherwise V_q = max(2, largest code seen)
//   R1,1,2,4
//   R2,3,1,1
//
// The first column always holds respondent ids and the header names the
// questions. Blank lines and lines starting with '#' are skipped. Errors are
// reported as DataError with 1-based file line and column.
SurveyData read_survey_csv(std::istream& in);
SurveyData read_survey_csv(const std::filesystem::path& path);

void write_survey_csv(std::ostream& out, const SurveyData& data);
void write_survey_csv(const std::filesystem::path& path, const SurveyData& data);

// Six significant digits, the format of every human-facing number.
std::string format_number(double v);

}  // namespace sizeclust
