#pragma once

#include "knde/evaluation.hpp"
#include "knde/experiments.hpp"

#include <string>

namespace knde {

//! Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
double parse_double(const std::string& s);

//! Fixed CSV column order shared by every report:
//!   dist,d,estimator,n,k,h,a,trials,l1,linf,seed
//! Unused parameter columns are left empty.
extern const char* const kCsvHeader;

std::string to_csv(const ErrorReport& report);
std::string to_csv(const ConvergenceReport& report);  // one row per n
std::string to_csv(const RatioReport& report);        // one row per (n, method)

//! Rebuilds a convergence report from its own CSV (slopes refitted, theory
//! exponents recomputed); serializing the result reproduces the input bytes.
ConvergenceReport convergence_report_from_csv(const std::string& csv);
RatioReport ratio_report_from_csv(const std::string& csv);

std::string summary_json(const ConvergenceReport& report);
std::string summary_json(const RatioReport& report);
std::string summary_json(const ErrorReport& report);

}  // namespace knde
