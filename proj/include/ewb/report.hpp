#pragma once

// Text and JSON renderings of bound results and audits.

#include <optional>
#include <string>

#include <json.hpp>

#include "ewb/oracle.hpp"
#include "ewb/problem.hpp"

namespace ewb {

/// x with `sig` significant figures, no exponent for |x| in [1e-4, 1e6).
std::string format_sig(double x, int sig);
/// "0.1994 ± 0.021"
std::string format_bound(double value, double uncertainty);

std::string describe_state(const PureState& psi, int digits = 4);

nlohmann::json audit_json(const oracle::AuditReport& a);
nlohmann::json bound_json(const BoundResult& b);

/// Full report for `bound`: problem summary, result, audit (when run) and status.
nlohmann::json bound_report_json(const Problem& p, const BoundResult& b, const std::optional<oracle::AuditReport>& audit);
std::string bound_report_text(const Problem& p, const BoundResult& b, const std::optional<oracle::AuditReport>& audit);

}  // namespace ewb
