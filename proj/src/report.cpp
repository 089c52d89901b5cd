#include "ewb/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ewb {

using nlohmann::json;

std::string format_sig(double x, int sig) {
  if (x == 0.0) return "0";
  char buf[64];
  const double ax = std::abs(x);
  if (ax >= 1e-4 && ax < 1e6) {
    const int exp10 = static_cast<int>(std::floor(std::log10(ax)));
    const int decimals = std::max(0, sig - 1 - exp10);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  } else {
    std::snprintf(buf, sizeof buf, "%.*e", sig - 1, x);
  }
  return buf;
}

std::string format_bound(double value, double uncertainty) {
  return format_sig(value, 4) + " ± " + format_sig(uncertainty, 2);
}

std::string describe_state(const PureState& psi, int digits) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const cplx z = psi[i];
    os << (i ? ", " : "") << format_sig(z.real(), digits);
    if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << format_sig(std::abs(z.imag()), digits) << "i";
  }
  os << "]";
  return os.str();
}

json audit_json(const oracle::AuditReport& a) {
  return {{"target", a.target},
          {"samples", a.samples},
          {"claimed", a.claimed},
          {"sampled_max", a.sampled_max},
          {"max_violation", a.max_violation},
          {"gap", a.gap},
          {"tolerance", a.tolerance},
          {"worst_case", a.worst_description},
          {"passed", a.passed}};
}

json bound_json(const BoundResult& b) {
  std::size_t nonconverged = 0, max_iters = 0;
  for (const auto& s : b.inner_results) {
    nonconverged += s.converged ? 0 : 1;
    max_iters = std::max(max_iters, s.iterations);
  }
  return {{"epsilon", b.epsilon},
          {"r_star", b.r_star},
          {"c_star", b.c_star},
          {"uncertainty", b.uncertainty},
          {"certificate_valid", b.certificate_valid},
          {"analytic", b.analytic},
          {"at_boundary", b.at_boundary},
          {"ray_extended", b.ray_extended},
          {"box", b.box},
          {"evaluations", b.evaluations},
          {"inner", {{"solves", b.inner_results.size()}, {"nonconverged", nonconverged}, {"max_iterations", max_iters}}}};
}

namespace {

std::string status_of(const BoundResult& b, const std::optional<oracle::AuditReport>& audit) {
  if (audit && !audit->passed) return "unsound";
  if (!b.certificate_valid) return audit ? "tainted, audit passed" : "tainted, not audited";
  return "ok";
}

}  // namespace

json bound_report_json(const Problem& p, const BoundResult& b, const std::optional<oracle::AuditReport>& audit) {
  json ws = json::array();
  for (const auto& w : p.witnesses) ws.push_back({{"label", w.label}, {"measured", w.measured}, {"stderr", w.std_error}});
  json out = {{"measure", describe(p.measure)},
              {"seed", p.seed},
              {"witnesses", ws},
              {"result", bound_json(b)},
              {"audit", audit ? audit_json(*audit) : json(nullptr)},
              {"status", status_of(b, audit)}};
  return out;
}

std::string bound_report_text(const Problem& p, const BoundResult& b, const std::optional<oracle::AuditReport>& audit) {
  std::ostringstream os;
  os << "measure:      " << describe(p.measure) << "\n";
  os << "witnesses:    ";
  for (std::size_t k = 0; k < p.witnesses.size(); ++k)
    os << (k ? ", " : "") << p.witnesses[k].label << " = " << format_bound(p.witnesses[k].measured, p.witnesses[k].std_error);
  os << "\n";
  os << "bound:        E >= " << format_bound(b.epsilon, b.uncertainty) << "\n";
  os << "certificate:  E(rho) >= ";
  for (std::size_t k = 0; k < b.r_star.size(); ++k)
    os << (k ? " + " : "") << "(" << format_sig(b.r_star[k], 6) << ") <" << p.witnesses[k].label << ">";
  os << " - " << format_sig(b.c_star, 6) << "\n";
  std::size_t nonconverged = 0;
  for (const auto& s : b.inner_results) nonconverged += s.converged ? 0 : 1;
  os << "inner solves: " << b.inner_results.size() << (b.analytic ? " (closed form)" : "") << ", " << nonconverged
     << " not converged\n";
  if (b.at_boundary) {
    os << "search:       optimum on the box edge (box " << format_sig(b.box, 3) << ")";
    if (b.ray_extended) os << ", followed outward";
    os << "\n";
  }
  if (audit) {
    os << "audit:        " << (audit->passed ? "passed" : "FAILED") << ", " << audit->samples
       << " samples, sampled max " << format_sig(audit->sampled_max, 6) << " vs claimed " << format_sig(audit->claimed, 6)
       << " (gap " << format_sig(audit->gap, 3) << ")\n";
    if (!audit->passed) os << "              worst case " << audit->worst_description << "\n";
  } else {
    os << "audit:        skipped\n";
  }
  os << "status:       " << status_of(b, audit) << "\n";
  return os.str();
}

}  // namespace ewb
