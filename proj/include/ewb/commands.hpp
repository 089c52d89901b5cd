#pragma once

// The `ewb` subcommands, callable in-process. Each returns the exit code.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ewb/oracle.hpp"
#include "ewb/problem.hpp"

namespace ewb {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse_error = 2;
inline constexpr int unsound = 3;
inline constexpr int verify_failed = 4;
}  // namespace exit_code

// ---------------------------------------------------------------------------
// Built-in experiment dataset (data/experiment.json)

struct ReportedBound {
  std::string measure;  // "geometric" or "eof"
  std::vector<std::string> witnesses;
  double bound = 0;
  double uncertainty = 0;
};

struct Experiment {
  nlohmann::json doc;
  std::vector<ReportedBound> reported;
  double tol_geometric = 0;
  double tol_eof = 0;

  /// Problem with the named witnesses and the given measure JSON
  /// ({"geometric": {}} or {"eof": {...}}).
  Problem problem(const std::vector<std::string>& labels, const nlohmann::json& measure) const;
  nlohmann::json eof_measure(LogBase base) const;
  ProjectorWitness projector(const std::string& label) const;
};

const Experiment& experiment();

struct PaperRow {
  ReportedBound reported;
  double tolerance = 0;
  BoundResult result;                   // in the matched base (or natural when none matches)
  std::optional<LogBase> base;          // E_F rows: base that matched; geometric rows: none
  std::vector<std::pair<LogBase, BoundResult>> tried;  // E_F rows: every base computed, in order
  bool matched = false;                 // central value within tolerance
  std::optional<oracle::AuditReport> audit;
  double uncertainty_ratio = 0;         // computed / reported
};

struct PaperOptions {
  bool audit = true;
  std::size_t audit_samples = 0;  // 0: oracle::default_samples
  std::uint64_t seed = 0;
};

/// Geometric rows first, then E_F rows. E_F tries natural log, then base two.
std::vector<PaperRow> paper_table(const PaperOptions& opts = {});

// ---------------------------------------------------------------------------
// Subcommands

struct BoundFlags {
  bool json = false;
  std::optional<std::uint64_t> seed;
  bool audit = true;
  int threads = 0;
  bool dump_canonical = false;
  std::size_t audit_samples = 0;  // 0: oracle::default_samples
};

int cmd_bound(const std::string& path, const BoundFlags& flags, std::ostream& out, std::ostream& err);

int cmd_paper(bool json, std::ostream& out, std::ostream& err, const PaperOptions& opts = {});

int cmd_legendre(const std::string& path, const std::vector<double>& r, bool json, std::ostream& out, std::ostream& err);

struct VerifyFlags {
  std::string suite = "all";  // all, audits, grids, projector
  bool negative_control = false;
  bool json = false;
  std::size_t audit_samples = 0;
};

int cmd_verify(const VerifyFlags& flags, std::ostream& out, std::ostream& err);

}  // namespace ewb
