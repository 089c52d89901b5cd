// ewb: lower bounds on entanglement from witness expectation values.

#include <iostream>

#include <CLI11.hpp>

#include "ewb/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on entanglement measures from measured witness expectation values."};
  app.require_subcommand(1);

  std::string path;
  ewb::BoundFlags bf;
  std::uint64_t seed = 0;
  auto* bound = app.add_subcommand("bound", "Best lower bound consistent with a problem file");
  bound->add_option("file", path, "Problem file (JSON)")->required();
  bound->add_flag("--json", bf.json, "Machine-readable report");
  auto* seed_opt = bound->add_option("--seed", seed, "Seed for every random start and audit sample");
  bound->add_flag("--no-audit", "Skip the sampling audit of the certificate (tainted results are audited anyway)");
  bound->add_option("--threads", bf.threads, "OpenMP threads (results do not depend on it)");
  bound->add_option("--audit-samples", bf.audit_samples, "Haar samples for the audit (default 1e5, 1e4 above dimension 8)");
  bound->add_flag("--dump-canonical", bf.dump_canonical, "Print the validated problem in canonical form and exit");

  bool paper_json = false;
  ewb::PaperOptions po;
  auto* paper = app.add_subcommand("paper", "Recompute the bounds of the W-state experiment and compare");
  paper->add_flag("--json", paper_json, "Machine-readable report");
  paper->add_option("--seed", po.seed, "Seed");
  paper->add_flag("--no-audit", "Skip the sampling audits");

  std::string lpath;
  std::vector<double> rs;
  bool leg_json = false;
  auto* legendre = app.add_subcommand("legendre", "Transform value and affine certificate at given coefficients");
  legendre->add_option("file", lpath, "Problem file (JSON)")->required();
  legendre->add_option("--r", rs, "One coefficient per witness")->required()->allow_extra_args(false)->delimiter(',');
  legendre->add_flag("--json", leg_json, "Machine-readable report");

  ewb::VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Run the brute-force oracle suites");
  verify->add_option("--suite", vf.suite, "all, audits, grids or projector");
  verify->add_flag("--negative-control", vf.negative_control, "Lower every claimed value by 0.1; the audits must then fail");
  verify->add_flag("--json", vf.json, "Machine-readable report");
  verify->add_option("--audit-samples", vf.audit_samples, "Haar samples per audit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ewb::exit_code::parse_error;
  }

  if (*bound) {
    if (*seed_opt) bf.seed = seed;
    bf.audit = bound->count("--no-audit") == 0;
    return ewb::cmd_bound(path, bf, std::cout, std::cerr);
  }
  if (*paper) {
    po.audit = paper->count("--no-audit") == 0;
    return ewb::cmd_paper(paper_json, std::cout, std::cerr, po);
  }
  if (*legendre) return ewb::cmd_legendre(lpath, rs, leg_json, std::cout, std::cerr);
  return ewb::cmd_verify(vf, std::cout, std::cerr);
}
