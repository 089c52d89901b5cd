#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "ewb/commands.hpp"

using namespace ewb;
using nlohmann::json;

namespace {

std::string corpus(const std::string& name) { return std::string(EWB_CORPUS_DIR) + "/" + name; }

struct Run {
  int code;
  std::string out, err;
};

Run bound(const std::string& file, BoundFlags flags = {}) {
  std::ostringstream out, err;
  const int code = cmd_bound(file, flags, out, err);
  return {code, out.str(), err.str()};
}

// Exit status of the installed binary.
int shell(const std::string& args) {
  const std::string cmd = std::string(EWB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

BoundFlags quiet_json() {
  BoundFlags f;
  f.json = true;
  f.audit_samples = 2000;
  return f;
}

}  // namespace

TEST_CASE("exit codes of the bound command") {
  CHECK(bound(corpus("separable.json")).code == exit_code::ok);
  CHECK(bound(corpus("w1_geometric.json")).code == exit_code::ok);

  const auto dims = bound(corpus("malformed_dims.json"));
  CHECK(dims.code == exit_code::parse_error);
  CHECK(dims.err.find("/dims/1") != std::string::npos);
  CHECK(dims.out.empty());

  const auto syntax = bound(corpus("syntax_error.json"));
  CHECK(syntax.code == exit_code::parse_error);
  CHECK(syntax.err.find("line 4, column 30") != std::string::npos);

  const auto inf = bound(corpus("infeasible.json"));
  CHECK(inf.code == exit_code::parse_error);
  CHECK(inf.err.find("outside the spectrum") != std::string::npos);

  CHECK(bound(corpus("does_not_exist.json")).code == exit_code::parse_error);

  const auto starved = bound(corpus("starved_solver.json"));
  CHECK(starved.code == exit_code::unsound);
  CHECK(starved.out.find("status:       unsound") != std::string::npos);
}

TEST_CASE("an unsound certificate is audited even with --no-audit") {
  BoundFlags f;
  f.audit = false;
  const auto r = bound(corpus("starved_solver.json"), f);
  CHECK(r.code == exit_code::unsound);
  CHECK(r.out.find("FAILED") != std::string::npos);
  f.audit = true;
  f.json = true;
  const auto j = json::parse(bound(corpus("starved_solver.json"), f).out);
  CHECK(j["status"] == "unsound");
  CHECK(j["result"]["certificate_valid"] == false);
  CHECK(j["audit"]["passed"] == false);
}

TEST_CASE("bound reports") {
  const auto text = bound(corpus("w1_geometric.json"));
  CHECK(text.out.find("0.1994 ± 0.021") != std::string::npos);
  CHECK(text.out.find("status:       ok") != std::string::npos);

  const auto sep = json::parse(bound(corpus("separable.json"), quiet_json()).out);
  CHECK(sep["result"]["epsilon"] == 0.0);
  CHECK(sep["result"]["r_star"][0] == 0.0);
  CHECK(sep["status"] == "ok");

  BoundFlags none = quiet_json();
  none.audit = false;
  const auto j = json::parse(bound(corpus("w1_geometric.json"), none).out);
  CHECK(j["audit"].is_null());
  CHECK(j["result"]["analytic"] == true);
  CHECK(j["result"]["epsilon"].get<double>() == doctest::Approx(0.19939).epsilon(1e-4));
}

TEST_CASE("json reports are byte-identical for a fixed seed") {
  BoundFlags f = quiet_json();
  f.seed = 5;
  const auto a = bound(corpus("starved_solver.json"), f).out;
  const auto b = bound(corpus("starved_solver.json"), f).out;
  CHECK(a == b);
  f.threads = 1;
  CHECK(bound(corpus("starved_solver.json"), f).out == a);
  f.seed = 6;
  const auto c = bound(corpus("starved_solver.json"), f).out;
  CHECK(json::parse(c)["seed"] == 6);
}

TEST_CASE("dump-canonical round trips") {
  BoundFlags f;
  f.dump_canonical = true;
  const auto first = bound(std::string(EWB_DATA_DIR) + "/problems/w1_eof.json", f);
  REQUIRE(first.code == exit_code::ok);
  const std::string path = "ewb_test_canonical.json";
  std::ofstream(path) << first.out;
  const auto second = bound(path, f);
  CHECK(second.out == first.out);
  std::remove(path.c_str());
}

TEST_CASE("legendre command") {
  auto run = [](const std::string& file, std::vector<double> r, bool as_json = true) {
    std::ostringstream out, err;
    const int code = cmd_legendre(corpus(file), r, as_json, out, err);
    return std::pair{code, out.str()};
  };
  auto [c1, o1] = run("w1_geometric.json", {1.0});
  REQUIRE(c1 == exit_code::ok);
  CHECK(json::parse(o1)["value"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  auto [c2, o2] = run("w1_geometric.json", {-1.0});
  CHECK(c2 == exit_code::ok);
  CHECK(std::abs(json::parse(o2)["value"].get<double>()) < 1e-9);

  auto [c3, o3] = run("zero.json", {0.7});
  CHECK(c3 == exit_code::ok);
  CHECK(std::abs(json::parse(o3)["value"].get<double>()) < 1e-12);

  auto [c4, o4] = run("w1_geometric.json", {1.0, 2.0});
  CHECK(c4 == exit_code::parse_error);
  CHECK(run("malformed_dims.json", {1.0}).first == exit_code::parse_error);

  auto [c5, o5] = run("w1_geometric.json", {1.0}, false);
  CHECK(o5.find("closed form") != std::string::npos);
}

TEST_CASE("verify command") {
  VerifyFlags v;
  v.suite = "grids";
  std::ostringstream out, err;
  CHECK(cmd_verify(v, out, err) == exit_code::ok);
  CHECK(out.str().find("0.55559092") != std::string::npos);

  v.suite = "audits";
  v.audit_samples = 2000;
  v.negative_control = true;
  std::ostringstream o2, e2;
  CHECK(cmd_verify(v, o2, e2) == exit_code::verify_failed);

  v.suite = "nonsense";
  std::ostringstream o3, e3;
  CHECK(cmd_verify(v, o3, e3) == exit_code::parse_error);
}

TEST_CASE("the binary honours the exit-code contract") {
  CHECK(shell("bound " + corpus("separable.json") + " --no-audit") == 0);
  CHECK(shell("bound " + corpus("malformed_dims.json")) == 2);
  CHECK(shell("bound " + corpus("starved_solver.json") + " --audit-samples 100000") == 3);
  CHECK(shell("frobnicate") == 2);
  CHECK(shell("bound") == 2);
  CHECK(shell("legendre " + corpus("zero.json") + " --r x") == 2);
  CHECK(shell("--help") == 0);
  CHECK(shell("verify --suite projector") == 0);
}
