#include "ewb/problem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "ewb/states.hpp"

namespace ewb {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void allow_keys(const json& obj, const std::string& path, const std::set<std::string>& keys) {
  for (const auto& [k, v] : obj.items())
    if (!keys.contains(k)) throw ProblemError(child(path, k), "unknown field");
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ProblemError(child(path, key), "missing required field");
  return obj.at(key);
}

double as_real(const json& v, const std::string& path) {
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ProblemError(path, "number is not finite");
    return x;
  }
  if (v.is_string()) {
    // Exact fractions such as "2/3" are convenient for witness constants.
    static const std::regex frac(R"(\s*([-+]?[0-9]+)\s*/\s*([0-9]+)\s*)");
    std::smatch m;
    const std::string s = v.get<std::string>();
    if (std::regex_match(s, m, frac)) {
      const double den = std::stod(m[2]);
      if (den == 0) throw ProblemError(path, "zero denominator");
      return std::stod(m[1]) / den;
    }
  }
  throw ProblemError(path, "expected a number");
}

std::uint64_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ProblemError(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

cplx as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {as_real(v, path), 0.0};
  if (v.is_array() && v.size() == 2) return {as_real(v[0], child(path, 0)), as_real(v[1], child(path, 1))};
  if (v.is_string()) {
    try {
      return parse_complex(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ProblemError(path, e.what());
    }
  }
  throw ProblemError(path, "expected a complex number: [re, im], a number, or \"a+bi\"");
}

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

json canonical_amplitudes(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ProblemError(path, "expected a nonempty amplitude list");
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(pair(as_complex(v[i], child(path, i))));
  return out;
}

json canonical_chi(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s != "w" && s != "ghz" && s != "bell") throw ProblemError(path, "unknown state '" + s + "' (expected w, ghz, bell)");
    return s;
  }
  if (v.is_object()) {
    allow_keys(v, path, {"amplitudes"});
    return json{{"amplitudes", canonical_amplitudes(require(v, path, "amplitudes"), child(path, "amplitudes"))}};
  }
  if (v.is_array()) return json{{"amplitudes", canonical_amplitudes(v, path)}};
  throw ProblemError(path, "expected a state name or {\"amplitudes\": [...]}");
}

json canonical_matrix(const json& v, const std::string& path, std::size_t n) {
  if (!v.is_array() || v.size() != n) throw ProblemError(path, "expected " + std::to_string(n) + " rows");
  json out = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto rp = child(path, i);
    if (!v[i].is_array() || v[i].size() != n) throw ProblemError(rp, "expected " + std::to_string(n) + " entries");
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(pair(as_complex(v[i][j], child(rp, j))));
    out.push_back(std::move(row));
  }
  return out;
}

json canonical_dims(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ProblemError(path, "expected a nonempty list of party dimensions");
  json out = json::array();
  std::size_t total = 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto d = as_count(v[i], child(path, i));
    if (d < 2) throw ProblemError(child(path, i), "party dimension must be >= 2");
    total *= d;
    if (total > 64) throw ProblemError(path, "total dimension above 64 is out of scope");
    out.push_back(d);
  }
  return out;
}

json canonical_witness(const json& v, const std::string& path, std::size_t index, std::size_t total) {
  if (!v.is_object()) throw ProblemError(path, "expected an object");
  allow_keys(v, path, {"label", "measured", "stderr", "matrix", "projector"});
  json out;
  if (v.contains("label")) {
    if (!v["label"].is_string()) throw ProblemError(child(path, "label"), "expected a string");
    out["label"] = v["label"];
  } else {
    out["label"] = "W" + std::to_string(index + 1);
  }
  out["measured"] = as_real(require(v, path, "measured"), child(path, "measured"));
  const double se = v.contains("stderr") ? as_real(v["stderr"], child(path, "stderr")) : 0.0;
  if (se < 0) throw ProblemError(child(path, "stderr"), "must be >= 0");
  out["stderr"] = se;
  const bool has_m = v.contains("matrix"), has_p = v.contains("projector");
  if (has_m == has_p) throw ProblemError(path, "give exactly one of \"matrix\" or \"projector\"");
  if (has_m) {
    out["matrix"] = canonical_matrix(v["matrix"], child(path, "matrix"), total);
  } else {
    const auto pp = child(path, "projector");
    const json& p = v["projector"];
    if (!p.is_object()) throw ProblemError(pp, "expected {\"alpha\": ..., \"chi\": ...}");
    allow_keys(p, pp, {"alpha", "chi"});
    out["projector"] = {{"alpha", as_real(require(p, pp, "alpha"), child(pp, "alpha"))},
                        {"chi", canonical_chi(require(p, pp, "chi"), child(pp, "chi"))}};
  }
  return out;
}

json canonical_measure(const json& v, const std::string& path, std::size_t parties) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "geometric") return json{{"geometric", json::object()}};
    if (s == "eof") return canonical_measure(json{{"eof", json::object()}}, path, parties);
    throw ProblemError(path, "unknown measure '" + s + "' (expected eof or geometric)");
  }
  if (!v.is_object() || v.size() != 1) throw ProblemError(path, "expected {\"eof\": {...}} or {\"geometric\": {}}");
  if (v.contains("geometric")) {
    if (!v["geometric"].is_object() || !v["geometric"].empty())
      throw ProblemError(child(path, "geometric"), "expected an empty object");
    return json{{"geometric", json::object()}};
  }
  if (!v.contains("eof")) throw ProblemError(child(path, v.begin().key()), "unknown measure");
  const auto ep = child(path, "eof");
  const json& e = v["eof"];
  if (!e.is_object()) throw ProblemError(ep, "expected an object");
  allow_keys(e, ep, {"bipartition", "base"});
  json bip = json::array({0});
  if (e.contains("bipartition")) {
    const auto bp = child(ep, "bipartition");
    if (!e["bipartition"].is_array()) throw ProblemError(bp, "expected a list of party indices");
    std::set<std::uint64_t> parts;
    for (std::size_t i = 0; i < e["bipartition"].size(); ++i) {
      const auto k = as_count(e["bipartition"][i], child(bp, i));
      if (k >= parties) throw ProblemError(child(bp, i), "party index out of range");
      parts.insert(k);
    }
    if (parts.empty() || parts.size() >= parties) throw ProblemError(bp, "must be a nonempty proper subset of the parties");
    bip = json(std::vector<std::uint64_t>(parts.begin(), parts.end()));
  }
  std::string base = "natural";
  if (e.contains("base")) {
    const auto bp = child(ep, "base");
    try {
      if (e["base"].is_number()) base = e["base"].get<double>() == 2 ? "two" : "?";
      else if (e["base"].is_string()) base = to_string(parse_log_base(e["base"].get<std::string>()));
      else base = "?";
    } catch (const std::invalid_argument& err) {
      throw ProblemError(bp, err.what());
    }
    if (base == "?") throw ProblemError(bp, "expected \"natural\" or \"two\"");
  }
  return json{{"eof", {{"base", base}, {"bipartition", bip}}}};
}

json canonical_solver(const json& v, const std::string& path) {
  const SolverOptions d;
  json out = {{"restarts", d.restarts}, {"tol", d.tol}, {"max_iters", d.max_iters}, {"log_floor", d.log_floor},
              {"product_restarts", d.product.restarts}, {"product_tol", d.product.tol},
              {"product_max_cycles", d.product.max_cycles}};
  if (v.is_null()) return out;
  if (!v.is_object()) throw ProblemError(path, "expected an object");
  allow_keys(v, path, {"restarts", "tol", "max_iters", "log_floor", "product_restarts", "product_tol", "product_max_cycles"});
  for (const auto& key : {"restarts", "max_iters", "product_restarts", "product_max_cycles"})
    if (v.contains(key)) out[key] = as_count(v[key], child(path, key));
  for (const auto& key : {"tol", "log_floor", "product_tol"})
    if (v.contains(key)) {
      const double x = as_real(v[key], child(path, key));
      if (!(x > 0)) throw ProblemError(child(path, key), "must be > 0");
      out[key] = x;
    }
  if (out["restarts"].get<std::uint64_t>() < 1) throw ProblemError(child(path, "restarts"), "must be >= 1");
  if (out["max_iters"].get<std::uint64_t>() < 1) throw ProblemError(child(path, "max_iters"), "must be >= 1");
  return out;
}

json canonical_search(const json& v, const std::string& path) {
  const SearchOptions d;
  json out = {{"grid", d.grid}, {"width", d.width}, {"nd_gain", d.nd_gain}, {"max_passes", d.max_passes},
              {"local_grid", d.local_grid}, {"box", d.box}, {"max_widenings", d.max_widenings},
              {"extend_rays", d.extend_rays}, {"ray_gain", d.ray_gain}, {"ray_limit", d.ray_limit},
              {"quantum", d.quantum}};
  if (v.is_null()) return out;
  if (!v.is_object()) throw ProblemError(path, "expected an object");
  std::set<std::string> keys;
  for (const auto& [k, x] : out.items()) keys.insert(k);
  allow_keys(v, path, keys);
  for (const auto& key : {"grid", "max_passes", "local_grid", "max_widenings"})
    if (v.contains(key)) out[key] = as_count(v[key], child(path, key));
  for (const auto& key : {"width", "nd_gain", "box", "ray_gain", "ray_limit", "quantum"})
    if (v.contains(key)) {
      const double x = as_real(v[key], child(path, key));
      if (!(x > 0)) throw ProblemError(child(path, key), "must be > 0");
      out[key] = x;
    }
  if (v.contains("extend_rays")) {
    if (!v["extend_rays"].is_boolean()) throw ProblemError(child(path, "extend_rays"), "expected true or false");
    out["extend_rays"] = v["extend_rays"];
  }
  for (const auto& key : {"grid", "local_grid"})
    if (out[key].get<std::uint64_t>() < 3) throw ProblemError(child(path, key), "must be >= 3");
  return out;
}

void format_number(std::ostringstream& os, const json& j) {
  if (j.is_number_integer()) {
    os << j.dump();
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
  std::string s = buf;
  // Keep floats recognizable as floats so integers and reals never alias.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  os << s;
}

void dump_rec(std::ostringstream& os, const json& j, int indent, int depth) {
  const auto nl = [&](int d) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // nlohmann::json keeps keys sorted
        if (!first) os << ',';
        first = false;
        nl(depth + 1);
        os << json(k).dump() << (indent > 0 ? ": " : ":");
        dump_rec(os, v, indent, depth + 1);
      }
      nl(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Short arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << (flat && indent > 0 ? ", " : ",");
        if (!flat) nl(depth + 1);
        dump_rec(os, j[i], indent, depth + 1);
      }
      if (!flat) nl(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float:
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      format_number(os, j);
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  static const std::regex re(R"(^([-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?)?(?:([-+])((?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?)?([ij]))?$)");
  static const std::regex imag_only(R"(^([-+]?)((?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?)?[ij]$)");
  std::smatch m;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (std::regex_match(s, m, imag_only)) {
    const double mag = m[2].matched ? std::stod(m[2]) : 1.0;
    return {0.0, m[1] == "-" ? -mag : mag};
  }
  if (std::regex_match(s, m, re) && (m[1].matched || m[4].matched)) {
    const double re_part = m[1].matched ? std::stod(m[1]) : 0.0;
    double im_part = 0.0;
    if (m[4].matched) {
      im_part = m[3].matched ? std::stod(m[3]) : 1.0;
      if (m[2] == "-") im_part = -im_part;
    }
    return {re_part, im_part};
  }
  throw std::invalid_argument("cannot read complex number '" + text + "'");
}

PureState named_state(const json& spec, const SubsystemDims& dims, const std::string& where) {
  if (spec.is_string()) {
    const auto s = spec.get<std::string>();
    const bool qubits = std::all_of(dims.list().begin(), dims.list().end(), [](std::size_t d) { return d == 2; });
    if (s == "bell") {
      if (dims != SubsystemDims{2, 2}) throw ProblemError(where, "bell needs dims [2, 2]");
      return states::bell();
    }
    if (!qubits || dims.parties() < 2) throw ProblemError(where, s + " needs two or more qubits");
    return s == "w" ? states::w(dims.parties()) : states::ghz(dims.parties());
  }
  const json& amps = spec.at("amplitudes");
  if (amps.size() != dims.total())
    throw ProblemError(child(where, "amplitudes"), "expected " + std::to_string(dims.total()) + " amplitudes");
  std::vector<cplx> v;
  for (std::size_t i = 0; i < amps.size(); ++i) v.push_back(as_complex(amps[i], child(child(where, "amplitudes"), i)));
  if (norm(v) == 0) throw ProblemError(child(where, "amplitudes"), "zero vector");
  return PureState::normalized(dims, std::move(v));
}

json canonicalize_problem(const json& doc) {
  if (!doc.is_object()) throw ProblemError("", "expected a JSON object");
  allow_keys(doc, "", {"description", "dims", "witnesses", "measure", "solver", "search", "seed"});
  json out;
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) throw ProblemError("/description", "expected a string");
    out["description"] = doc["description"];
  }
  out["dims"] = canonical_dims(require(doc, "", "dims"), "/dims");
  std::size_t total = 1;
  for (const auto& d : out["dims"]) total *= d.get<std::size_t>();
  const json& ws = require(doc, "", "witnesses");
  if (!ws.is_array() || ws.empty()) throw ProblemError("/witnesses", "expected a nonempty list");
  if (ws.size() > 4) throw ProblemError("/witnesses", "at most 4 witnesses are supported");
  out["witnesses"] = json::array();
  std::set<std::string> labels;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    out["witnesses"].push_back(canonical_witness(ws[i], child("/witnesses", i), i, total));
    if (!labels.insert(out["witnesses"].back()["label"].get<std::string>()).second)
      throw ProblemError(child(child("/witnesses", i), "label"), "duplicate label");
  }
  out["measure"] = canonical_measure(doc.value("measure", json("geometric")), "/measure", out["dims"].size());
  out["solver"] = canonical_solver(doc.value("solver", json()), "/solver");
  out["search"] = canonical_search(doc.value("search", json()), "/search");
  out["seed"] = doc.contains("seed") ? as_count(doc["seed"], "/seed") : 0;
  return out;
}

Problem build_problem(const json& c) {
  Problem p;
  std::vector<std::size_t> d;
  for (const auto& x : c["dims"]) d.push_back(x.get<std::size_t>());
  p.dims = SubsystemDims(d);
  const std::size_t n = p.dims.total();
  for (std::size_t i = 0; i < c["witnesses"].size(); ++i) {
    const json& w = c["witnesses"][i];
    const auto path = child("/witnesses", i);
    WitnessRecord rec;
    rec.label = w["label"].get<std::string>();
    rec.measured = w["measured"].get<double>();
    rec.std_error = w["stderr"].get<double>();
    if (w.contains("matrix")) {
      std::vector<cplx> entries;
      for (const auto& row : w["matrix"])
        for (const auto& z : row) entries.emplace_back(z[0].get<double>(), z[1].get<double>());
      try {
        rec.op = HermitianOperator(ComplexMatrix(n, n, std::move(entries)));
      } catch (const DimensionError& e) {
        throw ProblemError(child(path, "matrix"), e.what());
      }
    } else {
      const json& pj = w["projector"];
      ProjectorWitness pw{pj["alpha"].get<double>(), named_state(pj["chi"], p.dims, child(child(path, "projector"), "chi")), {}};
      rec = projector_record(pw, rec.measured, rec.std_error, rec.label);
    }
    p.witnesses.push_back(std::move(rec));
  }
  p.seed = c["seed"].get<std::uint64_t>();
  const json& s = c["solver"];
  p.measure.solver.restarts = s["restarts"].get<std::size_t>();
  p.measure.solver.tol = s["tol"].get<double>();
  p.measure.solver.max_iters = s["max_iters"].get<std::size_t>();
  p.measure.solver.log_floor = s["log_floor"].get<double>();
  p.measure.solver.product.restarts = s["product_restarts"].get<std::size_t>();
  p.measure.solver.product.tol = s["product_tol"].get<double>();
  p.measure.solver.product.max_cycles = s["product_max_cycles"].get<std::size_t>();
  if (c["measure"].contains("eof")) {
    const json& e = c["measure"]["eof"];
    EofSpec spec;
    spec.bipartition.left = e["bipartition"].get<PartySet>();
    spec.base = parse_log_base(e["base"].get<std::string>());
    p.measure.kind = spec;
  } else {
    p.measure.kind = GeometricSpec{};
  }
  const json& q = c["search"];
  p.search.grid = q["grid"].get<std::size_t>();
  p.search.width = q["width"].get<double>();
  p.search.nd_gain = q["nd_gain"].get<double>();
  p.search.max_passes = q["max_passes"].get<std::size_t>();
  p.search.local_grid = q["local_grid"].get<std::size_t>();
  p.search.box = q["box"].get<double>();
  p.search.max_widenings = q["max_widenings"].get<std::size_t>();
  p.search.extend_rays = q["extend_rays"].get<bool>();
  p.search.ray_gain = q["ray_gain"].get<double>();
  p.search.ray_limit = q["ray_limit"].get<double>();
  p.search.quantum = q["quantum"].get<double>();
  p.canonical = c;
  reseed(p, p.seed);
  return p;
}

void reseed(Problem& p, std::uint64_t seed) {
  p.seed = seed;
  p.canonical["seed"] = seed;
  p.measure.solver.seed = seed;
  p.measure.solver.product.seed = seed;
}

Problem parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ProblemError("line " + std::to_string(line) + ", column " + std::to_string(col), "JSON syntax error");
  }
  return build_problem(canonicalize_problem(doc));
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string canonical_dump(const json& j, int indent) {
  std::ostringstream os;
  dump_rec(os, j, indent, 0);
  return os.str();
}

}  // namespace ewb
