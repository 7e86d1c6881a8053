#pragma once

// Experiment configs: YAML documents with a required `version` field.
// Every validation error names the file, line, column and dotted field path.

#include "tensoropt/core/errors.hpp"
#include "tensoropt/optimizer/run.hpp"
#include "tensoropt/oracles/problem.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tensoropt::bench {

inline constexpr int kConfigVersion = 1;

struct ProblemSpec {
  std::string type = "logistic";  // logistic | quadratic
  Eigen::Index n = 20;
  Eigen::Index m = 500;           // logistic only
  double mu = 1e-3;               // logistic only
  std::uint64_t seed = 1;
  double clamp = 2.0;             // logistic: max row norm
  double planted_scale = 1.0;     // logistic: std of the planted weights
  double condition = 10.0;        // quadratic only
};

enum class Method { kItm, kStm, kGd };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::kItm: return "itm";
    case Method::kStm: return "stm";
    case Method::kGd: return "gd";
  }
  return "?";
}

struct ExperimentConfig {
  int version = kConfigVersion;
  ProblemSpec problem;
  Method method = Method::kItm;
  bool accelerated = false;         // gd only
  RunConfig run;                    // eps and seed are overwritten per sweep cell
  bool auto_diameter = true;        // D = 2‖x0 − x*_ref‖
  std::vector<double> eps{1e-6};
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir = "out";
  std::string source = "<config>";  // used in diagnostics

  void validate() const {
    auto fail = [&](const std::string& field, const std::string& msg) {
      throw ConfigError(source + ": field '" + field + "': " + msg);
    };
    if (version != kConfigVersion) fail("version", "unsupported version " + std::to_string(version));
    if (problem.type != "logistic" && problem.type != "quadratic") fail("problem.type", "unknown problem type");
    if (problem.n < 1) fail("problem.n", "must be >= 1");
    if (problem.type == "logistic" && problem.m < 1) fail("problem.m", "must be >= 1");
    if (problem.mu < 0.0) fail("problem.mu", "must be >= 0");
    if (eps.empty()) fail("sweep.eps", "at least one value required");
    for (double e : eps)
      if (!(e > 0.0)) fail("sweep.eps", "values must be > 0");
    if (seeds.empty()) fail("sweep.seeds", "at least one value required");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
      fail("sweep.seeds", "seeds must be distinct");
    }
    if (method == Method::kStm && run.kappa_policy == KappaPolicy::kExact) {
      fail("run.kappa", "stm needs positive tolerances (corollary or explicit)");
    }
    RunConfig probe = run;
    probe.eps = eps.front();
    if (auto_diameter) probe.diameter = 1.0;
    try {
      probe.validate();
    } catch (const InvalidArgument& e) {
      fail("run", e.what());
    }
  }
};

inline Problem make_problem(const ProblemSpec& spec) {
  if (spec.type == "quadratic") return make_quadratic(spec.n, spec.seed, spec.condition);
  if (spec.type == "logistic") {
    return make_logistic(spec.n, spec.m, spec.mu, spec.seed, spec.clamp, spec.planted_scale);
  }
  throw ConfigError("unknown problem type '" + spec.type + "'");
}

namespace detail {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (at.IsDefined() && at.Mark().line >= 0) os << ':' << at.Mark().line + 1 << ':' << at.Mark().column + 1;
    os << ": field '" << field << "': " << msg;
    throw ConfigError(os.str());
  }

  void check_keys(const YAML::Node& map, const std::string& prefix, std::initializer_list<const char*> allowed) const {
    if (!map.IsMap()) fail(map, prefix.empty() ? "<root>" : prefix, "expected a mapping");
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
        fail(kv.first, join(prefix, key), "unknown field");
      }
    }
  }

  template <class T>
  T get(const YAML::Node& node, const std::string& field, const char* what) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, field, std::string("expected ") + what);
    }
  }

  template <class T>
  void opt(const YAML::Node& map, const std::string& prefix, const char* key, T& out, const char* what) const {
    const YAML::Node v = map[key];
    if (v) out = get<T>(v, join(prefix, key), what);
  }

  static std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
  }

 private:
  std::string source_;
};

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
  const detail::Reader rd(source);
  ExperimentConfig cfg;
  cfg.source = source;
  if (!root || root.IsNull()) throw ConfigError(source + ": empty config");
  rd.check_keys(root, "", {"version", "problem", "method", "accelerated", "run", "sweep", "output"});

  if (!root["version"]) rd.fail(root, "version", "required field missing");
  cfg.version = rd.get<int>(root["version"], "version", "an integer");
  if (cfg.version != kConfigVersion) {
    rd.fail(root["version"], "version", "unsupported version " + std::to_string(cfg.version));
  }

  if (const YAML::Node pr = root["problem"]) {
    rd.check_keys(pr, "problem", {"type", "n", "m", "mu", "seed", "clamp", "planted_scale", "condition"});
    rd.opt(pr, "problem", "type", cfg.problem.type, "a string");
    if (cfg.problem.type != "logistic" && cfg.problem.type != "quadratic") {
      rd.fail(pr["type"], "problem.type", "expected logistic or quadratic");
    }
    std::int64_t n = cfg.problem.n, m = cfg.problem.m;
    rd.opt(pr, "problem", "n", n, "an integer");
    rd.opt(pr, "problem", "m", m, "an integer");
    if (n < 1) rd.fail(pr["n"], "problem.n", "must be >= 1");
    if (m < 1) rd.fail(pr["m"], "problem.m", "must be >= 1");
    cfg.problem.n = n;
    cfg.problem.m = m;
    rd.opt(pr, "problem", "mu", cfg.problem.mu, "a number");
    rd.opt(pr, "problem", "seed", cfg.problem.seed, "a nonnegative integer");
    rd.opt(pr, "problem", "clamp", cfg.problem.clamp, "a number");
    rd.opt(pr, "problem", "planted_scale", cfg.problem.planted_scale, "a number");
    rd.opt(pr, "problem", "condition", cfg.problem.condition, "a number");
  } else {
    rd.fail(root, "problem", "required section missing");
  }

  if (const YAML::Node me = root["method"]) {
    const auto s = rd.get<std::string>(me, "method", "a string");
    if (s == "itm") cfg.method = Method::kItm;
    else if (s == "stm") cfg.method = Method::kStm;
    else if (s == "gd") cfg.method = Method::kGd;
    else rd.fail(me, "method", "expected itm, stm or gd");
  }
  rd.opt(root, "", "accelerated", cfg.accelerated, "a boolean");

  RunConfig& rc = cfg.run;
  if (const YAML::Node run = root["run"]) {
    rd.check_keys(run, "run", {"p", "sigma", "kappa", "diameter", "radius", "max_iter", "delta", "sampling", "tau",
                               "grad_tol", "max_inner", "smooth", "target_gap", "step_tol", "verify", "verify_dirs"});
    rd.opt(run, "run", "p", rc.p, "an integer");
    if (rc.p != 2 && rc.p != 3) rd.fail(run["p"], "run.p", "must be 2 or 3");
    if (const YAML::Node sg = run["sigma"]) {
      if (sg.IsScalar() && sg.as<std::string>() == "auto") {
        rc.sigma_policy = SigmaPolicy::kAuto;
      } else {
        rc.sigma_policy = SigmaPolicy::kExplicit;
        rc.sigma = rd.get<double>(sg, "run.sigma", "'auto' or a number");
        if (!(rc.sigma > 0.0)) rd.fail(sg, "run.sigma", "must be > 0");
      }
    }
    if (const YAML::Node kp = run["kappa"]) {
      if (kp.IsSequence()) {
        rc.kappa_policy = KappaPolicy::kExplicit;
        rc.kappa = rd.get<std::vector<double>>(kp, "run.kappa", "a list of numbers");
        if (static_cast<int>(rc.kappa.size()) != rc.p) rd.fail(kp, "run.kappa", "expected p entries");
        for (double k : rc.kappa)
          if (k < 0.0) rd.fail(kp, "run.kappa", "entries must be >= 0");
      } else {
        const auto s = rd.get<std::string>(kp, "run.kappa", "exact, corollary or a list");
        if (s == "exact") rc.kappa_policy = KappaPolicy::kExact;
        else if (s == "corollary") rc.kappa_policy = KappaPolicy::kCorollary;
        else rd.fail(kp, "run.kappa", "expected exact, corollary or a list");
      }
    }
    if (const YAML::Node d = run["diameter"]) {
      if (d.IsScalar() && d.as<std::string>() == "auto") {
        cfg.auto_diameter = true;
      } else {
        cfg.auto_diameter = false;
        rc.diameter = rd.get<double>(d, "run.diameter", "'auto' or a number");
        if (!(rc.diameter > 0.0)) rd.fail(d, "run.diameter", "must be > 0");
      }
    }
    rd.opt(run, "run", "radius", rc.radius, "a number");
    rd.opt(run, "run", "max_iter", rc.max_iter, "an integer");
    rd.opt(run, "run", "delta", rc.delta, "a number");
    if (const YAML::Node sm = run["sampling"]) {
      const auto s = rd.get<std::string>(sm, "run.sampling", "a string");
      if (s == "online") rc.sampling = SamplingMode::kOnline;
      else if (s == "offline") rc.sampling = SamplingMode::kOffline;
      else rd.fail(sm, "run.sampling", "expected online or offline");
    }
    rd.opt(run, "run", "tau", rc.tau, "a number");
    rd.opt(run, "run", "grad_tol", rc.grad_tol, "a number");
    rd.opt(run, "run", "max_inner", rc.max_inner, "an integer");
    rd.opt(run, "run", "smooth", rc.smooth, "a boolean");
    rd.opt(run, "run", "target_gap", rc.target_gap, "a number");
    rd.opt(run, "run", "step_tol", rc.step_tol, "a number");
    rd.opt(run, "run", "verify", rc.verify, "a boolean");
    rd.opt(run, "run", "verify_dirs", rc.verify_dirs, "an integer");
    if (rc.max_iter < 0) rd.fail(run["max_iter"], "run.max_iter", "must be >= 0");
    if (run["delta"] && !(rc.delta > 0.0 && rc.delta <= 1.0)) rd.fail(run["delta"], "run.delta", "must be in (0, 1]");
    if (run["tau"] && !(rc.tau > 2.0)) rd.fail(run["tau"], "run.tau", "must be > 2");
    if (run["radius"] && !(rc.radius > 0.0)) rd.fail(run["radius"], "run.radius", "must be > 0");
  }
  rc.mode = cfg.method == Method::kStm ? RunMode::kStochastic : RunMode::kDeterministic;

  if (const YAML::Node sw = root["sweep"]) {
    rd.check_keys(sw, "sweep", {"eps", "seeds"});
    if (const YAML::Node e = sw["eps"]) {
      cfg.eps = e.IsSequence() ? rd.get<std::vector<double>>(e, "sweep.eps", "a list of numbers")
                               : std::vector<double>{rd.get<double>(e, "sweep.eps", "a number")};
      if (cfg.eps.empty()) rd.fail(e, "sweep.eps", "at least one value required");
      for (double v : cfg.eps)
        if (!(v > 0.0)) rd.fail(e, "sweep.eps", "values must be > 0");
    }
    if (const YAML::Node s = sw["seeds"]) {
      cfg.seeds = s.IsSequence() ? rd.get<std::vector<std::uint64_t>>(s, "sweep.seeds", "a list of integers")
                                 : std::vector<std::uint64_t>{rd.get<std::uint64_t>(s, "sweep.seeds", "an integer")};
      if (cfg.seeds.empty()) rd.fail(s, "sweep.seeds", "at least one value required");
      if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size()) {
        rd.fail(s, "sweep.seeds", "seeds must be distinct");
      }
    }
  }
  if (const YAML::Node out = root["output"]) {
    rd.check_keys(out, "output", {"dir"});
    rd.opt(out, "output", "dir", cfg.out_dir, "a string");
  }
  if (cfg.method == Method::kStm && rc.kappa_policy == KappaPolicy::kExact) {
    rd.fail(root["run"] ? root["run"] : root, "run.kappa", "stm needs positive tolerances (corollary or explicit)");
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

/// Fully resolved YAML form; parse_config(to_yaml(c)) reproduces c.
inline std::string to_yaml(const ExperimentConfig& c) {
  using detail::fmt_double;
  const RunConfig& r = c.run;
  std::ostringstream os;
  os << "version: " << c.version << "\n";
  os << "problem:\n";
  os << "  type: " << c.problem.type << "\n";
  os << "  n: " << c.problem.n << "\n";
  os << "  m: " << c.problem.m << "\n";
  os << "  mu: " << fmt_double(c.problem.mu) << "\n";
  os << "  seed: " << c.problem.seed << "\n";
  os << "  clamp: " << fmt_double(c.problem.clamp) << "\n";
  os << "  planted_scale: " << fmt_double(c.problem.planted_scale) << "\n";
  os << "  condition: " << fmt_double(c.problem.condition) << "\n";
  os << "method: " << to_string(c.method) << "\n";
  os << "accelerated: " << (c.accelerated ? "true" : "false") << "\n";
  os << "run:\n";
  os << "  p: " << r.p << "\n";
  os << "  sigma: " << (r.sigma_policy == SigmaPolicy::kAuto ? std::string("auto") : fmt_double(r.sigma)) << "\n";
  os << "  kappa: ";
  if (r.kappa_policy == KappaPolicy::kExact) {
    os << "exact\n";
  } else if (r.kappa_policy == KappaPolicy::kCorollary) {
    os << "corollary\n";
  } else {
    os << "[";
    for (std::size_t i = 0; i < r.kappa.size(); ++i) os << (i ? ", " : "") << fmt_double(r.kappa[i]);
    os << "]\n";
  }
  os << "  diameter: " << (c.auto_diameter ? std::string("auto") : fmt_double(r.diameter)) << "\n";
  os << "  radius: " << fmt_double(r.radius) << "\n";
  os << "  max_iter: " << r.max_iter << "\n";
  os << "  delta: " << fmt_double(r.delta) << "\n";
  os << "  sampling: " << (r.sampling == SamplingMode::kOnline ? "online" : "offline") << "\n";
  os << "  tau: " << fmt_double(r.tau) << "\n";
  os << "  grad_tol: " << fmt_double(r.grad_tol) << "\n";
  os << "  max_inner: " << r.max_inner << "\n";
  os << "  smooth: " << (r.smooth ? "true" : "false") << "\n";
  os << "  target_gap: " << fmt_double(r.target_gap) << "\n";
  os << "  step_tol: " << fmt_double(r.step_tol) << "\n";
  os << "  verify: " << (r.verify ? "true" : "false") << "\n";
  os << "  verify_dirs: " << r.verify_dirs << "\n";
  os << "sweep:\n";
  os << "  eps: [";
  for (std::size_t i = 0; i < c.eps.size(); ++i) os << (i ? ", " : "") << fmt_double(c.eps[i]);
  os << "]\n  seeds: [";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? ", " : "") << c.seeds[i];
  os << "]\n";
  os << "output:\n  dir: \"" << c.out_dir << "\"\n";
  return os.str();
}

}  // namespace tensoropt::bench
