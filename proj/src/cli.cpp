#include "osva/cli.hpp"

#include "osva/fusion.hpp"
#include "osva/geom.hpp"
#include "osva/instances.hpp"
#include "osva/modes.hpp"
#include "osva/solver.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

namespace osva {

nlohmann::ordered_json RunConfig::echo() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  if (command == "validate" || command == "solve") {
    j["builtin"] = builtin;
    j["data"] = data_path;
    if (command == "validate") j["algebras"] = algebras_path;
    if (command == "solve") {
      j["dims"] = dims;
      j["search_bound"] = search_bound;
    }
  } else {
    j["instance"] = instance;
    j["cutoff"] = cutoff;
    j["tol"] = tol;
    j["samples"] = samples;
    j["seed"] = seed;
    if (command == "geometry") {
      j["check"] = check.empty() ? "all" : check;
      j["eps"] = eps;
    }
  }
  return j;
}

bool ReportBundle::overall() const {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw UsageError("cannot write '" + path + "'");
}

FusionData fusion_input(const RunConfig& c) {
  if (!c.builtin.empty() && !c.data_path.empty()) throw UsageError("give either --builtin or --data, not both");
  if (!c.builtin.empty()) {
    if (c.builtin != "ising") throw UsageError("unknown builtin '" + c.builtin + "'");
    return ising_builtin();
  }
  if (c.data_path.empty()) throw UsageError("a fusion datum is required: --builtin ising or --data <file>");
  try {
    return load_fusion_data(read_file(c.data_path));
  } catch (const FusionParseError& e) {
    throw UsageError(c.data_path + ": " + e.what());
  }
}

/// Runs the suite's checks in order, recording wall time per check.
class Recorder {
 public:
  explicit Recorder(ReportBundle& b) : b_(b) {}
  void run(const std::function<CheckReport()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    b_.reports.push_back(f());
    b_.wall_ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }

 private:
  ReportBundle& b_;
};

CheckReport merge(std::string name, const std::vector<CheckReport>& parts, double tol) {
  CheckReport out;
  out.name = std::move(name);
  out.tolerance = tol;
  for (const CheckReport& p : parts) {
    out.passed = out.passed && p.passed;
    out.residual = std::max(out.residual, p.residual);
    out.checked += p.checked;
    for (const Witness& w : p.witnesses)
      if (out.witnesses.size() < kMaxWitnesses) out.witnesses.push_back(w);
    for (const std::string& n : p.notes) out.notes.push_back(p.name + ": " + n);
  }
  return out;
}

void validate_suite(const RunConfig& c, ReportBundle& b) {
  const FusionData data = fusion_input(c);
  Recorder rec(b);
  rec.run([&] { return validate_ring(data.ring()); });
  rec.run([&] { return validate_fusing(data); });
  rec.run([&] { return diagonal_double_check(data); });
  if (c.algebras_path.empty()) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(c.algebras_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(c.algebras_path + ": " + e.what());
  }
  if (!doc.contains("solutions") || !doc["solutions"].is_array())
    throw UsageError(c.algebras_path + ": expected a top-level 'solutions' array");
  for (std::size_t k = 0; k < doc["solutions"].size(); ++k) {
    AlgebraObject alg;
    try {
      alg = algebra_from_json(data.ring(), doc["solutions"][k]);
    } catch (const std::exception& e) {
      throw UsageError(c.algebras_path + ": $.solutions[" + std::to_string(k) + "]: " + e.what());
    }
    rec.run([&] {
      CheckReport r = verify_algebra(data, alg);
      r.name = "verify[" + std::to_string(k) + "]";
      return r;
    });
  }
}

void solve_suite(const RunConfig& c, ReportBundle& b) {
  const FusionData data = fusion_input(c);
  if (c.dims.size() != data.ring().size())
    throw UsageError("--dims needs " + std::to_string(data.ring().size()) + " entries");
  SolveOptions options;
  options.search_bound = c.search_bound;
  SolveResult result;
  Recorder rec(b);
  rec.run([&] {
    try {
      result = solve_small(data, c.dims, options);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    CheckReport r;
    r.name = "solve";
    r.checked = result.nodes;
    if (result.partial) r.fail("search", "complete", "search bound reached after " + std::to_string(result.nodes) + " nodes");
    r.notes.push_back(std::to_string(result.solutions.size()) + " solutions");
    r.notes.push_back(result.exhaustive ? "exhaustive" : "not exhaustive: unconstrained parameters sampled");
    for (const std::string& u : result.uncertified_roots) r.notes.push_back("uncertified root " + u);
    return r;
  });
  b.solutions = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < result.solutions.size(); ++k) {
    b.solutions.push_back(algebra_to_json(data.ring(), result.solutions[k]));
    rec.run([&] {
      CheckReport r = verify_algebra(data, result.solutions[k]);
      r.name = "verify[" + std::to_string(k) + "]";
      return r;
    });
  }
  if (!c.solutions_path.empty()) {
    nlohmann::ordered_json doc;
    doc["solutions"] = b.solutions;
    write_file(c.solutions_path, doc.dump(1) + "\n");
  }
}

struct LoadedInstance {
  std::optional<OsvaInstance> inst;
  std::optional<CheckReport> table_report;  // set for table-backed instances
  bool assoc = false;
};

LoadedInstance load_instance(const RunConfig& c) {
  LoadedInstance out;
  auto table_from = [&](const std::string& path) {
    try {
      return load_assoc_table(read_file(path));
    } catch (const InstanceError& e) {
      throw UsageError(path + ": " + e.what());
    }
  };
  auto need_cutoff = [&] {
    if (c.cutoff < 2) throw UsageError("--cutoff must be >= 2");
  };
  if (c.instance == "heisenberg") {
    need_cutoff();
    out.inst.emplace(make_heisenberg_instance(c.cutoff));
  } else if (c.instance.starts_with("assoc:") || c.instance.starts_with("tensor:")) {
    const bool tensor = c.instance.starts_with("tensor:");
    if (tensor) need_cutoff();
    const AssocTable table = table_from(c.instance.substr(c.instance.find(':') + 1));
    out.table_report = check_assoc_table(table);
    if (!out.table_report->passed) return out;
    OsvaInstance alg = make_assoc_algebra_instance(table);
    if (tensor) {
      out.inst.emplace(make_tensor_instance(alg, make_heisenberg_instance(c.cutoff)));
    } else {
      out.inst.emplace(std::move(alg));
      out.assoc = true;
    }
  } else {
    throw UsageError("--instance must be assoc:<file>, heisenberg or tensor:<file>");
  }
  return out;
}

/// Seeded sampling over the truncated basis with coefficients in {-2, ..., 2}.
class Sampler {
 public:
  Sampler(const OsvaInstance& inst, unsigned long long seed) : inst_(inst), rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  GradedVector homogeneous(const Rational& max_weight) {
    std::vector<Rational> weights;
    for (const Rational& w : inst_.distinct_weights())
      if (w <= max_weight) weights.push_back(w);
    const Rational w = weights[below(weights.size())];
    return draw(inst_.space().basis_of_weight(w));
  }

  GradedVector mixed(const Rational& max_weight) { return draw(basis_up_to(inst_, max_weight)); }

 private:
  GradedVector draw(const std::vector<std::size_t>& basis) {
    for (;;) {
      GradedVector v;
      // At most three components keep the samples sparse.
      for (int t = 0; t < 3; ++t) {
        const std::size_t i = basis[below(basis.size())];
        v.add(i, Rational(static_cast<long>(below(5)) - 2));
      }
      if (!v.is_zero()) return v;
    }
  }

  const OsvaInstance& inst_;
  std::mt19937_64 rng_;
};

CheckReport opposite_product_check(const OsvaInstance& inst) {
  CheckReport r;
  r.name = "opposite-product";
  const std::size_t d = inst.space().size();
  for (std::size_t u = 0; u < d; ++u)
    for (std::size_t v = 0; v < d; ++v) {
      ++r.checked;
      const RealVector got = opposite_vertex(inst, GradedVector::basis(u), -1.0, GradedVector::basis(v));
      const RealVector want = to_real(inst.space(), inst.mode(v, Rational(-1), u));
      if (got != want)
        r.fail("(" + inst.space().labels[u] + "," + inst.space().labels[v] + ")", "v u", "differs");
    }
  return r;
}

void axioms_suite(const RunConfig& c, ReportBundle& b) {
  LoadedInstance li = load_instance(c);
  Recorder rec(b);
  if (li.table_report) rec.run([&] { return *li.table_report; });
  if (!li.inst) return;
  const OsvaInstance& inst = *li.inst;
  Sampler sampler(inst, c.seed);
  const Rational low(std::min(2, c.cutoff));

  std::vector<std::pair<GradedVector, GradedVector>> homogeneous_pairs;
  std::vector<GradedVector> mixed;
  std::vector<AssociativitySample> assoc;
  for (int s = 0; s < c.samples; ++s) {
    homogeneous_pairs.emplace_back(sampler.homogeneous(low), sampler.homogeneous(low));
    mixed.push_back(sampler.mixed(low));
    AssociativitySample a;
    a.u = sampler.mixed(low);
    a.v = sampler.mixed(low);
    a.w = sampler.mixed(low);
    a.dual = sampler.mixed(low);
    a.r1 = 1.0;
    a.r2 = 0.6;
    assoc.push_back(std::move(a));
  }

  rec.run([&] { return check_weight_bookkeeping(inst); });
  rec.run([&] { return check_identity(inst, {0.5, 1.0, 2.0}); });
  rec.run([&] { return check_creation(inst); });
  rec.run([&] { return check_d_conjugation(inst, Rational(2), homogeneous_pairs); });
  rec.run([&] { return check_D_derivative(inst, mixed); });
  if (inst.has_conformal()) rec.run([&] { return check_virasoro(inst, -3, 3); });
  rec.run([&] { return check_associativity(inst, assoc, c.tol); });
  rec.run([&] {
    CheckReport r = c0_membership(inst, inst.vacuum());
    r.name = "c0-vacuum";
    return r;
  });
  if (li.assoc) rec.run([&] { return opposite_product_check(inst); });
}

CheckReport vacuum_check(const OsvaInstance& inst) {
  CheckReport r;
  r.name = "vacuum";
  r.checked = 1;
  const GradedVector got = extract_vacuum(inst);
  if (got != inst.vacuum()) r.fail("Phi_0(trivial disk)", inst.vacuum().to_string(inst.space()), got.to_string(inst.space()));
  return r;
}

double conformal_error(const OsvaInstance& inst, double eps) {
  const RealVector got = extract_conformal(inst, eps);
  const RealVector want = to_real(inst.space(), inst.conformal().omega);
  double top = 0.0;
  for (double x : want) top = std::max(top, std::abs(x));
  double err = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const double scale = std::max(std::abs(want[i]), top);
    const double diff = std::abs(got[i] - want[i]);
    err = std::max(err, scale > 0.0 ? diff / scale : diff);
  }
  return err;
}

CheckReport conformal_check(const OsvaInstance& inst, double eps) {
  CheckReport r;
  r.name = "conformal";
  r.tolerance = 1e-6;
  if (!inst.has_conformal()) {
    r.fail("conformal vector", "present", "absent");
    return r;
  }
  r.checked = inst.space().size();
  r.residual = conformal_error(inst, eps);
  const double half = conformal_error(inst, eps / 2.0);
  std::ostringstream note;
  note << "relative error " << r.residual << " at eps, " << half << " at eps/2";
  r.notes.push_back(note.str());
  r.settle_numeric();
  return r;
}

CheckReport sewing_check(const OsvaInstance& inst, Sampler& sampler, const RunConfig& c) {
  const Rational low(std::min(2, c.cutoff));
  auto vecs = [&](std::size_t n) {
    std::vector<GradedVector> v;
    for (std::size_t k = 0; k < n; ++k) v.push_back(sampler.mixed(low));
    return v;
  };
  std::vector<CheckReport> parts;
  for (int s = 0; s < std::max(1, c.samples); ++s) {
    const GradedVector dual = sampler.mixed(low);
    parts.push_back(check_sewing_axiom(inst, P_element(1.0), 2, P_element(0.6), vecs(3), dual, c.tol));
    parts.back().name = "P(1)o2P(0.6)";
    parts.push_back(check_sewing_axiom(inst, P_element(0.6), 2, scale_element(2.0), vecs(2), dual, c.tol));
    parts.back().name = "P(0.6)o2scale(2)";
    parts.push_back(check_sewing_axiom(inst, P_element(0.6), 1, identity_element(), vecs(2), dual, c.tol));
    parts.back().name = "P(0.6)o1identity";
  }
  CheckReport r = merge("sewing", parts, c.tol);
  // Only the first sample's notes are kept; the rest repeat the pattern.
  r.notes.resize(std::min<std::size_t>(r.notes.size(), 3));
  return r;
}

CheckReport pr_consistency_check(const OsvaInstance& inst, Sampler& sampler, const RunConfig& c) {
  CheckReport r;
  r.name = "pr-consistency";
  const Rational low(std::min(2, c.cutoff));
  for (int s = 0; s < std::max(1, c.samples); ++s) {
    const GradedVector u = sampler.mixed(low), v = sampler.mixed(low);
    for (double radius : {0.5, 1.0}) {
      ++r.checked;
      const RealVector want = vertex_eval(inst, u, radius, v);
      const RealVector got = phi_vector(inst, P_element(radius), {to_real(inst.space(), u), to_real(inst.space(), v)});
      if (got != want) r.fail("P(" + std::to_string(radius) + ") sample " + std::to_string(s), "vertex_eval", "differs");
    }
  }
  for (std::size_t i = 0; i < inst.space().size(); ++i) {
    ++r.checked;
    const GradedVector v = GradedVector::basis(i);
    const double want = std::pow(2.0, -inst.weight(i).to_double());
    const double got = phi_eval(inst, scale_element(2.0), {v}, v);
    if (got != want) r.fail("scale(2) on " + inst.space().labels[i], std::to_string(want), std::to_string(got));
  }
  return r;
}

void geometry_suite(const RunConfig& c, ReportBundle& b) {
  if (!(c.eps > 0.0)) throw UsageError("--eps must be positive");
  LoadedInstance li = load_instance(c);
  Recorder rec(b);
  if (li.table_report) rec.run([&] { return *li.table_report; });
  if (!li.inst) return;
  const OsvaInstance& inst = *li.inst;
  Sampler sampler(inst, c.seed);
  auto wants = [&](const char* name) { return c.check.empty() || c.check == name; };
  if (wants("vacuum")) rec.run([&] { return vacuum_check(inst); });
  if (wants("conformal")) rec.run([&] { return conformal_check(inst, c.eps); });
  if (wants("sewing")) rec.run([&] { return sewing_check(inst, sampler, c); });
  if (wants("pr-consistency")) rec.run([&] { return pr_consistency_check(inst, sampler, c); });
}

}  // namespace

ReportBundle execute(const RunConfig& c) {
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  if (c.samples < 0) throw UsageError("--samples must be non-negative");
  ReportBundle b;
  b.config = c.echo();
  if (c.command == "validate") validate_suite(c, b);
  else if (c.command == "solve") solve_suite(c, b);
  else if (c.command == "axioms") axioms_suite(c, b);
  else if (c.command == "geometry") geometry_suite(c, b);
  else throw UsageError("unknown command '" + c.command + "'");
  return b;
}

std::string emit_report(const ReportBundle& bundle, ReportFormat format, bool timings) {
  if (format == ReportFormat::structured) {
    nlohmann::ordered_json j;
    j["tool"] = "osva";
    j["version"] = bundle.version;
    j["config"] = bundle.config;
    j["overall"] = bundle.overall();
    j["reports"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < bundle.reports.size(); ++k) {
      nlohmann::ordered_json r = to_json(bundle.reports[k]);
      if (timings && k < bundle.wall_ms.size()) r["wall_ms"] = bundle.wall_ms[k];
      j["reports"].push_back(std::move(r));
    }
    if (!bundle.solutions.is_null()) j["solutions"] = bundle.solutions;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "osva " << bundle.version << "\n";
  out << "config " << bundle.config.dump() << "\n";
  for (std::size_t k = 0; k < bundle.reports.size(); ++k) {
    const CheckReport& r = bundle.reports[k];
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  residual=" << r.residual << " tol=" << r.tolerance
        << " checked=" << r.checked;
    if (timings && k < bundle.wall_ms.size()) out << " wall_ms=" << bundle.wall_ms[k];
    out << "\n";
    for (const Witness& w : r.witnesses)
      out << "    witness " << w.input << ": expected " << w.expected << ", got " << w.got << "\n";
    for (const std::string& n : r.notes) out << "    note " << n << "\n";
  }
  if (!bundle.solutions.is_null()) out << "solutions " << bundle.solutions.size() << "\n";
  out << "overall " << (bundle.overall() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

ReportBundle bundle_from_json(const nlohmann::json& j) {
  ReportBundle b;
  b.version = j.at("version").get<std::string>();
  b.config = j.at("config");
  for (const auto& r : j.at("reports")) {
    b.reports.push_back(report_from_json(r));
    if (r.contains("wall_ms")) b.wall_ms.push_back(r.at("wall_ms").get<double>());
  }
  if (j.contains("solutions")) b.solutions = j.at("solutions");
  return b;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Open-string vertex algebra toolkit"};
  app.require_subcommand(1);
  RunConfig c;
  std::string format = "structured";
  std::string dims;

  auto shared = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "report path (default: $OSVA_REPORT_DIR/<command>.json, else stdout)");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "structured"}));
    sub->add_flag("--timings", c.timings, "include wall times (breaks byte-identical reports)");
  };
  auto instance_opts = [&](CLI::App* sub) {
    sub->add_option("--instance", c.instance, "assoc:<table-file> | heisenberg | tensor:<table-file>");
    sub->add_option("--cutoff", c.cutoff, "weight cutoff");
    sub->add_option("--tol", c.tol, "numeric tolerance");
    sub->add_option("--samples", c.samples, "random samples per check");
    sub->add_option("--seed", c.seed, "sampling seed");
  };

  CLI::App* validate = app.add_subcommand("validate", "validate a fusion datum");
  validate->add_option("--builtin", c.builtin, "builtin datum")->check(CLI::IsMember({"ising"}));
  validate->add_option("--data", c.data_path, "fusion-data file");
  validate->add_option("--algebras", c.algebras_path, "solutions file to verify against the datum");
  shared(validate);

  CLI::App* solve = app.add_subcommand("solve", "solve the structure-constant equations");
  solve->add_option("--builtin", c.builtin, "builtin datum")->check(CLI::IsMember({"ising"}));
  solve->add_option("--data", c.data_path, "fusion-data file");
  solve->add_option("--dims", dims, "multiplicity per sector, e.g. 1,1,0")->required();
  solve->add_option("--search-bound", c.search_bound, "maximum search nodes");
  solve->add_option("--solutions", c.solutions_path, "write the solutions file here");
  shared(solve);

  CLI::App* axioms = app.add_subcommand("axioms", "check the axioms on an instance");
  instance_opts(axioms);
  shared(axioms);

  CLI::App* geometry = app.add_subcommand("geometry", "check the geometric layer on an instance");
  instance_opts(geometry);
  geometry->add_option("--check", c.check, "single check to run")
      ->check(CLI::IsMember({"vacuum", "conformal", "sewing", "pr-consistency"}));
  geometry->add_option("--eps", c.eps, "finite-difference step");
  shared(geometry);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  for (CLI::App* sub : app.get_subcommands()) c.command = sub->get_name();
  c.format = format == "text" ? ReportFormat::text : ReportFormat::structured;
  try {
    if (!dims.empty()) {
      std::stringstream s(dims);
      for (std::string part; std::getline(s, part, ',');) {
        std::size_t used = 0;
        int d = 0;
        try {
          d = std::stoi(part, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != part.size()) throw UsageError("--dims: '" + part + "' is not an integer");
        c.dims.push_back(d);
      }
    }
    const ReportBundle bundle = execute(c);
    const std::string text = emit_report(bundle, c.format, c.timings);
    std::string path = c.out;
    if (path.empty()) {
      if (const char* dir = std::getenv("OSVA_REPORT_DIR"); dir && *dir)
        path = (std::filesystem::path(dir) / (c.command + (c.format == ReportFormat::text ? ".txt" : ".json"))).string();
    }
    if (path.empty()) {
      out << text;
    } else {
      write_file(path, text);
      out << c.command << ": " << (bundle.overall() ? "PASS" : "FAIL") << " (" << bundle.reports.size()
          << " reports) -> " << path << "\n";
    }
    return bundle.overall() ? 0 : 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace osva
