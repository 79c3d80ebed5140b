#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include "kahler/constraints.hpp"
#include "kahler/dynamics.hpp"
#include "kahler/errors.hpp"
#include "kahler/real_oracle.hpp"
#include "kahler/system_file.hpp"
#include "kahler/verify.hpp"

namespace kahler::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Flags {
  std::string system;
  std::string out;
  std::optional<double> t1;
  std::optional<double> dt;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<unsigned long long> seed;
  std::string format = "csv";
};

struct Resolved {
  std::optional<double> t1;
  double dt = kDefaultDt;
  double tol = kDefaultTol;
  int samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
};

Resolved resolve(const Flags& f, const SystemFile& file) {
  Resolved r;
  r.t1 = f.t1 ? f.t1 : file.t1;
  r.dt = f.dt.value_or(file.dt.value_or(kDefaultDt));
  r.tol = f.tol.value_or(kDefaultTol);
  r.samples = f.samples.value_or(kDefaultSamples);
  r.seed = f.seed.value_or(file.seed.value_or(kDefaultSeed));
  if (!(r.dt > 0.0)) throw InvalidArgument("--dt must be positive");
  if (r.t1 && !(*r.t1 > 0.0)) throw InvalidArgument("--t1 must be positive");
  if (r.samples < 1) throw InvalidArgument("--samples must be at least 1");
  if (!(r.tol >= 0.0)) throw InvalidArgument("--tol must be nonnegative");
  return r;
}

json provenance(const Resolved& r) {
  json p;
  p["t1"] = r.t1 ? json(*r.t1) : json(nullptr);
  p["dt"] = r.dt;
  p["tol"] = r.tol;
  p["samples"] = r.samples;
  p["seed"] = r.seed;
  json d;
  d["dt"] = kDefaultDt;
  d["samples"] = kDefaultSamples;
  d["tol"] = kDefaultTol;
  d["seed"] = kDefaultSeed;
  return json{{"parameters", p}, {"defaults", d}};
}

json to_json(cplx v) { return json::array({v.real(), v.imag()}); }

json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

json to_json(const EvalPoint& p) { return json{{"z", to_json(p.z())}, {"w", to_json(p.w())}}; }

json to_json(const VectorField& v) { return json{{"hol", to_json(v.hol)}, {"fib", to_json(v.fib)}}; }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream o(p, std::ios::binary | std::ios::trunc);
  if (!o) throw SystemFileError(p.string(), 0, "cannot write output file");
  o << content;
}

fs::path prepare_out(const std::string& out) {
  const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw SystemFileError(dir.string(), 0, "cannot create output directory");
  return dir;
}

std::string system_name(const SystemFile& f) {
  return f.name.empty() ? fs::path(f.source).stem().string() : f.name;
}

// simulate ------------------------------------------------------------------

std::vector<std::string> csv_header(const LagrangianSystem& sys) {
  std::vector<std::string> h{"t"};
  const int m = sys.dimension();
  for (int i = 1; i <= m; ++i) h.insert(h.end(), {"z" + std::to_string(i) + ".re", "z" + std::to_string(i) + ".im"});
  for (int i = 1; i <= m; ++i) h.insert(h.end(), {"w" + std::to_string(i) + ".re", "w" + std::to_string(i) + ".im"});
  for (const auto& c : sys.constraints()) h.insert(h.end(), {"lambda_" + c.name + ".re", "lambda_" + c.name + ".im"});
  h.insert(h.end(), {"energy.re", "energy.im", "residual_symplectic"});
  for (const auto& c : sys.constraints()) h.push_back("omega_" + c.name);
  h.push_back("semispray_defect");
  return h;
}

std::vector<double> csv_row(const TrajectorySample& s) {
  std::vector<double> r{s.state.t};
  for (const auto& v : s.state.z) r.insert(r.end(), {v.real(), v.imag()});
  for (const auto& v : s.state.w) r.insert(r.end(), {v.real(), v.imag()});
  for (const auto& v : s.solution.lambdas) r.insert(r.end(), {v.real(), v.imag()});
  r.insert(r.end(), {s.energy.real(), s.energy.imag(), s.solution.residual_symplectic});
  for (double v : s.solution.constraint_residuals) r.push_back(v);
  r.push_back(s.solution.semispray_defect);
  return r;
}

std::string status_name(TrajectoryStatus::Kind k) {
  switch (k) {
    case TrajectoryStatus::Kind::Completed: return "Completed";
    case TrajectoryStatus::Kind::SolverFailure: return "SolverFailure";
    case TrajectoryStatus::Kind::NonFinite: return "NonFinite";
  }
  return "Completed";
}

int cmd_simulate(const Flags& flags, std::ostream& out) {
  const SystemFile file = load_system_file(flags.system);
  const Resolved r = resolve(flags, file);
  if (!r.t1) throw InvalidArgument("no end time: give --t1 or t1 in [integrator]");
  if (flags.format != "csv" && flags.format != "json") throw InvalidArgument("--format must be csv or json");
  const LagrangianSystem sys = file.build();
  const fs::path dir = prepare_out(flags.out);

  const Trajectory tr = integrate(sys, file.initial_state(), *r.t1, r.dt);
  const DiagnosticsReport d = diagnostics(tr);

  const std::vector<std::string> header = csv_header(sys);
  if (flags.format == "csv") {
    std::string csv;
    for (std::size_t k = 0; k < header.size(); ++k) csv += (k ? "," : "") + header[k];
    csv += '\n';
    for (const auto& s : tr.samples) {
      const std::vector<double> row = csv_row(s);
      for (std::size_t k = 0; k < row.size(); ++k) csv += (k ? "," : "") + num(row[k]);
      csv += '\n';
    }
    write_file(dir / "trajectory.csv", csv);
  } else {
    json j;
    j["columns"] = header;
    json rows = json::array();
    for (const auto& s : tr.samples) rows.push_back(csv_row(s));
    j["rows"] = rows;
    write_file(dir / "trajectory.json", j.dump(1) + "\n");
  }

  json j;
  j["command"] = "simulate";
  j["system"] = system_name(file);
  j["m"] = sys.dimension();
  j["r"] = sys.constraint_count();
  j.update(provenance(r));
  j["status"] = {{"kind", status_name(tr.status.kind)},
                 {"time", tr.status.completed() ? json(nullptr) : json(tr.status.time)},
                 {"error", tr.status.error.empty() ? json(nullptr) : json(tr.status.error)},
                 {"message", tr.status.message}};
  j["samples"] = tr.samples.size();
  j["columns"] = header.size();
  j["diagnostics"] = {{"max_energy_drift", d.max_energy_drift},
                      {"mean_energy_drift", d.mean_energy_drift},
                      {"max_constraint_residual", d.max_constraint_residual},
                      {"mean_constraint_residual", d.mean_constraint_residual},
                      {"max_symplectic_residual", d.max_symplectic_residual},
                      {"max_semispray_defect", d.max_semispray_defect},
                      {"mean_semispray_defect", d.mean_semispray_defect}};
  write_file(dir / "diagnostics.json", j.dump(2) + "\n");

  out << "simulate " << system_name(file) << ": " << status_name(tr.status.kind);
  if (!tr.status.completed()) out << " (" << tr.status.error << " at t = " << num(tr.status.time) << ")";
  out << ", " << tr.samples.size() << " samples, max energy drift " << short_num(d.max_energy_drift) << "\n";
  return tr.status.completed() ? kSuccess : kRuntimeError;
}

// classify ------------------------------------------------------------------

int cmd_classify(const Flags& flags, std::ostream& out) {
  const SystemFile file = load_system_file(flags.system);
  const Resolved r = resolve(flags, file);
  const LagrangianSystem sys = file.build();
  if (sys.constraint_count() == 0) throw InvalidArgument("system has no constraints to classify");
  const ConstraintSet cs = ConstraintSet::from_system(sys);
  const double tol = flags.tol ? *flags.tol : (file.tolerances.count("classify") ? file.tolerances.at("classify") : r.tol);
  const Classification c = frobenius_test(cs, r.samples, r.seed, tol);

  json j;
  j["command"] = "classify";
  j["system"] = system_name(file);
  j["m"] = sys.dimension();
  j["r"] = sys.constraint_count();
  j.update(provenance(r));
  j["parameters"]["tol"] = tol;
  j["verdict"] = verdict_name(c.verdict);
  json forms = json::array();
  for (int a = 0; a < cs.size(); ++a) {
    json f{{"name", cs.names()[a]}, {"basic", is_basic(cs.forms()[a])}};
    if (!c.closedness.closed.empty()) {
      f["closed"] = static_cast<bool>(c.closedness.closed[a]);
      f["closedness_measure"] = c.closedness.measure[a];
    } else {
      f["closed"] = nullptr;
    }
    forms.push_back(f);
  }
  j["forms"] = forms;
  j["max_bracket"] = c.max_bracket;
  std::size_t valid = 0, failed = 0;
  for (const auto& e : c.evidence) {
    if (e.evaluation_failed) ++failed;
    else if (!e.rank_deficient) ++valid;
  }
  j["samples"] = {{"valid", valid}, {"rank_deficient", c.rank_deficient_samples}, {"evaluation_failed", failed}};
  json per = json::array();
  for (const auto& e : c.evidence) per.push_back(e.rank_deficient || e.evaluation_failed ? json(nullptr) : json(e.max_bracket));
  j["evidence"] = per;
  json wit = json::array();
  for (std::size_t k = 0; k < std::min<std::size_t>(c.witnesses.size(), 5); ++k) {
    const auto& w = c.witnesses[k];
    wit.push_back({{"form", cs.names()[w.form]},
                   {"point", to_json(w.point)},
                   {"x", to_json(w.x)},
                   {"y", to_json(w.y)},
                   {"value", to_json(w.value)},
                   {"modulus", std::abs(w.value)},
                   {"measure", w.measure}});
  }
  j["witnesses"] = wit;
  const std::string text = j.dump(2) + "\n";
  if (!flags.out.empty()) write_file(prepare_out(flags.out) / "classification.json", text);
  out << text;
  return kSuccess;
}

std::string cnum(cplx v) {
  return num(v.real()) + (std::signbit(v.imag()) ? "" : "+") + num(v.imag()) + "i";
}

// check ---------------------------------------------------------------------

struct CheckLine {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
  bool pass() const { return note.empty() && value <= threshold; }
};

int cmd_check(const Flags& flags, std::ostream& out) {
  const SystemFile file = load_system_file(flags.system);
  const Resolved r = resolve(flags, file);
  if (flags.format != "csv" && flags.format != "json" && flags.format != "text")
    throw InvalidArgument("--format must be text, csv or json");
  const LagrangianSystem sys = file.build();
  const int m = sys.dimension();
  const int rc = sys.constraint_count();

  std::map<std::string, double> thr = {{"antisymmetry", 0.0},       {"kahler_fd", 1e-6},   {"closedness", 1e-6},
                                       {"solve_consistency", 1e-10}, {"constraint", 1e-10}, {"el_residual", 1e-8},
                                       {"oracle", 1e-9},             {"energy_drift", 1e-6}, {"constraint_drift", 1e-8}};
  for (const auto& [k, v] : file.tolerances)
    if (thr.count(k)) thr[k] = v;
  if (flags.tol)
    for (auto& [k, v] : thr) v = *flags.tol;

  std::vector<EvalPoint> points{file.initial_state().point()};
  BoxSampler sampler(r.seed);
  for (int k = 0; k < r.samples; ++k) points.push_back(sampler.point(m));

  CheckLine anti{"antisymmetry", 0.0, thr["antisymmetry"], ""};
  CheckLine kfd{"kahler_fd", 0.0, thr["kahler_fd"], ""};
  CheckLine closed{"closedness", 0.0, thr["closedness"], ""};
  CheckLine solve{"solve_consistency", 0.0, thr["solve_consistency"], ""};
  CheckLine cons{"constraint", 0.0, thr["constraint"], ""};
  CheckLine el{"el_residual", 0.0, thr["el_residual"], ""};
  CheckLine oracle{"oracle", 0.0, thr["oracle"], ""};
  std::size_t solve_failures = 0;
  std::string first_failure;
  for (const auto& p : points) {
    try {
      const TwoForm k = sys.kahler_form().evaluate(p);
      anti.value = std::max(anti.value, antisymmetry_defect(k));
      kfd.value = std::max(kfd.value, kahler_fd_error(sys, p));
      closed.value = std::max(closed.value, kahler_closedness_fd(sys, p));
      const PhaseState s{0.0, p.z(), p.w()};
      const SemispraySolution sol = solve_semispray(sys, s);
      solve.value = std::max(solve.value, sol.residual_symplectic);
      cons.value = std::max(cons.value, sol.residual_constraints);
      for (const cplx v : el_residual(sys, s, sol)) el.value = std::max(el.value, std::abs(v));
      const SemispraySolution o = realify_and_solve(sys, s);
      const std::vector<cplx> a = sol.xi.packed(), b = o.xi.packed();
      for (std::size_t i = 0; i < a.size(); ++i) oracle.value = std::max(oracle.value, std::abs(a[i] - b[i]));
      for (std::size_t i = 0; i < sol.lambdas.size(); ++i)
        oracle.value = std::max(oracle.value, std::abs(sol.lambdas[i] - o.lambdas[i]));
    } catch (const Error& e) {
      if (solve_failures++ == 0) first_failure = solver_error_name(e) + ": " + e.what();
    }
  }
  if (solve_failures) {
    const std::string note = std::to_string(solve_failures) + " of " + std::to_string(points.size()) +
                             " states failed (" + first_failure + ")";
    for (CheckLine* c : {&solve, &cons, &el, &oracle}) c->note = note;
  }

  CheckLine drift{"energy_drift", 0.0, thr["energy_drift"], ""};
  CheckLine cdrift{"constraint_drift", 0.0, thr["constraint_drift"], ""};
  const double t1 = r.t1.value_or(kDefaultCheckT1);
  std::vector<cplx> lambdas;
  try {
    const Trajectory tr = integrate(sys, file.initial_state(), t1, r.dt);
    const DiagnosticsReport d = diagnostics(tr);
    drift.value = d.max_energy_drift;
    cdrift.value = d.max_constraint_residual;
    if (!tr.status.completed()) {
      const std::string note = status_name(tr.status.kind) + " at t = " + num(tr.status.time) +
                               (tr.status.error.empty() ? "" : " (" + tr.status.error + ")");
      drift.note = cdrift.note = note;
    }
    if (!tr.samples.empty()) lambdas = tr.samples.front().solution.lambdas;
  } catch (const Error& e) {
    drift.note = cdrift.note = e.what();
  }

  const std::vector<CheckLine> lines{anti, kfd, closed, solve, cons, el, oracle, drift, cdrift};
  const bool ok = std::all_of(lines.begin(), lines.end(), [](const CheckLine& c) { return c.pass(); });

  json j;
  j["command"] = "check";
  j["system"] = system_name(file);
  j["m"] = m;
  j["r"] = rc;
  j.update(provenance(r));
  j["parameters"]["t1"] = t1;
  json arr = json::array();
  for (const auto& c : lines) {
    json e{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass()}};
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(e);
  }
  j["checks"] = arr;
  if (rc > 0) {
    json mult = json::array();
    for (int a = 0; a < rc; ++a)
      mult.push_back({{"name", sys.constraints()[a].name},
                      {"initial", a < static_cast<int>(lambdas.size()) ? to_json(lambdas[a]) : json(nullptr)}});
    j["multipliers"] = mult;
  }
  j["result"] = ok ? "pass" : "fail";
  const std::string text = j.dump(2) + "\n";
  if (!flags.out.empty()) write_file(prepare_out(flags.out) / "check.json", text);

  if (flags.format == "json") {
    out << text;
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-20s %-14s %-14s %s\n", "check", "value", "threshold", "status");
    out << buf;
    for (const auto& c : lines) {
      std::snprintf(buf, sizeof buf, "%-20s %-14s %-14s %s", c.name.c_str(), short_num(c.value).c_str(),
                    short_num(c.threshold).c_str(), c.pass() ? "pass" : "FAIL");
      out << buf;
      if (!c.note.empty()) out << "  " << c.note;
      out << "\n";
    }
    if (rc > 0)
      for (int a = 0; a < rc; ++a) {
        out << "multiplier " << sys.constraints()[a].name << " at t = 0: ";
        if (a < static_cast<int>(lambdas.size()))
          out << cnum(lambdas[a]) << "\n";
        else
          out << "unavailable\n";
      }
    out << "result: " << (ok ? "pass" : "fail") << "\n";
  }
  return ok ? kSuccess : kRuntimeError;
}

// derive ---------------------------------------------------------------------

int cmd_derive(const Flags& flags, std::ostream& out) {
  const SystemFile file = load_system_file(flags.system);
  const LagrangianSystem sys = file.build();
  const int m = sys.dimension();
  const int n = 2 * m;
  const PhaseState s0 = file.initial_state();
  const TwoForm k = assemble_kahler_matrix(sys, s0);
  auto slot_name = [&](int p) { return "d" + Symbol::from_slot(p, m).name(); };

  json j;
  j["command"] = "derive";
  j["system"] = system_name(file);
  j["lagrangian"] = to_string(sys.lagrangian());
  json entries = json::array();
  std::vector<std::pair<int, int>> where;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const Expr e = sys.kahler_form()(p, q);
      if (e.is_zero()) continue;
      where.emplace_back(p, q);
      entries.push_back({{"row", slot_name(p)}, {"col", slot_name(q)}, {"expr", to_string(e)}, {"value", to_json(k(p, q))}});
    }
  j["kahler_form"] = entries;

  std::string failure;
  try {
    const SemispraySolution sol = solve_semispray(sys, s0);
    const OneForm de = energy_differential(sys, s0, sol.xi);
    json dej = json::array();
    for (int p = 0; p < n; ++p) dej.push_back({{"slot", slot_name(p)}, {"value", to_json(de[p])}});
    j["xi"] = to_json(sol.xi);
    j["lambdas"] = to_json(sol.lambdas);
    j["energy_differential"] = dej;
    const std::vector<cplx> res = el_residual(sys, s0, sol);
    json elj = json::array();
    for (int p = 0; p < n; ++p) {
      std::string rate;
      for (int q = 0; q < n; ++q) {
        const Expr h = sys.hessian(p, q);
        if (h.is_zero()) continue;
        if (!rate.empty()) rate += " + ";
        rate += "(" + to_string(h) + ")*xi" + std::to_string(q + 1);
      }
      std::string expr = "(" + to_string(sys.gradient()[p]) + ") " + (p < m ? "- i*(" : "+ i*(") +
                         (rate.empty() ? "0" : rate) + ")";
      for (int a = 0; a < sys.constraint_count(); ++a) {
        const Expr c = sys.constraints()[a].form[p];
        if (!c.is_zero()) expr += " - lambda_" + sys.constraints()[a].name + "*(" + to_string(c) + ")";
      }
      elj.push_back({{"equation", Symbol::from_slot(p, m).name()}, {"expr", expr}, {"value", to_json(res[p])}});
    }
    j["el_residual"] = elj;
  } catch (const Error& e) {
    failure = solver_error_name(e);
    j["error"] = {{"kind", failure}, {"message", e.what()}};
  }

  if (flags.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << "system: " << system_name(file) << "\nL = " << to_string(sys.lagrangian()) << "\n\n";
    out << "Phi_L = sum_{p<q} K(p,q) e^p ^ e^q, nonzero entries (expression; value at the initial state):\n";
    for (std::size_t i = 0; i < where.size(); ++i) {
      const auto [p, q] = where[i];
      out << "  K(" << slot_name(p) << ", " << slot_name(q) << ") = " << entries[i]["expr"].get<std::string>()
          << "  ;  " << cnum(k(p, q)) << "\n";
    }
    if (entries.empty()) out << "  (all entries vanish)\n";
    if (!failure.empty()) {
      out << "\nsolve failed: " << j["error"]["message"].get<std::string>() << "\n";
    } else {
      out << "\ndE_L at the initial state with the solved xi:\n";
      for (const auto& e : j["energy_differential"])
        out << "  " << e["slot"].get<std::string>() << ": "
            << cnum({e["value"][0].get<double>(), e["value"][1].get<double>()}) << "\n";
      out << "\nEuler-Lagrange residuals (xi1..xi" << n << " = solved components):\n";
      for (const auto& e : j["el_residual"])
        out << "  [" << e["equation"].get<std::string>() << "] " << e["expr"].get<std::string>() << " = "
            << cnum({e["value"][0].get<double>(), e["value"][1].get<double>()}) << "\n";
    }
  }
  return failure.empty() ? kSuccess : kRuntimeError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained complex Lagrangian mechanics on flat Kahler charts", "kahler"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--system", flags.system, "System definition file")->required();
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--format", flags.format, "Output format (csv, json; check/derive also text)");
  };
  auto add_numeric = [&](CLI::App* sub) {
    sub->add_option("--t1", flags.t1, "End time");
    sub->add_option("--dt", flags.dt, "Step size (default 1e-3)");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--tol", flags.tol, "Tolerance override");
    sub->add_option("--samples", flags.samples, "Number of random states (default 50)");
    sub->add_option("--seed", flags.seed, "Sampling seed (default 0)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Integrate a trajectory and write CSV/JSON output");
  add_common(simulate);
  add_numeric(simulate);
  CLI::App* classify = app.add_subcommand("classify", "Classify the constraints as holonomic or anholonomic");
  add_common(classify);
  add_sampling(classify);
  CLI::App* check = app.add_subcommand("check", "Run the invariant suite on a system");
  add_common(check);
  add_numeric(check);
  add_sampling(check);
  CLI::App* derive = app.add_subcommand("derive", "Print Phi_L, dE_L and the Euler-Lagrange residuals");
  add_common(derive);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "kahler: " << e.what() << "\n";
    return kInputError;
  }
  if (check->parsed() && flags.format == "csv" && !check->count("--format")) flags.format = "text";
  if (derive->parsed() && !derive->count("--format")) flags.format = "text";

  try {
    if (simulate->parsed()) return cmd_simulate(flags, out);
    if (classify->parsed()) return cmd_classify(flags, out);
    if (check->parsed()) return cmd_check(flags, out);
    if (derive->parsed()) return cmd_derive(flags, out);
  } catch (const SolveError& e) {
    err << "kahler: " << solver_error_name(e) << ": " << e.what() << "\n";
    return kRuntimeError;
  } catch (const EvaluationDomainError& e) {
    err << "kahler: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const RankDeficientConstraints& e) {
    err << "kahler: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const Error& e) {
    err << "kahler: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "kahler: internal error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kInputError;
}

}  // namespace kahler::cli
