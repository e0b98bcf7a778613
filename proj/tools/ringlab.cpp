// Command-line front door: simulate protocol runs, replay scenarios, run
// the verification suites, and emit the chain analyses.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "ringlab/analysis.hpp"
#include "ringlab/markov.hpp"
#include "ringlab/scenario.hpp"

using namespace ringlab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;   // assertion or verdict failure
constexpr int kExitUsage = 2;  // bad flags
constexpr int kExitResource = 3;

Protocol protocol_from_flags(const std::string& name, int n, int k, bool paper_width = false) {
  auto kind = protocol_kind_from(name);
  if (!kind) throw UsageError("unknown protocol: " + name);
  return make_protocol(*kind, n, k > 0 ? std::optional<int>(k) : std::nullopt, paper_width);
}

uint64_t pick_seed() {
  std::random_device rd;
  return (uint64_t(rd()) << 32) ^ rd();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << content;
}

int cmd_run(const std::string& proto_name, int n, int k, const std::string& sched_name,
            uint64_t seed, bool seed_given, uint64_t budget, const std::string& init_text,
            double p_correct, const std::string& out_path) {
  Protocol proto = protocol_from_flags(proto_name, n, k);
  auto mode = schedule_mode_from(sched_name);
  if (!mode) throw UsageError("unknown schedule: " + sched_name);
  if (*mode == ScheduleMode::CentralAdversary || *mode == ScheduleMode::FineAdversary)
    throw UsageError("adversary schedules are driven by scenario files (see verify scenarios)");

  if (!seed_given) seed = pick_seed();
  Schedule sched;
  sched.mode = *mode;
  sched.seed = seed;
  sched.p_correct = p_correct;

  Configuration init;
  if (init_text.empty()) {
    init = proto.initial_configuration();
  } else if (init_text == "random") {
    Rng rng(seed ^ 0xabcdef);
    init = random_configuration(proto, rng);
  } else {
    auto sections = parse_config_sections(init_text);
    if (!sections.x) throw UsageError("--init needs at least x=[..]");
    init = proto.configuration_from_counters(*sections.x, sections.regs, sections.pc);
  }

  Trace trace = run(proto, sched, init, budget);
  uint64_t steps = steps_to_legitimacy(proto, trace, {PredKind::ExactlyOnePrivileged});

  json report;
  report["version"] = kVersion;
  report["command"] = "run";
  report["protocol"] = to_string(proto.kind);
  report["n"] = proto.n;
  report["k"] = proto.K;
  report["schedule"] = to_string(sched.mode);
  report["seed"] = seed;
  report["budget"] = budget;
  report["p"] = p_correct;
  report["init"] = render(init);
  report["final"] = render(trace.final_config);
  report["events"] = trace.events.size();
  if (steps == kNever)
    report["steps_to_legitimacy"] = nullptr;
  else
    report["steps_to_legitimacy"] = steps;
  if (!out_path.empty()) {
    write_file(out_path, render(trace));
    report["trace"] = out_path;
  }
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify_lowerbound(int n, int k, const std::string& out_path) {
  Protocol proto = protocol_from_flags("dijkstra-central", n, k);
  LegitimacyPredicate pred{PredKind::ExactlyOnePrivileged};
  Verdict v = exhaustive_convergence(proto, pred);
  std::string cert = verdict_json(v);
  if (!out_path.empty()) write_file(out_path, cert + "\n");
  std::cout << cert << "\n";
  if (v.kind != Verdict::Lasso) {
    std::cerr << "expected an illegitimate cycle, protocol converges\n";
    return kExitFail;
  }
  validate_lasso(proto, pred, v);
  std::cerr << "certificate validated: " << v.cycle.size() << "-cycle, every node illegitimate\n";
  return kExitOk;
}

int cmd_verify_exhaustive(const std::string& proto_name, int n, int k,
                          const std::string& out_path) {
  Protocol proto = protocol_from_flags(proto_name, n, k);
  Verdict v = exhaustive_convergence(proto, {PredKind::ExactlyOnePrivileged});
  std::string cert = verdict_json(v);
  if (!out_path.empty()) write_file(out_path, cert + "\n");
  std::cout << cert << "\n";
  return v.kind == Verdict::Converges ? kExitOk : kExitFail;
}

int cmd_verify_scenarios(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".scn") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .scn files under " + dir);
  bool all_ok = true;
  for (const std::string& path : files) {
    Scenario sc = load_scenario(path);
    ReplayResult r = replay_scenario(sc);
    std::cout << (r.ok() ? "[pass] " : "[FAIL] ") << sc.name << " (" << r.assertions
              << " assertions)\n";
    for (const std::string& f : r.failures) std::cout << "       " << f << "\n";
    all_ok = all_ok && r.ok();
  }
  return all_ok ? kExitOk : kExitFail;
}

int cmd_verify_closure(const std::string& proto_name, int n, int trials, uint64_t budget,
                       uint64_t seed, int jobs) {
  Protocol proto = protocol_from_flags(proto_name, n, 0);
  ClosureReport r =
      closure_check(proto, {PredKind::ExactlyOnePrivileged}, trials, budget, seed, jobs);
  json report;
  report["version"] = kVersion;
  report["command"] = "verify closure";
  report["protocol"] = to_string(proto.kind);
  report["n"] = n;
  report["trials"] = r.trials;
  report["budget"] = budget;
  report["seed"] = seed;
  report["violations"] = r.violations;
  if (!r.ok()) report["first_violation"] = r.detail;
  std::cout << report.dump(2) << "\n";
  return r.ok() ? kExitOk : kExitFail;
}

int cmd_markov(int n, const std::string& p_text, const std::string& emit, bool check_paper,
               bool as_json, uint64_t steps, uint64_t burn_in, uint64_t seed, bool seed_given,
               const std::string& out_path) {
  Rational p = Rational::parse(p_text);
  std::ostringstream out;
  json report;
  report["version"] = kVersion;
  report["command"] = "markov";
  report["n"] = n;
  report["p"] = p.str();
  int exit_code = kExitOk;

  if (emit == "matrix") {
    TransitionMatrix mat = build_transition_matrix(n, p);
    json rows = json::array();
    for (int i = 0; i < mat.order; ++i) {
      json row = json::array();
      for (int j = 0; j < mat.order; ++j) {
        out << (j ? "," : "") << mat.at(i, j).str();
        row.push_back(mat.at(i, j).str());
      }
      out << "\n";
      rows.push_back(row);
    }
    report["matrix"] = rows;
  } else if (emit == "equilibrium" || emit == "mass") {
    TransitionMatrix mat = build_transition_matrix(n, p);
    EquilibriumVector vec = equilibrium(mat);
    report["exact"] = vec.exact;
    report["residual"] = vec.residual;
    if (emit == "equilibrium") {
      for (int s = 0; s < mat.order; ++s) {
        std::string state;
        for (int b = n - 1; b >= 0; --b) state += char('0' + ((s >> b) & 1));
        out << state << "," << vec.probs[size_t(s)].str() << "\n";
      }
      json probs = json::array();
      for (const Rational& x : vec.probs) probs.push_back(x.str());
      report["equilibrium"] = probs;
    } else {
      Rational mass = legitimate_mass(vec, n);
      out << "mass," << mass.str() << "\n";
      report["mass"] = mass.str();
    }
    if (check_paper) {
      if (n != 3) throw UsageError("--check-paper applies to the 3-processor table");
      auto ref = reference_equilibrium_3ring(p);
      if (!ref) throw UsageError("no tabulated row for p=" + p.str());
      bool match = vec.exact && vec.probs == ref->probs;
      report["check"] = match ? "pass" : "fail";
      if (!ref->note.empty()) {
        report["note"] = ref->note;
        std::cerr << "note: " << ref->note << "\n";
      }
      std::cerr << (match ? "check: pass" : "check: FAIL") << "\n";
      if (!match) exit_code = kExitFail;
    }
  } else if (emit == "empirical") {
    if (!seed_given) seed = pick_seed();
    double fraction = empirical_legit_fraction(n, p.to_double(), steps, burn_in, seed);
    out << p.str() << "," << steps << "," << fraction << "\n";
    report["seed"] = seed;
    report["steps"] = steps;
    report["burn_in"] = burn_in;
    report["fraction"] = fraction;
  } else {
    throw UsageError("--emit wants matrix, equilibrium, mass or empirical");
  }

  std::string text = as_json ? report.dump(2) + "\n" : out.str();
  if (!out_path.empty())
    write_file(out_path, text);
  else
    std::cout << text;
  if (as_json && !out_path.empty()) std::cout << report.dump(2) << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"token-ring stabilization laboratory"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "simulate one execution");
  std::string run_proto, run_sched = "fine-random", run_init, run_out;
  int run_n = 3, run_k = 0;
  uint64_t run_seed = 0, run_budget = 10000;
  double run_p = 1.0;
  run_cmd->add_option("--protocol", run_proto, "protocol kind")->required();
  run_cmd->add_option("--n", run_n, "ring size")->required();
  run_cmd->add_option("--k", run_k, "label count (central daemon only)");
  run_cmd->add_option("--schedule", run_sched, "schedule mode");
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "RNG seed");
  run_cmd->add_option("--budget", run_budget, "micro-step budget");
  run_cmd->add_option("--init", run_init, "initial configuration rendering, or 'random'");
  run_cmd->add_option("--p", run_p, "read correctness under the fair daemon");
  run_cmd->add_option("--out", run_out, "write the canonical trace here");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "verification suites");
  verify_cmd->require_subcommand(1);
  auto* lb_cmd = verify_cmd->add_subcommand("lowerbound", "find an illegitimate cycle");
  int lb_n = 5, lb_k = 3;
  std::string lb_out;
  lb_cmd->add_option("--n", lb_n, "ring size");
  lb_cmd->add_option("--k", lb_k, "label count");
  lb_cmd->add_option("--out", lb_out, "write the certificate JSON here");

  auto* ce_cmd = verify_cmd->add_subcommand("converge-exhaustive",
                                            "decide convergence over the whole state space");
  std::string ce_proto = "dijkstra-central", ce_out;
  int ce_n = 3, ce_k = 0;
  ce_cmd->add_option("--protocol", ce_proto, "dijkstra-central or dijkstra-rw");
  ce_cmd->add_option("--n", ce_n, "ring size")->required();
  ce_cmd->add_option("--k", ce_k, "label count (central daemon only)");
  ce_cmd->add_option("--out", ce_out, "write the verdict JSON here");

  auto* sc_cmd = verify_cmd->add_subcommand("scenarios", "replay every bundled scenario");
  std::string sc_dir = "scenarios";
  sc_cmd->add_option("--dir", sc_dir, "scenario directory");

  auto* cl_cmd = verify_cmd->add_subcommand("closure", "randomized closure trials");
  std::string cl_proto;
  int cl_n = 3, cl_trials = 1000, cl_jobs = 1;
  uint64_t cl_budget = 10000, cl_seed = 0;
  cl_cmd->add_option("--protocol", cl_proto, "protocol kind")->required();
  cl_cmd->add_option("--n", cl_n, "ring size")->required();
  cl_cmd->add_option("--trials", cl_trials, "trial count");
  cl_cmd->add_option("--budget", cl_budget, "micro-steps per trial");
  auto* cl_seed_opt = cl_cmd->add_option("--seed", cl_seed, "RNG seed (required)");
  cl_cmd->add_option("--jobs", cl_jobs, "parallel workers");

  // markov
  auto* mk_cmd = app.add_subcommand("markov", "binary-ring chain analysis");
  int mk_n = 3;
  std::string mk_p = "1", mk_emit = "equilibrium", mk_out;
  bool mk_check = false, mk_json = false;
  uint64_t mk_steps = 1000000, mk_burn = 0, mk_seed = 0;
  mk_cmd->add_option("--n", mk_n, "ring size");
  mk_cmd->add_option("--p", mk_p, "read correctness, fraction or decimal");
  mk_cmd->add_option("--emit", mk_emit, "matrix | equilibrium | mass | empirical");
  mk_cmd->add_flag("--check-paper", mk_check, "compare against the published table");
  mk_cmd->add_flag("--json", mk_json, "emit the JSON report instead of CSV");
  mk_cmd->add_option("--steps", mk_steps, "empirical: activation count");
  mk_cmd->add_option("--burn-in", mk_burn, "empirical: activations to discard");
  auto* mk_seed_opt = mk_cmd->add_option("--seed", mk_seed, "empirical: RNG seed");
  mk_cmd->add_option("--out", mk_out, "write output here");

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed())
      return cmd_run(run_proto, run_n, run_k, run_sched, run_seed, run_seed_opt->count() > 0,
                     run_budget, run_init, run_p, run_out);
    if (lb_cmd->parsed()) return cmd_verify_lowerbound(lb_n, lb_k, lb_out);
    if (ce_cmd->parsed()) return cmd_verify_exhaustive(ce_proto, ce_n, ce_k, ce_out);
    if (sc_cmd->parsed()) return cmd_verify_scenarios(sc_dir);
    if (cl_cmd->parsed()) {
      if (cl_seed_opt->count() == 0)
        throw UsageError("verify closure needs --seed for reproducibility");
      return cmd_verify_closure(cl_proto, cl_n, cl_trials, cl_budget, cl_seed, cl_jobs);
    }
    if (mk_cmd->parsed()) {
      if (mk_burn == 0) mk_burn = uint64_t(10) * (uint64_t(1) << mk_n);
      return cmd_markov(mk_n, mk_p, mk_emit, mk_check, mk_json, mk_steps, mk_burn, mk_seed,
                        mk_seed_opt->count() > 0, mk_out);
    }
    throw UsageError("no subcommand");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
