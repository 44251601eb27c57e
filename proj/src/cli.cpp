#include "decnorm/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "decnorm/errors.hpp"
#include "decnorm/json_io.hpp"
#include "decnorm/verify.hpp"

namespace decnorm {
namespace {

struct Options {
  int level = 1;
  double tol = 1e-6;
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iter = 100;
  std::uint64_t seed = 1;
  int k_max = 0;
  int trials = 0;
  int dims = 4;
  int workers = 1;
  int first_trial = 0;
};

struct Invocation {
  std::string command;
  std::string subtarget;
  std::string input_path;
  json input;  // null when the command takes no input
  Options opts;
};

const std::vector<std::string> kNormTargets = {"dec", "cb", "delta", "Delta", "inj"};
const std::vector<std::string> kConeTargets = {"delta", "Delta", "delta-cone", "Delta-cone"};

json to_json(const Options& o) {
  return {{"level", o.level},       {"tol", o.tol},       {"gap_tol", o.gap_tol}, {"feas_tol", o.feas_tol},
          {"max_iter", o.max_iter}, {"seed", o.seed},     {"k_max", o.k_max},     {"trials", o.trials},
          {"dims", o.dims},         {"workers", o.workers}, {"first_trial", o.first_trial}};
}

json to_json(const Invocation& inv) {
  return {{"command", inv.command},
          {"subtarget", inv.subtarget},
          {"input_path", inv.input_path},
          {"input", inv.input},
          {"options", to_json(inv.opts)}};
}

template <class T>
void read_opt(const json& o, const char* key, T& v) {
  if (!o.contains(key)) return;
  try {
    v = o.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("invocation.options.") + key + ": wrong type");
  }
}

Invocation invocation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("command") || !j.at("command").is_string())
    throw UsageError("replay: invocation.command missing");
  Invocation inv;
  inv.command = j.at("command").get<std::string>();
  if (j.contains("subtarget") && j.at("subtarget").is_string()) inv.subtarget = j.at("subtarget").get<std::string>();
  if (j.contains("input_path") && j.at("input_path").is_string()) inv.input_path = j.at("input_path").get<std::string>();
  if (j.contains("input")) inv.input = j.at("input");
  if (j.contains("options")) {
    const json& o = j.at("options");
    read_opt(o, "level", inv.opts.level);
    read_opt(o, "tol", inv.opts.tol);
    read_opt(o, "gap_tol", inv.opts.gap_tol);
    read_opt(o, "feas_tol", inv.opts.feas_tol);
    read_opt(o, "max_iter", inv.opts.max_iter);
    read_opt(o, "seed", inv.opts.seed);
    read_opt(o, "k_max", inv.opts.k_max);
    read_opt(o, "trials", inv.opts.trials);
    read_opt(o, "dims", inv.opts.dims);
    read_opt(o, "workers", inv.opts.workers);
    read_opt(o, "first_trial", inv.opts.first_trial);
  }
  return inv;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(path + ": cannot open file");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

SdpOptions sdp_options(const Options& o) {
  SdpOptions s;
  s.gap_tol = o.gap_tol;
  s.feas_tol = o.feas_tol;
  s.max_iter = o.max_iter;
  return s;
}

json solver_json(const SolverInfo& s) {
  return {{"iterations", s.iterations}, {"gap", s.gap}, {"status", s.status}};
}

json run_norm(const Invocation& inv) {
  const Options& o = inv.opts;
  const std::string& t = inv.subtarget;
  if (t == "dec" || t == "cb") {
    const LinMap map = linmap_from_json(inv.input);
    if (t == "dec") {
      DecOptions d;
      d.sdp = sdp_options(o);
      const DecResult r = dec_norm(map, o.level, d);
      return {{"value", r.value}, {"level", o.level}, {"witness", to_json(r.witness)}, {"solver", solver_json(r.solver)}};
    }
    if (o.level != 1) throw UsageError("--level applies to norm dec only");
    CbOptions c;
    c.sdp = sdp_options(o);
    c.seed = o.seed;
    const CbResult r = cb_norm_report(map, c);
    return {{"value", r.value}, {"lower_bound", r.lower_bound}, {"solver", solver_json(r.solver)}};
  }
  if (o.level != 1) throw UsageError("--level applies to norm dec only; tensors carry their own level");
  const TensorElement z = tensor_from_json(inv.input);
  if (t == "inj") return {{"value", inj_norm(z)}};
  if (t == "delta") {
    DecOptions d;
    d.sdp = sdp_options(o);
    const DecResult r = delta_norm(z, d);
    return {{"value", r.value}, {"witness", to_json(r.witness)}, {"solver", solver_json(r.solver)}};
  }
  DeltaOptions d;
  d.sdp = sdp_options(o);
  d.seed = o.seed;
  const DeltaBracket r = Delta_norm(z, d);
  json out = {{"value", r.value_upper},
              {"value_lower", r.value_lower},
              {"value_upper", r.value_upper},
              {"solver", solver_json(r.solver)}};
  if (r.warning) out["warning"] = "alternation did not settle; the bracket may be loose";
  return out;
}

json run_cone(const Invocation& inv) {
  const TensorElement z = tensor_from_json(inv.input);
  if (inv.subtarget == "delta") {
    return {{"member", cone_member_delta(z, inv.opts.tol)}, {"min_choi_eigenvalue", choi_min_eig(associated_map(z))}};
  }
  const DeltaConeResult r = cone_member_Delta(z, inv.opts.tol, inv.opts.k_max);
  json out = {{"member", r.member}, {"k_max_limited", r.k_max_limited}};
  out["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  return out;
}

json run_decompose(const Invocation& inv) {
  DecOptions d;
  d.sdp = sdp_options(inv.opts);
  const DecWitness w = decompose(linmap_from_json(inv.input), d);
  return {{"value", w.value}, {"witness", to_json(w)}};
}

SuiteReport run_verify(const Invocation& inv) {
  SuiteConfig cfg;
  cfg.dims = inv.opts.dims;
  cfg.max_level = inv.opts.level < 1 ? 1 : inv.opts.level;
  cfg.trials = inv.opts.trials;
  cfg.seed = inv.opts.seed;
  cfg.workers = inv.opts.workers;
  cfg.first_trial = inv.opts.first_trial;
  return run_suite(inv.subtarget, cfg);
}

struct Outcome {
  json result;
  bool solver_failed = false;
  std::optional<SuiteReport> suite;
};

Outcome execute(const Invocation& inv) {
  const bool needs_input = inv.command != "verify";
  if (needs_input && inv.input.is_null()) throw UsageError(inv.command + ": --input is required");
  Outcome out;
  if (inv.command == "norm") {
    out.result = run_norm(inv);
  } else if (inv.command == "cone-member") {
    out.result = run_cone(inv);
  } else if (inv.command == "decompose") {
    out.result = run_decompose(inv);
  } else if (inv.command == "verify") {
    out.suite = run_verify(inv);
    out.result = to_json(*out.suite);
  } else if (inv.command == "solve-sdp") {
    const SdpProblem p = sdp_problem_from_json(inv.input);
    const SdpSolution s = solve(p, sdp_options(inv.opts));
    const SdpCertificate c = check_certificate(p, s);
    out.result = {{"solution", to_json(s)},
                  {"certificate", {{"primal_feas", c.primal_feas}, {"dual_feas", c.dual_feas}, {"gap", c.gap}}}};
    out.solver_failed = s.status == SdpStatus::max_iter;
  } else {
    throw UsageError("unknown command \"" + inv.command + "\"");
  }
  return out;
}

json make_report(const Invocation& inv, const json& result) {
  return {{"schema", kReportSchema},
          {"command", inv.command},
          {"subtarget", inv.subtarget},
          {"invocation", to_json(inv)},
          {"seed", inv.opts.seed},
          {"result", result}};
}

std::string scalar_text(const json& v) {
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(12) << v.get<double>();
    return os.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_table(std::ostream& out, const json& report) {
  out << "command    " << report.at("command").get<std::string>();
  if (!report.at("subtarget").get<std::string>().empty()) out << " " << report.at("subtarget").get<std::string>();
  out << "\n";
  const json& r = report.at("result");
  auto emit = [&](const std::string& prefix, const json& obj) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it->is_primitive()) out << std::left << std::setw(24) << (prefix + it.key()) << scalar_text(*it) << "\n";
    }
  };
  emit("", r);
  for (auto it = r.begin(); it != r.end(); ++it)
    if (it->is_object() && (it.key() == "solver" || it.key() == "certificate" || it.key() == "solution" ||
                             it.key() == "witness"))
      emit(it.key() + ".", *it);
  if (report.contains("replay")) emit("replay.", report.at("replay"));
}

void write_repros(const std::string& dir, const SuiteReport& rep) {
  if (dir.empty() || rep.failures.empty()) return;
  std::filesystem::create_directories(dir);
  for (const auto& f : rep.failures) {
    const std::string path = dir + "/" + rep.suite + "-trial" + std::to_string(f.trial) + "-" + f.quantity + ".json";
    std::ofstream os(path);
    if (!os) throw UsageError(path + ": cannot write repro file");
    os << f.repro.dump(2) << "\n";
  }
}

/// A verify repro file reruns exactly one trial with the recorded configuration.
Invocation invocation_from_repro(const json& j) {
  Invocation inv;
  inv.command = "verify";
  inv.subtarget = j.at("suite").get<std::string>();
  const json& c = j.at("config");
  read_opt(c, "dims", inv.opts.dims);
  read_opt(c, "max_level", inv.opts.level);
  read_opt(c, "seed", inv.opts.seed);
  inv.opts.trials = 1;
  inv.opts.first_trial = j.at("trial").get<int>();
  return inv;
}

int emit(std::ostream& out, const json& report, const std::string& format, const std::optional<SuiteReport>& suite) {
  if (format == "table") {
    if (suite) {
      out << format_table(*suite);
      if (report.contains("replay")) {
        for (const char* k : {"matches", "reproduced"})
          if (report.at("replay").contains(k)) out << "replay." << k << "  " << report.at("replay").at(k).dump() << "\n";
      }
    } else {
      print_table(out, report);
    }
  } else {
    out << report.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decomposable and tensor norms over finite-dimensional C*-algebras", "decnorm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "decnorm 1.0");

  Options opts;
  if (const char* env = std::getenv("DECNORM_SEED")) {
    try {
      opts.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "usage error: DECNORM_SEED must be a non-negative integer\n";
      return 1;
    }
  }
  std::string subtarget;
  std::string input_path;
  std::string output = "json";
  std::string replay_path;
  std::string repro_dir;

  auto common = [&](CLI::App* sub, bool solver_flags) {
    sub->add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
    sub->add_option("--seed", opts.seed, "Seed for all randomness (env DECNORM_SEED overrides the default)")
        ->capture_default_str();
    sub->add_option("--replay", replay_path, "Rerun the invocation stored in a report or repro file and compare");
    if (solver_flags) {
      sub->add_option("--gap-tol", opts.gap_tol, "SDP duality-gap tolerance")->capture_default_str();
      sub->add_option("--feas-tol", opts.feas_tol, "SDP feasibility tolerance")->capture_default_str();
      sub->add_option("--max-iter", opts.max_iter, "SDP iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
    }
  };
  auto input_flag = [&](CLI::App* sub) {
    sub->add_option("--input", input_path, "JSON input file")->check(CLI::ExistingFile);
  };

  CLI::App* norm = app.add_subcommand("norm", "Compute dec, cb, delta, Delta or inj norms");
  norm->add_option("target", subtarget, "dec | cb | delta | Delta | inj")->check(CLI::IsMember(kNormTargets));
  input_flag(norm);
  norm->add_option("--level", opts.level, "Amplification level for dec")->capture_default_str()->check(CLI::PositiveNumber);
  common(norm, true);

  CLI::App* cone = app.add_subcommand("cone-member", "Test membership in the delta or Delta positive cone");
  cone->add_option("target", subtarget, "delta | Delta")->check(CLI::IsMember(kConeTargets));
  input_flag(cone);
  cone->add_option("--tol", opts.tol, "Membership tolerance")->capture_default_str();
  cone->add_option("--k-max", opts.k_max, "Factorization size cap; 0 means dim(source)*dim(target)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  common(cone, false);

  CLI::App* dec = app.add_subcommand("decompose", "Decompose a map as a corner of a cp block map");
  input_flag(dec);
  common(dec, true);

  CLI::App* ver = app.add_subcommand("verify", "Run a property suite");
  ver->add_option("suite", subtarget, "Suite name")->check(CLI::IsMember(suite_names()));
  ver->add_option("--trials", opts.trials, "Trials; 0 selects the suite default")->capture_default_str()->check(CLI::NonNegativeNumber);
  ver->add_option("--dims", opts.dims, "Cap on leg sides")->capture_default_str()->check(CLI::PositiveNumber);
  ver->add_option("--level", opts.level, "Maximum matrix level")->capture_default_str()->check(CLI::PositiveNumber);
  ver->add_option("--workers", opts.workers, "Parallel trial workers")->capture_default_str()->check(CLI::PositiveNumber);
  ver->add_option("--repro-dir", repro_dir, "Write one repro file per failure into this directory");
  common(ver, false);

  CLI::App* sdp = app.add_subcommand("solve-sdp", "Solve an SDP given in JSON");
  input_flag(sdp);
  common(sdp, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (subtarget == "delta-cone" || subtarget == "Delta-cone") subtarget.resize(5);
  Invocation inv;
  inv.command = chosen->get_name();
  inv.subtarget = subtarget;
  inv.input_path = input_path;
  inv.opts = opts;

  try {
    json replayed;  // the report being replayed, if any
    if (!replay_path.empty()) {
      const json src = read_json_file(replay_path);
      if (src.contains("invocation")) {
        replayed = src;
        inv = invocation_from_json(src.at("invocation"));
      } else if (src.contains("suite") && src.contains("trial") && src.contains("config")) {
        inv = invocation_from_repro(src);
      } else {
        throw UsageError(replay_path + ": neither a report nor a repro file");
      }
      if (inv.command != chosen->get_name())
        throw UsageError(replay_path + ": recorded command is \"" + inv.command + "\", not \"" + chosen->get_name() + "\"");
    } else {
      if (inv.command == "norm" || inv.command == "cone-member" || inv.command == "verify") {
        if (subtarget.empty()) throw UsageError(inv.command + ": missing target");
      }
      if (!input_path.empty()) inv.input = read_json_file(input_path);
    }

    Outcome res = execute(inv);
    json report = make_report(inv, res.result);
    if (!replay_path.empty()) {
      json rep = {{"source", replay_path}};
      if (!replayed.is_null()) {
        rep["matches"] = replayed.contains("result") && replayed.at("result") == res.result;
      } else {
        rep["reproduced"] = res.suite && !res.suite->failures.empty();
      }
      report["replay"] = rep;
    }
    if (res.suite) write_repros(repro_dir, *res.suite);
    if (res.solver_failed) {
      err << "solver failure: iteration limit reached before the requested gap\n";
      out << report.dump(2) << "\n";
      return 2;
    }
    emit(out, report, output, res.suite);
    return 0;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << "\n";
    const json diag = {{"schema", kReportSchema},
                       {"command", inv.command},
                       {"subtarget", inv.subtarget},
                       {"invocation", to_json(inv)},
                       {"seed", inv.opts.seed},
                       {"error", {{"kind", "solver-failure"},
                                  {"message", e.what()},
                                  {"iteration", e.iteration()},
                                  {"residual", e.residual()}}}};
    out << diag.dump(2) << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace decnorm
