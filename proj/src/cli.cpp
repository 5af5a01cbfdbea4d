#include "llab/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "llab/errors.hpp"
#include "llab/report.hpp"

namespace llab {

namespace {

struct RunConfig {
  std::string command;
  std::string spec_path;
  std::string omega_path;
  std::string format = "text";
  std::size_t max_dim = 12;
  std::uint64_t seed = 1;
  std::string fault;
};

std::string read_file(const std::string& path, const char* what) {
  if (path.empty()) throw InputError(std::string("missing --") + what + " FILE");
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

JordanSpec load_spec(const RunConfig& cfg) {
  JordanSpec spec = parse_spec(read_file(cfg.spec_path, "spec"));
  if (spec_dimension(spec) > cfg.max_dim)
    throw InputError("spec dimension " + std::to_string(spec_dimension(spec)) + " exceeds --max-dim " +
                     std::to_string(cfg.max_dim));
  return spec;
}

SymplecticForm load_omega(const RunConfig& cfg, const Algebra& algebra) {
  if (cfg.omega_path.empty()) return default_symplectic(algebra);
  Json j;
  try {
    j = Json::parse(read_file(cfg.omega_path, "omega"));
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("omega") || !j["omega"].is_string())
    throw InputError("omega file needs {\"omega\": \"f1^f2 + ...\"}");
  KForm form = parse_form(j["omega"].get<std::string>(), algebra.layout().labels);
  return validate_symplectic(algebra, form, Provenance::user_supplied);
}

void emit(const RunConfig& cfg, std::ostream& out, const Json& report, std::string (*text)(const Json&)) {
  if (cfg.format == "json")
    out << report.dump(2) << "\n";
  else
    out << text(report);
}

int run_command(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "lattice") {
    LatticeCertificate cert = certify(parse_lattice_spec(read_file(cfg.spec_path, "spec")));
    emit(cfg, out, lattice_report(cert), lattice_text);
    return cert.ok() ? exit_ok : exit_invariant;
  }
  if (cfg.command == "verify") {
    SweepOptions opt;
    opt.max_dim = cfg.max_dim;
    opt.conformance_max_dim = cfg.max_dim;
    opt.seed = cfg.seed;
    if (cfg.fault == "sign") opt.fault = Fault::differential_sign;
    SweepSummary summary;
    if (!cfg.spec_path.empty()) {
      // A single spec instead of the sweep.
      add_result(summary, verify_spec(load_spec(cfg), opt, opt.seed));
    } else {
      summary = run_sweep(opt);
    }
    emit(cfg, out, sweep_report(opt, summary), sweep_text);
    if (summary.ok()) return exit_ok;
    return summary.internal_error || summary.invariant_failure ? exit_invariant : exit_conformance;
  }

  CochainComplex complex{Algebra(load_spec(cfg))};
  if (cfg.command == "betti") {
    emit(cfg, out, betti_report(complex), betti_text);
    return exit_ok;
  }
  if (cfg.command == "h2") {
    H2Decomposition h2 = verify_h2_structure(complex);
    emit(cfg, out, h2_report(complex, h2), h2_text);
    return h2.ok() ? exit_ok : exit_conformance;
  }
  if (cfg.command == "circuits") {
    CircuitSummary s = collect_circuits(complex);
    emit(cfg, out, circuits_report(complex, s), circuits_text);
    return s.ok() ? exit_ok : exit_conformance;
  }
  // lefschetz
  SymplecticForm omega = load_omega(cfg, complex.algebra());
  LefschetzReport report = hard_lefschetz_report(complex, omega);
  emit(cfg, out, lefschetz_json(complex, omega, report), lefschetz_text);
  return report.agree ? exit_ok : exit_conformance;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Cohomology and hard-Lefschetz checks for almost abelian Lie algebras", "llab"};
  app.add_option("command", cfg.command, "betti | h2 | lefschetz | circuits | lattice | verify")
      ->required()
      ->check(CLI::IsMember({"betti", "h2", "lefschetz", "circuits", "lattice", "verify"}));
  app.add_option("--spec", cfg.spec_path, "JSON spec file (Jordan spec, or lattice spec for `lattice`)");
  app.add_option("--omega", cfg.omega_path, "JSON file {\"omega\": \"f1^f2 + x1^x2\"} for `lefschetz`");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-dim", cfg.max_dim, "Dimension cap (at most 32)")->check(CLI::Range(2, 32));
  app.add_option("--seed", cfg.seed, "Seed for the exact perturbations sampled by `verify`");
  app.add_option("--inject-fault", cfg.fault)->group("")->check(CLI::IsMember({"sign"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "llab: " << e.what() << "\n";
    return exit_input;
  }
  try {
    return run_command(cfg, out);
  } catch (const InputError& e) {
    err << "llab: input error: " << e.what() << "\n";
    return exit_input;
  } catch (const DimensionError& e) {
    err << "llab: input error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    err << "llab: internal invariant violation: " << e.what() << "\n";
    return exit_invariant;
  }
}

}  // namespace llab
