#include <doctest.h>

#include <set>
#include <sstream>

#include "llab/cli.hpp"
#include "llab/report.hpp"
#include "llab/sweep.hpp"

using namespace llab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "llab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(LLAB_TEST_DATA) + "/" + name; }

}  // namespace

TEST_SUITE("sweep_cli") {

TEST_CASE("enumeration counts") {
  auto specs = enumerate_specs(12);
  std::map<std::size_t, std::size_t> by_dim;
  std::set<std::string> seen;
  for (const auto& s : specs) {
    ++by_dim[spec_dimension(s)];
    CHECK(s.a == 0);
    CHECK(validate_spectrum(s).admissible);
    CHECK(Algebra(s).is_unimodular());
    CHECK(seen.insert(spec_json(s).dump()).second);
  }
  CHECK(by_dim == std::map<std::size_t, std::size_t>{{2, 1}, {4, 7}, {6, 29}, {8, 98}, {10, 287}, {12, 764}});
  CHECK(enumerate_specs(6).size() == 37);
  CHECK(enumerate_specs(10).size() == 422);
}

TEST_CASE("single-spec verification and fault injection") {
  SweepOptions opt;
  SpecResult ok = verify_spec(single_double_block(2), opt, 3);
  CHECK(ok.passed());
  CHECK(ok.checks.size() >= 8);
  opt.fault = Fault::differential_sign;
  SpecResult bad = verify_spec(single_double_block(2), opt, 3);
  CHECK_FALSE(bad.passed());
  SweepSummary s;
  add_result(s, bad);
  CHECK(s.invariant_failure);
  CHECK_FALSE(s.conformance_mismatch);
  CHECK_FALSE(s.ok());
}

TEST_CASE("sweep to dimension 6 is deterministic") {
  SweepOptions opt;
  opt.max_dim = 6;
  opt.conformance_max_dim = 6;
  opt.perturbation_max_dim = 6;
  opt.threads = 2;
  SweepSummary a = run_sweep(opt);
  CHECK(a.ok());
  CHECK(a.specs_checked == 37);
  opt.threads = 1;
  SweepSummary b = run_sweep(opt);
  CHECK(sweep_report(opt, a).dump() == sweep_report(opt, b).dump());
  opt.fault = Fault::differential_sign;
  SweepSummary f = run_sweep(opt);
  // The fault flips an entry of d on 1-forms, so only abelian specs escape it.
  std::size_t nonabelian = 0;
  for (const auto& spec : enumerate_specs(6)) nonabelian += !Algebra(spec).differential(1).is_zero();
  CHECK(f.failures.size() == nonabelian);
  CHECK(f.invariant_failure);
  opt.max_dim = 40;
  CHECK_THROWS(run_sweep(opt));
}

TEST_CASE("cli exit codes") {
  CHECK(cli({"betti", "--spec", data("abelian6.json")}).code == exit_ok);
  CHECK(cli({"betti", "--spec", data("malformed.json")}).code == exit_input);
  CHECK(cli({"betti", "--spec", data("missing.json")}).code == exit_input);
  CHECK(cli({"betti"}).code == exit_input);
  CHECK(cli({"nonsense"}).code == exit_input);
  CHECK(cli({"betti", "--spec", data("abelian6.json"), "--max-dim", "4"}).code == exit_input);
  CHECK(cli({"betti", "--spec", data("abelian6.json"), "--max-dim", "40"}).code == exit_input);
  CHECK(cli({"--help"}).code == exit_ok);
  CHECK(cli({"h2", "--spec", data("double_j2.json")}).code == exit_ok);
  CHECK(cli({"circuits", "--spec", data("double_j2.json")}).code == exit_ok);
  CHECK(cli({"lefschetz", "--spec", data("inadmissible.json")}).code == exit_input);
  CHECK(cli({"lefschetz", "--spec", data("double_j2.json"), "--omega", data("omega_not_closed.json")}).code == exit_input);
  CHECK(cli({"lattice", "--spec", data("lattice_ii.json")}).code == exit_ok);
  CHECK(cli({"lattice", "--spec", data("lattice_invalid.json")}).code == exit_input);
  CHECK(cli({"verify", "--max-dim", "2"}).code == exit_ok);
  CHECK(cli({"verify", "--spec", data("double_j2.json"), "--inject-fault", "sign"}).code == exit_invariant);
}

TEST_CASE("betti output") {
  Run r = cli({"betti", "--spec", data("abelian6.json"), "--format", "json"});
  REQUIRE(r.code == exit_ok);
  Json j = Json::parse(r.out);
  CHECK(j["betti"] == Json::parse("[1, 6, 15, 20, 15, 6, 1]"));
  CHECK(j["dimension"] == 6);
  Run d = cli({"betti", "--spec", data("double_j2.json"), "--format", "json"});
  CHECK(Json::parse(d.out)["betti"] == Json::parse("[1, 2, 3, 4, 3, 2, 1]"));
  CHECK(cli({"betti", "--spec", data("double_j2.json")}).out.find("b_k") != std::string::npos);
}

TEST_CASE("json reports round-trip byte for byte") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"betti", "--spec", data("double_j2.json")},
           {"h2", "--spec", data("double_j2.json")},
           {"circuits", "--spec", data("double_j2.json")},
           {"lefschetz", "--spec", data("double_j2.json")},
           {"lefschetz", "--spec", data("j2_zero.json")},
           {"lattice", "--spec", data("lattice_ii.json")},
           {"verify", "--max-dim", "4"}}) {
    auto a = args;
    a.insert(a.end(), {"--format", "json"});
    Run r = cli(a);
    CHECK(r.code == exit_ok);
    CHECK(Json::parse(r.out).dump(2) + "\n" == r.out);
    CHECK(cli(a).out == r.out);
  }
}

TEST_CASE("lefschetz outcomes") {
  Json d2 = Json::parse(cli({"lefschetz", "--spec", data("double_j2.json"), "--format", "json"}).out);
  CHECK(d2["verdict"] == "fails");
  CHECK(d2["first_failure_degree"] == 2);
  CHECK(d2["witness"] == "x1^x3");
  CHECK(d2["agree"] == true);
  CHECK(d2["omega"] == "f1^f2 + x1^x4 - x2^x3");

  Json z = Json::parse(cli({"lefschetz", "--spec", data("j2_zero.json"), "--format", "json"}).out);
  CHECK(z["first_failure_degree"] == 1);

  Json diag = Json::parse(cli({"lefschetz", "--spec", data("diagonal.json"), "--format", "json"}).out);
  CHECK(diag["verdict"] == "HLC");
  CHECK(diag["first_failure_degree"].is_null());

  Run p = cli({"lefschetz", "--spec", data("double_j2.json"), "--omega", data("omega_perturbed.json"), "--format", "json"});
  CHECK(p.code == exit_ok);
  Json pj = Json::parse(p.out);
  CHECK(pj["omega_provenance"] == "user-supplied");
  CHECK(pj["first_failure_degree"] == 2);
}

TEST_CASE("lattice command") {
  Json j = Json::parse(cli({"lattice", "--spec", data("lattice_ii.json"), "--format", "json"}).out);
  CHECK(j["char_poly_text"] == "x^5 - 7x^4 + 17x^3 - 17x^2 + 7x - 1");
  CHECK(j["det"] == "1");
}

TEST_CASE("verify to dimension 8") {
  Run r = cli({"verify", "--max-dim", "8", "--format", "json"});
  CHECK(r.code == exit_ok);
  Json j = Json::parse(r.out);
  CHECK(j["specs_checked"] == 135);
  CHECK(j["failures"].empty());
}

}
