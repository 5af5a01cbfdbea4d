#include "llab/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace llab {

namespace {

Json optional_degree(const std::optional<std::size_t>& k) { return k ? Json(*k) : Json(nullptr); }

Json rationals(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

Json integers(const IntPoly& p) {
  Json out = Json::array();
  for (const auto& x : p) out.push_back(x.get_str());
  return out;
}

Json forms(const std::vector<KForm>& fs, const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (const auto& f : fs) out.push_back(render(f, labels));
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string row(const std::vector<std::pair<std::string, int>>& cells) {
  std::ostringstream os;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << "  ";
    os << std::left << std::setw(cells[i].second) << cells[i].first;
  }
  std::string s = os.str();
  s.erase(s.find_last_not_of(' ') + 1);
  return s + "\n";
}

std::string str(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  return j.dump();
}

std::string spec_line(const Json& spec) {
  std::string out;
  for (const auto& b : spec["blocks"]) {
    if (!out.empty()) out += " + ";
    out += "J" + b["size"].dump() + "(" + b["lambda"].get<std::string>() + ")";
    if (b["mult"].get<std::size_t>() > 1) out += "^" + b["mult"].dump();
  }
  if (out.empty()) out = "0";
  out = "A0 = " + out + ", a = " + spec["a"].get<std::string>();
  if (!spec["v"].is_null()) out += ", v = " + spec["v"].dump();
  return out;
}

}  // namespace

Json spec_json(const JordanSpec& spec) { return Json::parse(spec_to_json(spec)); }

Json matrix_json(const QMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json rj = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) rj.push_back(to_string(m.at(r, c)));
    out.push_back(rj);
  }
  return out;
}

Json betti_report(const CochainComplex& complex) {
  const Algebra& alg = complex.algebra();
  Json j;
  j["command"] = "betti";
  j["spec"] = spec_json(alg.spec());
  j["dimension"] = alg.dimension();
  j["unimodular"] = alg.is_unimodular();
  j["labels"] = alg.layout().labels;
  j["betti"] = betti_numbers(complex);
  return j;
}

Json h2_report(const CochainComplex& complex, const H2Decomposition& h2) {
  const Algebra& alg = complex.algebra();
  const auto& labels = alg.layout().labels;
  Json j;
  j["command"] = "h2";
  j["spec"] = spec_json(alg.spec());
  j["dimension"] = alg.dimension();
  j["b2"] = h2.b2;
  j["u_dim"] = h2.u_dim;
  j["v_dim"] = h2.v_dim;
  j["w0_dim"] = h2.w0_dim;
  Json parts = Json::array();
  for (const auto& p : h2.w_parts)
    parts.push_back(Json{{"lambda", to_string(p.lambda)},
                         {"dimension", p.dimension},
                         {"circuit_count", p.circuit_count},
                         {"circuit_rank", p.circuit_rank},
                         {"expected", p.expected}});
  j["w_parts"] = parts;
  j["u_generators"] = forms(h2.u_generators, labels);
  j["v_generators"] = forms(h2.v_generators, labels);
  j["w0_generators"] = forms(h2.w0_generators, labels);
  j["u_basis_canonical"] = h2.u_basis_canonical;
  j["direct_sum"] = h2.direct_sum;
  j["failures"] = h2.failures;
  j["ok"] = h2.ok();
  return j;
}

Json lefschetz_json(const CochainComplex& complex, const SymplecticForm& omega, const LefschetzReport& report) {
  const Algebra& alg = complex.algebra();
  const auto& labels = alg.layout().labels;
  Json j;
  j["command"] = "lefschetz";
  j["spec"] = spec_json(alg.spec());
  j["dimension"] = alg.dimension();
  j["omega"] = render(omega.form, labels);
  j["omega_provenance"] = to_string(omega.provenance);
  Json degrees = Json::array();
  for (const auto& d : report.degrees)
    degrees.push_back(Json{{"k", d.k},
                           {"dim_source", d.dim_source},
                           {"dim_target", d.dim_target},
                           {"rank", d.rank},
                           {"injective", d.injective},
                           {"surjective", d.surjective}});
  j["degrees"] = degrees;
  j["verdict"] = to_string(report.verdict);
  j["first_failure_degree"] = optional_degree(report.first_failure_degree);
  j["witness"] = report.witness ? Json(render(*report.witness, labels)) : Json(nullptr);
  j["canonical_witness"] = report.canonical_witness;
  j["predicted"] = Json{{"verdict", to_string(report.predicted.verdict)},
                        {"failure_degree", optional_degree(report.predicted.failure_degree)},
                        {"theorem_covered", report.predicted.theorem_covered},
                        {"rule", report.predicted.rule}};
  j["agree"] = report.agree;
  j["eigenvalues"] = rationals(report.eigenvalues);
  return j;
}

bool CircuitSummary::ok() const {
  bool all_closed = std::all_of(closed.begin(), closed.end(), [](bool b) { return b; });
  bool none_exact = std::none_of(exact.begin(), exact.end(), [](bool b) { return b; });
  return all_closed && none_exact && circuits.size() == expected && class_rank == circuits.size();
}

CircuitSummary collect_circuits(const CochainComplex& complex) {
  const Algebra& alg = complex.algebra();
  const auto& doubles = alg.layout().doubles;
  CircuitSummary s;
  for (std::size_t a = 0; a < doubles.size(); ++a)
    for (std::size_t b = a; b < doubles.size(); ++b) {
      if (doubles[a].lambda != doubles[b].lambda) continue;
      for (auto& c : circuits_of(alg, a, b))
        if (a == b || c.kind == CircuitKind::xy || c.kind == CircuitKind::yx) s.circuits.push_back(std::move(c));
      s.expected += a == b ? doubles[a].size : 2 * std::min(doubles[a].size, doubles[b].size);
    }
  std::vector<KForm> cocycles;
  for (const auto& c : s.circuits) {
    bool closed = alg.d(c.form).is_zero();
    s.closed.push_back(closed);
    s.exact.push_back(closed && is_exact(complex, c.form).has_value());
    if (closed) cocycles.push_back(c.form);
  }
  s.class_rank = class_rank(complex, cocycles);
  return s;
}

Json circuits_report(const CochainComplex& complex, const CircuitSummary& summary) {
  const Algebra& alg = complex.algebra();
  const auto& labels = alg.layout().labels;
  Json j;
  j["command"] = "circuits";
  j["spec"] = spec_json(alg.spec());
  j["dimension"] = alg.dimension();
  Json list = Json::array();
  for (std::size_t i = 0; i < summary.circuits.size(); ++i) {
    const Circuit& c = summary.circuits[i];
    list.push_back(Json{{"kind", to_string(c.kind)},
                        {"length", c.length},
                        {"first_block", c.first_block},
                        {"second_block", c.second_block},
                        {"lambda", to_string(alg.layout().doubles[c.first_block].lambda)},
                        {"form", render(c.form, labels)},
                        {"closed", static_cast<bool>(summary.closed[i])},
                        {"exact", static_cast<bool>(summary.exact[i])}});
  }
  j["circuits"] = list;
  j["count"] = summary.circuits.size();
  j["expected"] = summary.expected;
  j["class_rank"] = summary.class_rank;
  j["ok"] = summary.ok();
  return j;
}

Json lattice_report(const LatticeCertificate& cert) {
  Json j;
  j["command"] = "lattice";
  Json pairs = Json::array();
  for (const auto& p : cert.spec.pairs) pairs.push_back(Json{{"k", p.k}, {"m", p.m}});
  j["spec"] = Json{{"case", to_string(cert.spec.kind)}, {"t", cert.spec.t}, {"pairs", pairs}};
  j["char_poly"] = integers(cert.char_poly);
  j["char_poly_text"] = render_poly(cert.char_poly);
  j["min_poly"] = integers(cert.min_poly);
  j["min_poly_text"] = render_poly(cert.min_poly);
  j["cyclic"] = cert.cyclic;
  j["companion"] = matrix_json(cert.companion);
  j["integer_form"] = matrix_json(cert.integer_form);
  j["det"] = cert.det.get_str();
  j["t0"] = cert.t0;
  Json tks = Json::array();
  for (const auto& t : cert.tk_values)
    tks.push_back(Json{{"k", t.k},
                       {"expression", t.expression},
                       {"lower", t.lower},
                       {"upper", t.upper},
                       {"approx", t.approx},
                       {"roots_sum_to_k", t.roots_sum_to_k},
                       {"roots_multiply_to_one", t.roots_multiply_to_one},
                       {"exp_encloses_root", t.exp_encloses_root}});
  j["t_k"] = tks;
  j["spectral"] = Json{{"max_interval_width", cert.spectral.max_interval_width},
                       {"coefficients_enclosed", cert.spectral.coefficients_enclosed},
                       {"roots_are_zeros", cert.spectral.roots_are_zeros}};
  j["companion_char_poly_matches"] = cert.companion_char_poly_matches;
  j["integer_form_char_poly_matches"] = cert.integer_form_char_poly_matches;
  JordanSpec surrogate = surrogate_spec(cert.spec);
  Prediction p = predict_verdict(surrogate);
  j["surrogate"] = Json{{"spec", spec_json(surrogate)},
                        {"predicted_verdict", to_string(p.verdict)},
                        {"failure_degree", optional_degree(p.failure_degree)}};
  j["ok"] = cert.ok();
  return j;
}

Json sweep_report(const SweepOptions& options, const SweepSummary& summary) {
  Json j;
  j["command"] = "verify";
  j["max_dim"] = options.max_dim;
  j["conformance_max_dim"] = options.conformance_max_dim;
  j["perturbation_max_dim"] = options.perturbation_max_dim;
  j["perturbations"] = options.perturbations;
  j["seed"] = options.seed;
  j["specs_checked"] = summary.specs_checked;
  j["checks_run"] = summary.checks_run;
  j["checks_passed"] = summary.checks_passed;
  Json suites = Json::object();
  for (const auto& [name, t] : summary.suites) suites[name] = Json{{"run", t.run}, {"passed", t.passed}};
  j["suites"] = suites;
  Json failures = Json::array();
  for (const auto& f : summary.failures) {
    Json checks = Json::array();
    for (const auto& c : f.checks)
      if (!c.passed) checks.push_back(Json{{"name", c.name}, {"detail", c.detail}});
    failures.push_back(Json{{"spec", Json::parse(f.spec)}, {"dimension", f.dimension}, {"failed", checks}});
  }
  j["failures"] = failures;
  j["ok"] = summary.ok();
  return j;
}

std::string betti_text(const Json& r) {
  std::string out = spec_line(r["spec"]) + "\n";
  out += "dimension " + r["dimension"].dump() + ", unimodular " + str(r["unimodular"]) + "\n\n";
  out += row({{"k", 4}, {"b_k", 6}});
  out += row({{"---", 4}, {"------", 6}});
  const auto& b = r["betti"];
  for (std::size_t k = 0; k < b.size(); ++k) out += row({{std::to_string(k), 4}, {b[k].dump(), 6}});
  return out;
}

std::string h2_text(const Json& r) {
  std::string out = spec_line(r["spec"]) + "\n";
  out += "b2 = " + r["b2"].dump() + " = U " + r["u_dim"].dump() + " + V " + r["v_dim"].dump() + " + W0 " +
         r["w0_dim"].dump();
  for (const auto& p : r["w_parts"]) out += " + W(" + p["lambda"].get<std::string>() + ") " + p["dimension"].dump();
  out += "\n\n";
  if (!r["w_parts"].empty()) {
    out += row({{"lambda", 8}, {"dim", 5}, {"circuits", 9}, {"rank", 5}, {"expected", 8}});
    out += row({{"------", 8}, {"---", 5}, {"--------", 9}, {"----", 5}, {"--------", 8}});
    for (const auto& p : r["w_parts"])
      out += row({{str(p["lambda"]), 8},
                  {p["dimension"].dump(), 5},
                  {p["circuit_count"].dump(), 9},
                  {p["circuit_rank"].dump(), 5},
                  {p["expected"].dump(), 8}});
    out += "\n";
  }
  for (const char* part : {"u_generators", "v_generators", "w0_generators"})
    for (const auto& g : r[part]) out += std::string(part).substr(0, std::string(part).find('_')) + ": " + str(g) + "\n";
  out += "direct sum " + str(r["direct_sum"]) + ", U spanned by [f1^f2] " + str(r["u_basis_canonical"]) + "\n";
  for (const auto& f : r["failures"]) out += "FAILURE: " + str(f) + "\n";
  return out;
}

std::string lefschetz_text(const Json& r) {
  std::string out = spec_line(r["spec"]) + "\n";
  out += "omega (" + str(r["omega_provenance"]) + ") = " + str(r["omega"]) + "\n\n";
  out += row({{"k", 4}, {"b_k", 5}, {"b_2n-k", 7}, {"rank", 5}, {"inj", 4}, {"surj", 4}});
  out += row({{"---", 4}, {"---", 5}, {"------", 7}, {"----", 5}, {"---", 4}, {"----", 4}});
  for (const auto& d : r["degrees"])
    out += row({{d["k"].dump(), 4},
                {d["dim_source"].dump(), 5},
                {d["dim_target"].dump(), 7},
                {d["rank"].dump(), 5},
                {str(d["injective"]), 4},
                {str(d["surjective"]), 4}});
  out += "\nverdict: " + str(r["verdict"]);
  if (!r["first_failure_degree"].is_null()) out += " at degree " + r["first_failure_degree"].dump();
  out += "\n";
  if (!r["witness"].is_null())
    out += "kernel witness" + std::string(r["canonical_witness"].get<bool>() ? " (x^1 ^ x^{m+1})" : "") + ": " +
           str(r["witness"]) + "\n";
  const auto& p = r["predicted"];
  out += "predicted: " + str(p["verdict"]);
  if (!p["failure_degree"].is_null()) out += " at degree " + p["failure_degree"].dump();
  out += " [" + str(p["rule"]) + "]\n";
  out += std::string("agreement: ") + yes_no(r["agree"].get<bool>()) + "\n";
  return out;
}

std::string circuits_text(const Json& r) {
  std::string out = spec_line(r["spec"]) + "\n\n";
  out += row({{"kind", 4}, {"l", 3}, {"blocks", 6}, {"lambda", 6}, {"closed", 6}, {"exact", 5}, {"form", 0}});
  out += row({{"----", 4}, {"---", 3}, {"------", 6}, {"------", 6}, {"------", 6}, {"-----", 5}, {"----", 0}});
  for (const auto& c : r["circuits"])
    out += row({{str(c["kind"]), 4},
                {c["length"].dump(), 3},
                {c["first_block"].dump() + "," + c["second_block"].dump(), 6},
                {str(c["lambda"]), 6},
                {str(c["closed"]), 6},
                {str(c["exact"]), 5},
                {str(c["form"]), 0}});
  out += "\n" + r["count"].dump() + " circuits, expected " + r["expected"].dump() + ", class rank " +
         r["class_rank"].dump() + "\n";
  return out;
}

std::string lattice_text(const Json& r) {
  const auto& s = r["spec"];
  std::string out = "case (" + str(s["case"]) + "), t = " + s["t"].dump() + ", pairs " + s["pairs"].dump() + "\n\n";
  out += "char poly   " + str(r["char_poly_text"]) + "\n";
  out += "min poly    " + str(r["min_poly_text"]) + (r["cyclic"].get<bool>() ? " (equal)" : " (differs)") + "\n";
  out += "det         " + str(r["det"]) + "\n";
  out += "t0          " + r["t0"].dump() + "\n";
  auto matrix = [](const Json& m) {
    std::size_t w = 1;
    for (const auto& rr : m)
      for (const auto& x : rr) w = std::max(w, x.get<std::string>().size());
    std::string o;
    for (const auto& rr : m) {
      o += "  [";
      for (std::size_t i = 0; i < rr.size(); ++i) {
        std::string x = rr[i].get<std::string>();
        o += (i ? " " : "") + std::string(w - x.size(), ' ') + x;
      }
      o += "]\n";
    }
    return o;
  };
  out += "\ncompanion of char poly:\n" + matrix(r["companion"]);
  out += "\ninteger form (rational canonical form):\n" + matrix(r["integer_form"]);
  if (!r["t_k"].empty()) {
    out += "\n";
    for (const auto& t : r["t_k"])
      out += "t_" + t["k"].dump() + " = " + str(t["expression"]) + " in [" + str(t["lower"]) + ", " + str(t["upper"]) +
             "]\n";
  }
  std::ostringstream w;
  w << r["spectral"]["max_interval_width"].get<double>();
  out += "\ninterval check: width " + w.str() + ", coefficients enclosed " +
         str(r["spectral"]["coefficients_enclosed"]) + ", roots are zeros " + str(r["spectral"]["roots_are_zeros"]) +
         "\n";
  out += "surrogate " + spec_line(r["surrogate"]["spec"]) + ": predicted " + str(r["surrogate"]["predicted_verdict"]);
  if (!r["surrogate"]["failure_degree"].is_null()) out += " at degree " + r["surrogate"]["failure_degree"].dump();
  out += "\ncertificate " + std::string(r["ok"].get<bool>() ? "ok" : "FAILED") + "\n";
  return out;
}

std::string sweep_text(const Json& r) {
  std::string out = "verify: dim <= " + r["max_dim"].dump() + " (conformance <= " + r["conformance_max_dim"].dump() +
                    ", " + r["perturbations"].dump() + " perturbations <= " + r["perturbation_max_dim"].dump() +
                    "), seed " + r["seed"].dump() + "\n\n";
  out += row({{"suite", 14}, {"passed", 7}, {"run", 7}});
  out += row({{"-----", 14}, {"------", 7}, {"---", 7}});
  for (const auto& [name, t] : r["suites"].items())
    out += row({{name, 14}, {t["passed"].dump(), 7}, {t["run"].dump(), 7}});
  out += "\n" + r["specs_checked"].dump() + " specs, " + r["checks_passed"].dump() + "/" + r["checks_run"].dump() +
         " checks passed\n";
  for (const auto& f : r["failures"]) {
    out += "FAIL " + spec_line(f["spec"]) + "\n";
    for (const auto& c : f["failed"]) out += "  " + str(c["name"]) + ": " + str(c["detail"]) + "\n";
  }
  return out;
}

}  // namespace llab
