#pragma once

// JSON documents and fixed-width text tables for the CLI commands. Key order
// is fixed, so dumping a parsed report reproduces it byte for byte.

#include <string>

#include <json.hpp>

#include "llab/cohomology.hpp"
#include "llab/lattice.hpp"
#include "llab/lefschetz.hpp"
#include "llab/sweep.hpp"

namespace llab {

using Json = nlohmann::ordered_json;

Json spec_json(const JordanSpec& spec);
Json matrix_json(const QMatrix& m);

Json betti_report(const CochainComplex& complex);
Json h2_report(const CochainComplex& complex, const H2Decomposition& h2);
Json lefschetz_json(const CochainComplex& complex, const SymplecticForm& omega, const LefschetzReport& report);

struct CircuitSummary {
  std::vector<Circuit> circuits;
  std::vector<bool> closed;
  std::vector<bool> exact;
  std::size_t expected = 0;  // sum over block pairs of r (equal) or r+s+2min(r,s)
  std::size_t class_rank = 0;
  bool ok() const;
};
// All circuits of every pair of double blocks with the same eigenvalue pair.
CircuitSummary collect_circuits(const CochainComplex& complex);
Json circuits_report(const CochainComplex& complex, const CircuitSummary& summary);

Json lattice_report(const LatticeCertificate& cert);
Json sweep_report(const SweepOptions& options, const SweepSummary& summary);

// Fixed-width renderings of the JSON documents above.
std::string betti_text(const Json& report);
std::string h2_text(const Json& report);
std::string lefschetz_text(const Json& report);
std::string circuits_text(const Json& report);
std::string lattice_text(const Json& report);
std::string sweep_text(const Json& report);

}  // namespace llab
