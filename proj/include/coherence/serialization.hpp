#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "coherence/basis_opt.hpp"
#include "coherence/bloch.hpp"
#include "coherence/infdim.hpp"
#include "coherence/measures.hpp"
#include "coherence/state.hpp"

namespace coherence {

using Json = nlohmann::ordered_json;

/// Writes JSON with every floating-point number at 17 significant digits.
/// Arrays holding only scalars stay on one line.
void write_json(std::ostream& os, const Json& j, int indent = 2);
std::string dump_json(const Json& j, int indent = 2);

/// Parses text; ParseError carries the byte position on failure.
Json parse_json(const std::string& text);

/// Rounds to `digits` significant digits in %g form.
std::string format_number(double x, int digits);

// Complex numbers are [re, im]; matrices are row-major lists of rows.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"dim": N, "matrix": [[[re, im], ...], ...]}
Json state_to_json(const DensityMatrix& rho);
/// Parses and validates. Throws ParseError for structural problems and the
/// validation errors of validate_density.
DensityMatrix state_from_json(const Json& j, double tol = kDefaultTolerance);

/// {"dim": N, "u": {"j,k": x}, "v": {...}, "w": {"l": x}}
Json bloch_to_json(const BlochVector& b);
BlochVector bloch_from_json(const Json& j);

Json report_to_json(const CoherenceReport& r);

/// Best basis is written column-major: "best_unitary": [[col 0 entries], ...].
Json maximization_to_json(const MaximizationResult& r);

/// Representation-tagged files for the infinite-dimensional states:
/// {"representation": "oam"|"fock", "dim", "cutoff", "tail_bound", "matrix"}
/// {"representation": "position"|"momentum", "dim", "grid": {"D", "p_max", "hbar"}, "matrix"}
Json oam_to_json(const OamState& s);
Json fock_to_json(const FockState& s);
Json cv_to_json(const CvState& s);
OamState oam_from_json(const Json& j);
FockState fock_from_json(const Json& j);
CvState cv_from_json(const Json& j);

Json ladder_to_json(const ConvergenceLadder& ladder);

}  // namespace coherence
