#include "doctest.h"

#include <sstream>

#include "coherence/error.hpp"
#include "coherence/serialization.hpp"

using namespace coherence;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const CoherenceError& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InternalInvariantViolation;
}

}  // namespace

TEST_CASE("numbers are written at 17 significant digits") {
  Json j;
  j["x"] = 0.1;
  j["y"] = 1.0 / 3.0;
  j["n"] = 5;
  const std::string s = dump_json(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(s.find("\"n\": 5") != std::string::npos);
  CHECK(format_number(0.1234567891234, 12) == "0.123456789123");
}

TEST_CASE("state files round trip bit for bit") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = random_state(4, GinibreMixed{}, seed);
    const std::string text = dump_json(state_to_json(rho));
    const DensityMatrix back = state_from_json(parse_json(text));
    CHECK(back.matrix() == rho.matrix());
    CHECK(dump_json(state_to_json(back)) == text);
  }
}

TEST_CASE("malformed input reports its location") {
  try {
    parse_json("{\"dim\": 2, \"matrix\": [[");
    FAIL("expected ParseError");
  } catch (const CoherenceError& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK(code_of([] { state_from_json(parse_json(R"({"dim": 2, "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]], "x": 1})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { state_from_json(parse_json(R"({"dim": 3, "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { state_from_json(parse_json(R"({"dim": 2, "matrix": [[[0.6,0],[0.5,0]],[[0.5,0],[0.4,0]]]})")); }) ==
        ErrorCode::NotPSD);
}

TEST_CASE("Bloch vectors round trip") {
  const BlochVector b = to_bloch(random_state(3, GinibreMixed{}, 2));
  const Json j = bloch_to_json(b);
  CHECK(j["u"].contains("1,2"));
  CHECK(j["w"].contains("2"));
  CHECK(bloch_from_json(parse_json(dump_json(j))).flattened() == b.flattened());
}

TEST_CASE("report and maximization records") {
  const Json r = report_to_json(coherence_report(maximally_mixed(3)));
  CHECK(r["dim"] == 3);
  CHECK(r.contains("checks"));
  const Json m = maximization_to_json(maximize_visibility(random_state(3, GinibreMixed{}, 1), 100, 1));
  CHECK(m["target"] == "visibility");
  CHECK(m["best_unitary"].size() == 3);
}

TEST_CASE("infinite-dimensional state files round trip") {
  const OamState o = geometric_oam(0.5, 6);
  const OamState o2 = oam_from_json(parse_json(dump_json(oam_to_json(o))));
  CHECK(o2.coefficients() == o.coefficients());
  CHECK(o2.tail_bound() == o.tail_bound());

  const FockState f = thermal_fock(1.0, 8);
  CHECK(fock_from_json(parse_json(dump_json(fock_to_json(f)))).coefficients() == f.coefficients());

  const CvGrid g(8, 3.0, 0.5);
  const CvState s = gaussian_cv(0.7, 0.1, 0.2, g).to_momentum();
  const CvState s2 = cv_from_json(parse_json(dump_json(cv_to_json(s))));
  CHECK(s2.grid() == g);
  CHECK(s2.representation() == CvRepresentation::Momentum);
  CHECK(s2.matrix() == s.matrix());
}
