#include "coherence/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "coherence/error.hpp"

namespace coherence {

namespace {

using Idx = Eigen::Index;

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write_scalar(std::ostream& os, const Json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
      os << "null";
    } else {
      os << format_number(x, 17);
    }
  } else {
    os << j.dump();
  }
}

void write_value(std::ostream& os, const Json& j, int indent, int depth) {
  if (is_scalar(j)) {
    write_scalar(os, j);
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : j) flat = flat && is_scalar(e);
    // Arrays of scalars, and arrays of such arrays of length <= 2 ([re, im]
    // pairs), stay on one line.
    bool pairs = true;
    for (const auto& e : j) {
      pairs = pairs && e.is_array() && e.size() <= 2 &&
              std::all_of(e.begin(), e.end(), [](const Json& x) { return is_scalar(x); });
    }
    if (flat || pairs) {
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ", ";
        first = false;
        write_value(os, e, indent, depth + 1);
      }
      os << ']';
      return;
    }
    os << "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) os << ",\n";
      first = false;
      os << pad;
      write_value(os, e, indent, depth + 1);
    }
    os << '\n' << close_pad << ']';
    return;
  }
  if (j.empty()) {
    os << "{}";
    return;
  }
  os << "{\n";
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (!first) os << ",\n";
    first = false;
    os << pad << Json(key).dump() << ": ";
    write_value(os, value, indent, depth + 1);
  }
  os << '\n' << close_pad << '}';
}

[[noreturn]] void parse_fail(const std::string& msg) {
  throw CoherenceError(ErrorCode::ParseError, msg);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    parse_fail(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) parse_fail("unknown field \"" + key + "\"");
  }
}

IndexPair parse_pair(const std::string& key) {
  std::size_t j = 0;
  std::size_t k = 0;
  char comma = 0;
  std::istringstream is(key);
  if (!(is >> j >> comma >> k) || comma != ',' || !is.eof()) {
    parse_fail("bad index key \"" + key + "\" (expected \"j,k\")");
  }
  return {j, k};
}

std::string pair_key(const IndexPair& p) {
  return std::to_string(p.first) + "," + std::to_string(p.second);
}

Json grid_to_json(const CvGrid& g) {
  Json j;
  j["D"] = g.half_width();
  j["p_max"] = g.p_max();
  j["hbar"] = g.hbar();
  return j;
}

std::string representation_of(const Json& j) {
  const Json& r = field(j, "representation");
  if (!r.is_string()) parse_fail("representation must be a string");
  return r.get<std::string>();
}

}  // namespace

std::string format_number(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

void write_json(std::ostream& os, const Json& j, int indent) {
  write_value(os, j, indent, 0);
  os << '\n';
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::ostringstream os;
    os << "malformed JSON at byte " << e.byte << ": " << e.what();
    throw CoherenceError(ErrorCode::ParseError, os.str());
  }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) parse_fail("complex number must be [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Idx i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Idx k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_fail("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Idx>(j.size());
  if (!j[0].is_array()) parse_fail("matrix rows must be lists");
  const auto cols = static_cast<Idx>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Idx i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Idx>(row.size()) != cols) parse_fail("ragged matrix rows");
    for (Idx k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json state_to_json(const DensityMatrix& rho) {
  Json j;
  j["dim"] = rho.dim();
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

DensityMatrix state_from_json(const Json& j, double tol) {
  if (!j.is_object()) parse_fail("state file must hold a JSON object");
  reject_unknown(j, {"dim", "matrix"});
  const std::size_t dim = count(field(j, "dim"), "dim");
  const ComplexMatrix m = matrix_from_json(field(j, "matrix"));
  if (static_cast<std::size_t>(m.rows()) != dim) {
    std::ostringstream os;
    os << "dim " << dim << " does not match " << m.rows() << " matrix rows";
    parse_fail(os.str());
  }
  return validate_density(m, tol);
}

Json bloch_to_json(const BlochVector& b) {
  Json j;
  j["dim"] = b.dim;
  Json u = Json::object();
  Json v = Json::object();
  Json w = Json::object();
  for (const auto& [k, x] : b.u) u[pair_key(k)] = x;
  for (const auto& [k, x] : b.v) v[pair_key(k)] = x;
  for (const auto& [l, x] : b.w) w[std::to_string(l)] = x;
  j["u"] = std::move(u);
  j["v"] = std::move(v);
  j["w"] = std::move(w);
  return j;
}

BlochVector bloch_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("Bloch vector must be a JSON object");
  reject_unknown(j, {"dim", "u", "v", "w"});
  BlochVector b;
  b.dim = count(field(j, "dim"), "dim");
  for (const auto& [key, x] : field(j, "u").items()) b.u[parse_pair(key)] = number(x, "u component");
  for (const auto& [key, x] : field(j, "v").items()) b.v[parse_pair(key)] = number(x, "v component");
  for (const auto& [key, x] : field(j, "w").items()) {
    std::size_t l = 0;
    std::istringstream is(key);
    if (!(is >> l) || !is.eof()) parse_fail("bad w key \"" + key + "\"");
    b.w[l] = number(x, "w component");
  }
  return b;
}

Json report_to_json(const CoherenceReport& r) {
  Json j;
  j["dim"] = r.dim;
  j["p_n"] = r.p_n;
  j["frobenius_distance"] = r.frobenius_distance;
  j["center_of_mass"] = r.center_of_mass;
  j["bloch_norm"] = r.bloch_norm;
  j["visibility"] = r.visibility;
  j["purity"] = r.purity;
  j["mu_in_given_basis"] = r.mu_in_given_basis ? Json(*r.mu_in_given_basis) : Json(nullptr);
  j["pure_part_weight_sum"] = r.pure_part_weight_sum;
  j["pure_part_weights"] = r.pure_part_weights;
  j["pure_part_gap"] = r.pure_part_gap;
  Json checks;
  checks["max_pairwise_discrepancy"] = r.max_route_discrepancy;
  checks["max_discrepancy_pair"] = r.max_discrepancy_pair;
  j["checks"] = std::move(checks);
  return j;
}

Json maximization_to_json(const MaximizationResult& r) {
  Json j;
  j["target"] = std::string(to_string(r.target));
  j["best_value"] = r.best_value;
  j["iterations"] = r.iterations;
  j["evaluations"] = r.evaluations;
  j["restarts"] = r.restarts;
  j["converged"] = r.converged;
  Json cols = Json::array();
  for (Idx k = 0; k < r.best_unitary.cols(); ++k) {
    Json col = Json::array();
    for (Idx i = 0; i < r.best_unitary.rows(); ++i) col.push_back(complex_to_json(r.best_unitary(i, k)));
    cols.push_back(std::move(col));
  }
  j["best_unitary"] = std::move(cols);
  Json trace = Json::array();
  for (const auto& [eval, value] : r.trace) trace.push_back(Json::array({eval, value}));
  j["trace"] = std::move(trace);
  return j;
}

Json oam_to_json(const OamState& s) {
  Json j;
  j["representation"] = "oam";
  j["dim"] = s.coefficients().rows();
  j["cutoff"] = s.cutoff();
  j["tail_bound"] = s.tail_bound();
  j["matrix"] = matrix_to_json(s.coefficients());
  return j;
}

Json fock_to_json(const FockState& s) {
  Json j;
  j["representation"] = "fock";
  j["dim"] = s.coefficients().rows();
  j["cutoff"] = s.cutoff();
  j["tail_bound"] = s.tail_bound();
  j["matrix"] = matrix_to_json(s.coefficients());
  return j;
}

Json cv_to_json(const CvState& s) {
  Json j;
  j["representation"] = s.representation() == CvRepresentation::Position ? "position" : "momentum";
  j["dim"] = s.grid().size();
  j["grid"] = grid_to_json(s.grid());
  j["matrix"] = matrix_to_json(s.matrix());
  return j;
}

OamState oam_from_json(const Json& j) {
  reject_unknown(j, {"representation", "dim", "cutoff", "tail_bound", "matrix"});
  if (representation_of(j) != "oam") parse_fail("representation must be \"oam\"");
  return {count(field(j, "cutoff"), "cutoff"), matrix_from_json(field(j, "matrix")),
          number(field(j, "tail_bound"), "tail_bound")};
}

FockState fock_from_json(const Json& j) {
  reject_unknown(j, {"representation", "dim", "cutoff", "tail_bound", "matrix"});
  if (representation_of(j) != "fock") parse_fail("representation must be \"fock\"");
  return {count(field(j, "cutoff"), "cutoff"), matrix_from_json(field(j, "matrix")),
          number(field(j, "tail_bound"), "tail_bound")};
}

CvState cv_from_json(const Json& j) {
  reject_unknown(j, {"representation", "dim", "grid", "matrix"});
  const std::string rep = representation_of(j);
  if (rep != "position" && rep != "momentum") parse_fail("representation must be position or momentum");
  const Json& g = field(j, "grid");
  reject_unknown(g, {"D", "p_max", "hbar"});
  const CvGrid grid = build_cv_grid(count(field(g, "D"), "D"), number(field(g, "p_max"), "p_max"),
                                    number(field(g, "hbar"), "hbar"));
  return {grid, rep == "position" ? CvRepresentation::Position : CvRepresentation::Momentum,
          matrix_from_json(field(j, "matrix"))};
}

Json ladder_to_json(const ConvergenceLadder& ladder) {
  Json rungs = Json::array();
  for (const auto& r : ladder.rungs) {
    Json rung;
    rung["D"] = r.cutoff;
    if (r.p_max > 0.0) rung["p_max"] = r.p_max;
    rung["value"] = r.value;
    rung["difference"] = r.difference;
    rungs.push_back(std::move(rung));
  }
  Json j;
  j["rungs"] = std::move(rungs);
  j["error_estimate"] = ladder.error_estimate();
  return j;
}

}  // namespace coherence
