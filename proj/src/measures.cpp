#include "coherence/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "coherence/bloch.hpp"
#include "coherence/error.hpp"

namespace coherence {

namespace {

constexpr double kRadicandSlack = 1e-9;
constexpr double kRouteTolerance = 1e-9;

// sqrt with noise handling: radicands in [-slack, 0) become 0, results within
// slack above 1 become 1, anything worse is a logic error.
double guarded_sqrt(double radicand, const char* what) {
  if (radicand < -kRadicandSlack) {
    std::ostringstream os;
    os << what << ": negative radicand " << radicand;
    throw CoherenceError(ErrorCode::InternalInvariantViolation, os.str());
  }
  double r = std::sqrt(std::max(radicand, 0.0));
  if (r > 1.0 && r <= 1.0 + kRadicandSlack) r = 1.0;
  return r;
}

// Sum over i<j of (x_i - x_j)^2, evaluated pairwise.
double pairwise_spread(std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = x[i] - x[j];
      sum += d * d;
    }
  }
  return sum;
}

std::vector<double> to_std(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

void require_two_dim(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    std::ostringstream os;
    os << "operation requires N = 2, got N = " << rho.dim();
    throw CoherenceError(ErrorCode::WrongDimension, os.str());
  }
}

}  // namespace

double p_n(const DensityMatrix& rho) {
  const auto n = static_cast<double>(rho.dim());
  return guarded_sqrt((n * purity(rho) - 1.0) / (n - 1.0), "p_n");
}

double p2_determinant_form(const DensityMatrix& rho) {
  require_two_dim(rho);
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  return guarded_sqrt(1.0 - 4.0 * det, "p2_determinant_form");
}

double frobenius_distance_measure(const DensityMatrix& rho) {
  const std::size_t dim = rho.dim();
  const auto n = static_cast<double>(dim);
  double sum = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const Complex d = rho(i, j) - (i == j ? Complex(1.0 / n, 0.0) : Complex(0.0, 0.0));
      sum += std::norm(d);
    }
  }
  return guarded_sqrt(n / (n - 1.0) * sum, "frobenius_distance_measure");
}

double center_of_mass_distance(const Spectrum& spectrum) {
  const auto lambda = to_std(spectrum.eigenvalues);
  const auto n = static_cast<double>(lambda.size());
  double total = 0.0;
  for (double x : lambda) total += x;
  return guarded_sqrt(pairwise_spread(lambda) / ((n - 1.0) * total * total),
                      "center_of_mass_distance");
}

std::optional<double> try_mu_n(const ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  double numerator = 0.0;
  double denominator = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      numerator += std::norm(m(i, j));
      denominator += m(i, i).real() * m(j, j).real();
    }
  }
  // Below this the state is a basis vector up to rounding and the ratio is 0/0.
  if (denominator <= 1e-14) return std::nullopt;
  return std::sqrt(numerator / denominator);
}

double mu_n(const DensityMatrix& rho) {
  const auto mu = try_mu_n(rho.matrix());
  if (!mu) {
    throw CoherenceError(ErrorCode::DegenerateDiagonal,
                         "sum_{i<j} rho_ii rho_jj vanishes; mu_N is 0/0 in this basis");
  }
  return *mu;
}

InterferenceProbabilities interference_2d(const DensityMatrix& rho, double delta, double theta) {
  require_two_dim(rho);
  const double r11 = rho(0, 0).real();
  const double r22 = rho(1, 1).real();
  const double mag = std::abs(rho(0, 1));
  const double beta = std::arg(rho(0, 1));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cross = 2.0 * mag * s * c * std::cos(beta + delta);
  return {r11 * c * c + r22 * s * s + cross, r11 * s * s + r22 * c * c - cross};
}

double fringe_visibility_grid(const DensityMatrix& rho, std::size_t steps) {
  require_two_dim(rho);
  if (steps < 2) throw CoherenceError(ErrorCode::InvalidParameter, "grid needs at least 2 steps");
  double lo = 1.0;
  double hi = 0.0;
  const double pi = std::numbers::pi;
  for (std::size_t a = 0; a < steps; ++a) {
    const double delta = 2.0 * pi * static_cast<double>(a) / static_cast<double>(steps);
    for (std::size_t b = 0; b < steps; ++b) {
      const double theta = pi * static_cast<double>(b) / static_cast<double>(steps);
      const double i1 = interference_2d(rho, delta, theta).i1;
      lo = std::min(lo, i1);
      hi = std::max(hi, i1);
    }
  }
  return (hi - lo) / (hi + lo);
}

double visibility_f(std::span<const double> probabilities) {
  if (probabilities.size() < 2) {
    throw CoherenceError(ErrorCode::InvalidParameter, "need at least two probabilities");
  }
  double total = 0.0;
  for (double x : probabilities) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw CoherenceError(ErrorCode::InvalidParameter, "probabilities must be finite and >= 0");
    }
    total += x;
  }
  if (total <= 0.0) throw CoherenceError(ErrorCode::AllZero, "all probabilities are zero");
  const auto n = static_cast<double>(probabilities.size());
  return guarded_sqrt(pairwise_spread(probabilities) / ((n - 1.0) * total * total), "visibility_f");
}

double visibility(const Spectrum& spectrum) {
  // Clamped eigenvalues can carry -1e-17 noise; f needs non-negative input.
  auto lambda = to_std(spectrum.eigenvalues);
  for (double& x : lambda) x = std::max(x, 0.0);
  return visibility_f(lambda);
}

double visibility(const DensityMatrix& rho) { return visibility(spectral_decompose(rho)); }

double PurePartDecomposition::weight_sum() const {
  double sum = 0.0;
  for (double s : weights) sum += s;
  return sum;
}

ComplexMatrix PurePartDecomposition::reconstruct() const {
  const auto n = pure_states.empty() ? Eigen::Index{0} : pure_states.front().size();
  ComplexMatrix m = ComplexMatrix::Identity(n, n) * (mixed_weight / static_cast<double>(n));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    m += weights[i] * pure_states[i] * pure_states[i].adjoint();
  }
  return m;
}

PurePartDecomposition pure_part_decomposition(const Spectrum& spectrum) {
  const Eigen::Index n = spectrum.eigenvalues.size();
  const double smallest = spectrum.eigenvalues(n - 1);
  PurePartDecomposition d;
  d.weights.reserve(static_cast<std::size_t>(n - 1));
  d.pure_states.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    d.weights.push_back(std::max(spectrum.eigenvalues(i) - smallest, 0.0));
    d.pure_states.emplace_back(spectrum.eigenvectors.col(i));
  }
  d.mixed_weight = static_cast<double>(n) * smallest;
  return d;
}

PurePartDecomposition pure_part_decomposition(const DensityMatrix& rho) {
  return pure_part_decomposition(spectral_decompose(rho));
}

BoundCheck pure_part_bound_check(const PurePartDecomposition& d, double p) {
  const auto n = static_cast<double>(d.weights.size() + 1);
  const double sum = d.weight_sum();
  double cross = 0.0;
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    for (std::size_t j = i + 1; j < d.weights.size(); ++j) cross += d.weights[i] * d.weights[j];
  }
  const double radicand = sum * sum - 2.0 * n / (n - 1.0) * cross;
  const double from_weights = std::sqrt(std::max(radicand, 0.0));
  BoundCheck out;
  out.identity_error = std::abs(p - from_weights);
  out.gap = sum - p;
  out.bound_holds = out.identity_error <= 1e-10 && p <= sum + 1e-10;
  return out;
}

CoherenceReport coherence_report(const DensityMatrix& rho) {
  const Spectrum spectrum = spectral_decompose(rho);
  const PurePartDecomposition parts = pure_part_decomposition(spectrum);

  CoherenceReport r;
  r.dim = rho.dim();
  r.p_n = p_n(rho);
  r.frobenius_distance = frobenius_distance_measure(rho);
  r.center_of_mass = center_of_mass_distance(spectrum);
  r.bloch_norm = bloch_norm(to_bloch(rho));
  r.purity = purity(rho);
  r.mu_in_given_basis = try_mu_n(rho.matrix());
  r.visibility = visibility(spectrum);
  r.pure_part_weights = parts.weights;
  r.pure_part_weight_sum = parts.weight_sum();
  r.pure_part_gap = r.pure_part_weight_sum - r.p_n;

  const std::array<std::pair<const char*, double>, 5> routes{{
      {"p_n", r.p_n},
      {"bloch_norm", r.bloch_norm},
      {"frobenius_distance", r.frobenius_distance},
      {"center_of_mass", r.center_of_mass},
      {"visibility", r.visibility},
  }};
  r.max_discrepancy_pair = "p_n/p_n";
  for (std::size_t a = 0; a < routes.size(); ++a) {
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      const double diff = std::abs(routes[a].second - routes[b].second);
      if (diff > r.max_route_discrepancy) {
        r.max_route_discrepancy = diff;
        r.max_discrepancy_pair = std::string(routes[a].first) + "/" + routes[b].first;
      }
    }
  }

  auto violation = [](const std::string& msg) {
    throw CoherenceError(ErrorCode::InternalInvariantViolation, msg);
  };
  if (r.max_route_discrepancy > kRouteTolerance) {
    std::ostringstream os;
    os << "routes " << r.max_discrepancy_pair << " disagree by " << r.max_route_discrepancy;
    violation(os.str());
  }
  if (r.mu_in_given_basis && *r.mu_in_given_basis > r.p_n + kRouteTolerance) {
    std::ostringstream os;
    os << "mu_n " << *r.mu_in_given_basis << " exceeds p_n " << r.p_n;
    violation(os.str());
  }
  if (r.p_n > r.pure_part_weight_sum + kRouteTolerance) {
    std::ostringstream os;
    os << "p_n " << r.p_n << " exceeds pure-part weight sum " << r.pure_part_weight_sum;
    violation(os.str());
  }
  for (double x : {r.p_n, r.frobenius_distance, r.center_of_mass, r.bloch_norm, r.purity,
                   r.visibility, r.pure_part_weight_sum, r.mu_in_given_basis.value_or(0.0)}) {
    if (x < 0.0 || x > 1.0 + kRouteTolerance) {
      std::ostringstream os;
      os << "report field " << x << " outside [0, 1]";
      violation(os.str());
    }
  }
  return r;
}

}  // namespace coherence
