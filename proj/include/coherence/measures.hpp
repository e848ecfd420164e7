#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coherence/state.hpp"

namespace coherence {

/// Intrinsic degree of coherence sqrt((N Tr(rho^2) - 1)/(N - 1)).
double p_n(const DensityMatrix& rho);

/// Two-dimensional closed form sqrt(1 - 4 det rho). Throws WrongDimension
/// unless N = 2.
double p2_determinant_form(const DensityMatrix& rho);

/// sqrt(N/(N-1)) * ||rho - 1/N||_F.
double frobenius_distance_measure(const DensityMatrix& rho);

/// Normalized distance of the eigenvalue point from the centroid of the
/// probability simplex (point masses at the vertices).
double center_of_mass_distance(const Spectrum& spectrum);

/// Basis-dependent degree of coherence
///   sqrt( sum_{i<j} |rho_ij|^2 / sum_{i<j} rho_ii rho_jj ).
/// Throws DegenerateDiagonal when the denominator vanishes (one diagonal
/// entry equal to 1).
double mu_n(const DensityMatrix& rho);

/// mu_n for a unit-trace Hermitian matrix already expressed in some basis;
/// nullopt when the denominator vanishes. Used by the basis search.
std::optional<double> try_mu_n(const ComplexMatrix& m);

struct InterferenceProbabilities {
  double i1;
  double i2;
};

/// Detection probabilities of the two-port interference setup: phase delta
/// between |1> and |2>, rotation by theta, projective detection.
///
///   I1 = rho11 cos^2 + rho22 sin^2 + 2|rho12| sin cos cos(beta + delta)
///   I2 = 1 - I1,  beta = arg rho12.
InterferenceProbabilities interference_2d(const DensityMatrix& rho, double delta, double theta);

/// Fringe visibility (I1max - I1min)/(I1max + I1min) over a uniform
/// delta x theta grid with the given number of points per axis.
double fringe_visibility_grid(const DensityMatrix& rho, std::size_t steps);

/// Normalized spread sqrt( sum_{i<j}(I_i - I_j)^2 / ((N-1)(sum I)^2) ).
/// Scale invariant. Throws AllZero when sum I = 0 and InvalidParameter for a
/// negative entry or fewer than two entries.
double visibility_f(std::span<const double> probabilities);

/// f evaluated at the spectrum, which maximizes f over all bases.
double visibility(const DensityMatrix& rho);
double visibility(const Spectrum& spectrum);

/// rho = sum_i s_i |psi_i><psi_i| + mixed_weight * 1/N with s_i = lambda_i - lambda_N.
struct PurePartDecomposition {
  std::vector<double> weights;          // N-1 entries, non-increasing
  std::vector<ComplexVector> pure_states;
  double mixed_weight = 0.0;

  double weight_sum() const;
  ComplexMatrix reconstruct() const;
};

PurePartDecomposition pure_part_decomposition(const DensityMatrix& rho);
PurePartDecomposition pure_part_decomposition(const Spectrum& spectrum);

struct BoundCheck {
  bool bound_holds = false;
  double gap = 0.0;            // sum s_i - P_N
  double identity_error = 0.0; // |P_N - sqrt((sum s)^2 - 2N/(N-1) sum_{i<j} s_i s_j)|
};

/// Checks P_N against the pure-part weights: the weight identity within 1e-10
/// and P_N <= sum s_i + 1e-10.
BoundCheck pure_part_bound_check(const PurePartDecomposition& d, double p);

/// Every measure evaluated independently, plus mutual-consistency data.
struct CoherenceReport {
  std::size_t dim = 0;
  double p_n = 0.0;
  double frobenius_distance = 0.0;
  double center_of_mass = 0.0;
  double bloch_norm = 0.0;
  double purity = 0.0;
  std::optional<double> mu_in_given_basis;  // absent when the diagonal is degenerate
  double visibility = 0.0;
  double pure_part_weight_sum = 0.0;
  std::vector<double> pure_part_weights;
  double pure_part_gap = 0.0;
  double max_route_discrepancy = 0.0;
  std::string max_discrepancy_pair;
};

/// Throws InternalInvariantViolation naming the offending pair when the five
/// P_N routes disagree by more than 1e-9 or a bound is broken.
CoherenceReport coherence_report(const DensityMatrix& rho);

}  // namespace coherence
