#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "coherence/state.hpp"

namespace coherence {

inline constexpr double kDefaultHbar = 1.0;

/// Sum with a fixed binary-tree reduction order.
double pairwise_sum(std::span<const double> values);

// ---------------------------------------------------------------------------
// Truncated discrete bases (OAM, photon number)

enum class DiscreteBasis { Oam, Fock };

/// Truncation of an infinite-dimensional state to a finite index window, plus
/// the caller's certified bound on what was cut away (missing trace mass and
/// missing sum of |c|^2).
///
/// OAM indices run over l in [-D, D] (2D+1 entries); photon numbers over
/// n in [0, D] (D+1 entries). Checked on construction: Hermitian within 1e-12,
/// |trace - 1| <= tail_bound + 1e-12, eigenvalues >= -1e-10.
template <DiscreteBasis Basis>
class TruncatedState {
 public:
  TruncatedState(std::size_t cutoff, ComplexMatrix coefficients, double tail_bound);

  std::size_t cutoff() const { return cutoff_; }
  const ComplexMatrix& coefficients() const { return coefficients_; }
  double tail_bound() const { return tail_bound_; }
  /// Lowest index of the window: -D for OAM, 0 for Fock.
  long first_index() const;
  Complex coefficient(long index, long index_prime) const;

 private:
  std::size_t cutoff_;
  ComplexMatrix coefficients_;
  double tail_bound_;
};

using OamState = TruncatedState<DiscreteBasis::Oam>;
using FockState = TruncatedState<DiscreteBasis::Fock>;

struct TruncatedEstimate {
  double value = 0.0;
  double error_bound = 0.0;
};

/// sqrt(sum |c_ll'|^2) over the window; the tail bound is propagated through
/// the square root. Throws EmptyState when every coefficient is zero.
TruncatedEstimate p_inf_oam(const OamState& s);
TruncatedEstimate p_inf_fock(const FockState& s);

/// c_ll = (1-q) q^l for 0 <= l <= D, zero for negative l.
OamState geometric_oam(double q, std::size_t cutoff);
/// Single mode |l><l|.
OamState oam_mode(long l, std::size_t cutoff);
/// c_ll = 1/(2D+1) on the whole window.
OamState uniform_oam(std::size_t cutoff);

/// a_nn = nbar^n / (nbar+1)^(n+1).
FockState thermal_fock(double nbar, std::size_t cutoff);
/// |alpha><alpha| truncated to n <= D.
FockState coherent_fock(Complex alpha, std::size_t cutoff);
/// |n><n|.
FockState number_fock(std::size_t n, std::size_t cutoff);

// ---------------------------------------------------------------------------
// Angle representation

/// Angular coherence function sampled at theta_a = 2 pi a / M on both axes.
struct AngularCoherence {
  std::size_t grid_size = 0;
  ComplexMatrix samples;  // samples(a, b) = W(theta_a, theta_b)

  double spacing() const;
  /// (2 pi / M) sum_a W(theta_a, theta_a)
  double trace_quadrature() const;
};

/// Samples W(theta, theta') = (1/2pi) sum c_ll' e^{i(l theta - l' theta')}.
/// Requires M >= 2(2D+1) (GridTooCoarse otherwise), which makes the quadrature
/// of any product of two band-limited samples exact.
AngularCoherence oam_to_angle(const OamState& s, std::size_t grid_size);

/// sqrt((2pi/M)^2 sum |W|^2). Throws NotHermitian or NotNormalized when the
/// trace quadrature differs from 1 by more than `tol`.
double p_inf_angle(const AngularCoherence& w, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Finite position/momentum space

/// (2D+1)-point momentum lattice p_j = j dp, dp = p_max / D, and the conjugate
/// position lattice x_m = m dx with dx = 2 pi hbar / ((2D+1) dp); j, m in [-D, D].
class CvGrid {
 public:
  CvGrid(std::size_t half_width, double p_max, double hbar = kDefaultHbar);

  std::size_t half_width() const { return half_width_; }
  std::size_t size() const { return 2 * half_width_ + 1; }
  double p_max() const { return p_max_; }
  double hbar() const { return hbar_; }
  double delta_p() const { return delta_p_; }
  double delta_x() const { return delta_x_; }
  double x(long m) const { return static_cast<double>(m) * delta_x_; }
  double p(long j) const { return static_cast<double>(j) * delta_p_; }
  /// Row/column index of lattice label m in [-D, D].
  Eigen::Index slot(long m) const { return static_cast<Eigen::Index>(m + static_cast<long>(half_width_)); }

  /// F(j, m) = <p_j|x_m> = e^{-2 pi i m j/(2D+1)} / sqrt(2D+1).
  ComplexMatrix basis_change() const;

  /// <x|x'> for arbitrary positions: the normalized Dirichlet kernel
  /// sin((2D+1) u) / ((2D+1) sin u) with u = (x - x') dp / (2 hbar).
  double position_overlap(double x, double x_prime) const;

  bool operator==(const CvGrid& other) const;

 private:
  std::size_t half_width_;
  double p_max_;
  double hbar_;
  double delta_p_;
  double delta_x_;
};

/// Throws InvalidParameter unless D >= 1, p_max > 0 and hbar > 0.
CvGrid build_cv_grid(std::size_t half_width, double p_max, double hbar = kDefaultHbar);

enum class CvRepresentation { Position, Momentum };

/// Density matrix on the finite lattice in the position basis (G_mn) or the
/// momentum basis (Gamma_jk). Checked on construction: Hermitian within 1e-12,
/// diagonal sum 1 within 1e-10, eigenvalues >= -1e-10.
class CvState {
 public:
  CvState(CvGrid grid, CvRepresentation representation, ComplexMatrix matrix);

  const CvGrid& grid() const { return grid_; }
  CvRepresentation representation() const { return representation_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  CvState to_position() const;
  CvState to_momentum() const;

 private:
  CvGrid grid_;
  CvRepresentation representation_;
  ComplexMatrix matrix_;
};

/// Pure Gaussian psi(x) ~ exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar), sampled at
/// the lattice and normalized.
CvState gaussian_cv(double sigma_x, double x0, double p0, const CvGrid& grid);

/// Thermal oscillator state with ground-state width sigma0 (default
/// sqrt(hbar/2), unit mass and frequency). The kernel
///   G(x,x') ~ exp(-(x+x')^2/(8 s^2) - (x-x')^2 (1/(8 s^2) + 1/(2 xi^2)))
/// with s^2 = sigma0^2 (2 nbar + 1) and xi = 2 s / sqrt((2 nbar+1)^2 - 1) is
/// sampled times dx and renormalized.
CvState thermal_cv(double nbar, const CvGrid& grid, double sigma0 = -1.0);

/// sqrt(sum |G_mn|^2), which is the Riemann sum of the continuum double
/// integral of |G(x,x')|^2 and is identical in either representation.
double p_inf_cv(const CvState& s);

struct CommutatorCheck {
  Complex expectation;
  double deviation = 0.0;      // |expectation - i hbar|
  double trace_norm = 0.0;     // |Tr [x,p]|
  double max_diagonal = 0.0;   // max_m |<x_m|[x,p]|x_m>|
};

/// Matrix of [x, p] in the position basis of the grid.
ComplexMatrix commutator_matrix(const CvGrid& grid);

/// Tr(rho [x, p]) for the probe state. Throws GridMismatch when the probe lives
/// on a different grid and InternalInvariantViolation when the commutator's
/// trace or diagonal exceed 1e-10.
CommutatorCheck commutator_check(const CvGrid& grid, const CvState& probe);

// ---------------------------------------------------------------------------
// Wigner function

/// Real samples W(x_i, p_k) on a uniform rectangle including both endpoints.
struct WignerSamples {
  double x_min = 0.0;
  double x_max = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  Eigen::MatrixXd values;  // rows: x, cols: p

  double dx() const;
  double dp() const;
  double x_at(Eigen::Index i) const { return x_min + static_cast<double>(i) * dx(); }
  double p_at(Eigen::Index k) const { return p_min + static_cast<double>(k) * dp(); }
  /// dx dp sum W
  double normalization() const;
};

/// Closed-form Gaussian Wigner function
/// exp(-(x-x0)^2/(2 sx^2) - (p-p0)^2/(2 sp^2)) / (2 pi sx sp). InvalidParameter
/// when sx sp < hbar/2.
WignerSamples gaussian_wigner(double sigma_x, double sigma_p, double x0, double p0, double x_lim,
                              double p_lim, std::size_t steps, double hbar = kDefaultHbar);

/// sqrt(2 pi hbar dx dp sum W^2). Throws NotNormalized when dx dp sum W differs
/// from 1 by more than `tol`.
double p_inf_wigner(const WignerSamples& w, double hbar = kDefaultHbar, double tol = 1e-3);

/// W(x,p) = (1/(pi hbar)) int G(x+y, x-y) e^{-2ipy/hbar} dy with G = G_mn / dx
/// linearly interpolated between lattice points and y stepped by dx. The output
/// spans the position lattice in x and [-pi hbar/(2 dx), pi hbar/(2 dx)] in p
/// (half the alias period of the y sampling). GridMismatch for a momentum-basis
/// state.
WignerSamples wigner_from_cv(const CvState& s, std::size_t x_steps, std::size_t p_steps);

// ---------------------------------------------------------------------------
// Convergence ladders

struct LadderRung {
  std::size_t cutoff = 0;
  double p_max = 0.0;       // CV ladders only
  double value = 0.0;
  double difference = 0.0;  // value - previous rung's value (0 on the first rung)
};

struct ConvergenceLadder {
  std::vector<LadderRung> rungs;
  /// |last difference|, the error estimate of the last rung.
  double error_estimate() const;
  double final_value() const { return rungs.empty() ? 0.0 : rungs.back().value; }
};

/// Evaluates `route` for each cutoff.
ConvergenceLadder truncation_ladder(std::span<const std::size_t> cutoffs,
                                    const std::function<double(std::size_t)>& route);

/// Grids with D from `cutoffs` and p_max = p_max_base * sqrt(D / cutoffs[0]),
/// so dp -> 0 while D dp -> infinity.
ConvergenceLadder cv_ladder(std::span<const std::size_t> cutoffs, double p_max_base, double hbar,
                            const std::function<double(const CvGrid&)>& route);

/// p_max for rung D of a ladder that starts at D0 with p_max_base.
double ladder_p_max(std::size_t cutoff, std::size_t first_cutoff, double p_max_base);

}  // namespace coherence
