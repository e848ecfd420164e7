#include "coherence/infdim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "coherence/error.hpp"

namespace coherence {

namespace {

using Idx = Eigen::Index;
constexpr double kPi = std::numbers::pi;

double sum_abs2(const ComplexMatrix& m) {
  std::vector<double> terms(static_cast<std::size_t>(m.size()));
  for (Idx k = 0; k < m.size(); ++k) terms[static_cast<std::size_t>(k)] = std::norm(m.data()[k]);
  return pairwise_sum(terms);
}

double hermitian_defect(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Idx i = 0; i < m.rows(); ++i) {
    for (Idx j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw CoherenceError(ErrorCode::EigenSolverFailure, "eigensolver did not converge");
  }
  return solver.eigenvalues().minCoeff();
}

void check_state_matrix(const ComplexMatrix& m, double herm_tol, double trace_tol,
                        const char* what) {
  for (Idx k = 0; k < m.size(); ++k) {
    if (!std::isfinite(m.data()[k].real()) || !std::isfinite(m.data()[k].imag())) {
      throw CoherenceError(ErrorCode::NotFinite, std::string(what) + " has a non-finite entry");
    }
  }
  const double herm = hermitian_defect(m);
  if (herm > herm_tol) {
    std::ostringstream os;
    os << what << ": Hermiticity defect " << herm;
    throw CoherenceError(ErrorCode::NotHermitian, os.str());
  }
  const double trace = m.trace().real();
  if (std::abs(trace - 1.0) > trace_tol) {
    std::ostringstream os;
    os << what << ": trace " << trace << " differs from 1 by more than " << trace_tol;
    throw CoherenceError(ErrorCode::NotNormalized, os.str());
  }
  const double lowest = min_eigenvalue(m);
  if (lowest < -1e-10) {
    std::ostringstream os;
    os << what << ": minimum eigenvalue " << lowest;
    throw CoherenceError(ErrorCode::NotPSD, os.str());
  }
}

TruncatedEstimate truncated_p_inf(const ComplexMatrix& c, double tail) {
  const double sum = sum_abs2(c);
  if (sum == 0.0) throw CoherenceError(ErrorCode::EmptyState, "all coefficients are zero");
  TruncatedEstimate out;
  out.value = std::sqrt(sum);
  out.error_bound = out.value > 0.0 ? tail / (2.0 * out.value) : std::sqrt(tail);
  return out;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw CoherenceError(ErrorCode::InvalidParameter, std::string(name) + " must be finite and > 0");
  }
}

// Bilinear interpolation of a lattice function with spacing h centred on 0,
// zero outside [-D h, D h].
Complex interpolate(const ComplexMatrix& g, std::size_t half_width, double h, double x,
                    double y) {
  const auto d = static_cast<double>(half_width);
  const double u = x / h + d;
  const double v = y / h + d;
  const double top = 2.0 * d;
  if (u < 0.0 || v < 0.0 || u > top || v > top) return {0.0, 0.0};
  const auto i0 = static_cast<Idx>(std::min(std::floor(u), top - 1.0));
  const auto j0 = static_cast<Idx>(std::min(std::floor(v), top - 1.0));
  const double fu = u - static_cast<double>(i0);
  const double fv = v - static_cast<double>(j0);
  return (1.0 - fu) * (1.0 - fv) * g(i0, j0) + fu * (1.0 - fv) * g(i0 + 1, j0) +
         (1.0 - fu) * fv * g(i0, j0 + 1) + fu * fv * g(i0 + 1, j0 + 1);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// ---------------------------------------------------------------------------

template <DiscreteBasis Basis>
TruncatedState<Basis>::TruncatedState(std::size_t cutoff, ComplexMatrix coefficients,
                                      double tail_bound)
    : cutoff_(cutoff), coefficients_(std::move(coefficients)), tail_bound_(tail_bound) {
  const auto expected = static_cast<Idx>(Basis == DiscreteBasis::Oam ? 2 * cutoff + 1 : cutoff + 1);
  if (coefficients_.rows() != expected || coefficients_.cols() != expected) {
    std::ostringstream os;
    os << "coefficient matrix is " << coefficients_.rows() << "x" << coefficients_.cols()
       << ", cutoff " << cutoff << " needs " << expected << "x" << expected;
    throw CoherenceError(ErrorCode::WrongDimension, os.str());
  }
  if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound)) {
    throw CoherenceError(ErrorCode::InvalidParameter, "tail bound must be finite and >= 0");
  }
  if (sum_abs2(coefficients_) == 0.0) {
    throw CoherenceError(ErrorCode::EmptyState, "all coefficients are zero");
  }
  check_state_matrix(coefficients_, 1e-12, tail_bound + 1e-12,
                     Basis == DiscreteBasis::Oam ? "OAM state" : "Fock state");
}

template <DiscreteBasis Basis>
long TruncatedState<Basis>::first_index() const {
  return Basis == DiscreteBasis::Oam ? -static_cast<long>(cutoff_) : 0L;
}

template <DiscreteBasis Basis>
Complex TruncatedState<Basis>::coefficient(long index, long index_prime) const {
  return coefficients_(static_cast<Idx>(index - first_index()),
                       static_cast<Idx>(index_prime - first_index()));
}

template class TruncatedState<DiscreteBasis::Oam>;
template class TruncatedState<DiscreteBasis::Fock>;

TruncatedEstimate p_inf_oam(const OamState& s) {
  return truncated_p_inf(s.coefficients(), s.tail_bound());
}

TruncatedEstimate p_inf_fock(const FockState& s) {
  return truncated_p_inf(s.coefficients(), s.tail_bound());
}

// The family constructors declare tail = 2 T with T the trace mass beyond the
// cutoff: for a PSD state the |c|^2 mass touching the tail is at most 2 T.

OamState geometric_oam(double q, std::size_t cutoff) {
  if (!(q > 0.0 && q < 1.0)) throw CoherenceError(ErrorCode::InvalidParameter, "q must lie in (0, 1)");
  const auto size = static_cast<Idx>(2 * cutoff + 1);
  ComplexMatrix c = ComplexMatrix::Zero(size, size);
  double weight = 1.0 - q;
  for (std::size_t l = 0; l <= cutoff; ++l) {
    const Idx k = static_cast<Idx>(cutoff + l);
    c(k, k) = weight;
    weight *= q;
  }
  const double tail = std::pow(q, static_cast<double>(cutoff + 1));
  return {cutoff, std::move(c), 2.0 * tail};
}

OamState oam_mode(long l, std::size_t cutoff) {
  if (std::labs(l) > static_cast<long>(cutoff)) {
    throw CoherenceError(ErrorCode::InvalidParameter, "mode index outside the cutoff window");
  }
  const auto size = static_cast<Idx>(2 * cutoff + 1);
  ComplexMatrix c = ComplexMatrix::Zero(size, size);
  const auto k = static_cast<Idx>(l + static_cast<long>(cutoff));
  c(k, k) = 1.0;
  return {cutoff, std::move(c), 0.0};
}

OamState uniform_oam(std::size_t cutoff) {
  const auto size = static_cast<Idx>(2 * cutoff + 1);
  ComplexMatrix c = ComplexMatrix::Identity(size, size) / static_cast<double>(size);
  return {cutoff, std::move(c), 0.0};
}

FockState thermal_fock(double nbar, std::size_t cutoff) {
  require_positive(nbar, "nbar");
  const auto size = static_cast<Idx>(cutoff + 1);
  const double ratio = nbar / (nbar + 1.0);
  ComplexMatrix a = ComplexMatrix::Zero(size, size);
  double weight = 1.0 / (nbar + 1.0);
  for (Idx n = 0; n < size; ++n) {
    a(n, n) = weight;
    weight *= ratio;
  }
  const double tail = std::pow(ratio, static_cast<double>(cutoff + 1));
  return {cutoff, std::move(a), 2.0 * tail};
}

FockState coherent_fock(Complex alpha, std::size_t cutoff) {
  const double mean = std::norm(alpha);
  const auto size = static_cast<Idx>(cutoff + 1);
  ComplexVector amp(size);
  // <n|alpha> = e^{-|alpha|^2/2} alpha^n / sqrt(n!), built by recurrence.
  amp(0) = std::exp(-0.5 * mean);
  for (Idx n = 1; n < size; ++n) amp(n) = amp(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  // Poisson tail beyond D: p_{D+1} / (1 - mean/(D+2)) bounds the geometric majorant.
  const double next = std::norm(amp(size - 1) * alpha) / static_cast<double>(cutoff + 1);
  const double denom = 1.0 - mean / static_cast<double>(cutoff + 2);
  if (denom <= 0.0) {
    throw CoherenceError(ErrorCode::InvalidParameter, "cutoff too small for |alpha|^2");
  }
  const double tail = next / denom;
  return {cutoff, amp * amp.adjoint(), 2.0 * tail};
}

FockState number_fock(std::size_t n, std::size_t cutoff) {
  if (n > cutoff) throw CoherenceError(ErrorCode::InvalidParameter, "n exceeds the cutoff");
  const auto size = static_cast<Idx>(cutoff + 1);
  ComplexMatrix a = ComplexMatrix::Zero(size, size);
  a(static_cast<Idx>(n), static_cast<Idx>(n)) = 1.0;
  return {cutoff, std::move(a), 0.0};
}

// ---------------------------------------------------------------------------

double AngularCoherence::spacing() const { return 2.0 * kPi / static_cast<double>(grid_size); }

double AngularCoherence::trace_quadrature() const {
  std::vector<double> diag(grid_size);
  for (std::size_t a = 0; a < grid_size; ++a) {
    diag[a] = samples(static_cast<Idx>(a), static_cast<Idx>(a)).real();
  }
  return spacing() * pairwise_sum(diag);
}

AngularCoherence oam_to_angle(const OamState& s, std::size_t grid_size) {
  const std::size_t modes = 2 * s.cutoff() + 1;
  if (grid_size < 2 * modes) {
    std::ostringstream os;
    os << "grid of " << grid_size << " angles cannot resolve " << modes << " OAM modes (need "
       << 2 * modes << ")";
    throw CoherenceError(ErrorCode::GridTooCoarse, os.str());
  }
  const auto m = static_cast<Idx>(grid_size);
  const auto l_count = static_cast<Idx>(modes);
  const long first = s.first_index();
  ComplexMatrix e(m, l_count);
  for (Idx a = 0; a < m; ++a) {
    for (Idx k = 0; k < l_count; ++k) {
      // Reduce l*a mod M so the phase angle is exact.
      const long l = first + static_cast<long>(k);
      long r = (l * static_cast<long>(a)) % static_cast<long>(grid_size);
      if (r < 0) r += static_cast<long>(grid_size);
      e(a, k) = std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(grid_size));
    }
  }
  AngularCoherence w;
  w.grid_size = grid_size;
  w.samples = e * s.coefficients() * e.adjoint() / (2.0 * kPi);
  return w;
}

double p_inf_angle(const AngularCoherence& w, double tol) {
  const auto m = static_cast<Idx>(w.grid_size);
  if (w.grid_size < 1 || w.samples.rows() != m || w.samples.cols() != m) {
    throw CoherenceError(ErrorCode::WrongDimension, "sample matrix does not match the grid size");
  }
  const double herm = hermitian_defect(w.samples);
  if (herm > 1e-12) {
    std::ostringstream os;
    os << "angular coherence Hermiticity defect " << herm;
    throw CoherenceError(ErrorCode::NotHermitian, os.str());
  }
  const double trace = w.trace_quadrature();
  if (std::abs(trace - 1.0) > tol) {
    std::ostringstream os;
    os << "trace quadrature " << trace << " differs from 1 by more than " << tol;
    throw CoherenceError(ErrorCode::NotNormalized, os.str());
  }
  const double h = w.spacing();
  return std::sqrt(h * h * sum_abs2(w.samples));
}

// ---------------------------------------------------------------------------

CvGrid::CvGrid(std::size_t half_width, double p_max, double hbar)
    : half_width_(half_width), p_max_(p_max), hbar_(hbar) {
  if (half_width < 1) throw CoherenceError(ErrorCode::InvalidParameter, "D must be >= 1");
  require_positive(p_max, "p_max");
  require_positive(hbar, "hbar");
  delta_p_ = p_max / static_cast<double>(half_width);
  delta_x_ = 2.0 * kPi * hbar / (static_cast<double>(size()) * delta_p_);
}

ComplexMatrix CvGrid::basis_change() const {
  const auto n = static_cast<Idx>(size());
  const auto d = static_cast<long>(half_width_);
  const auto period = static_cast<long>(size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(size()));
  ComplexMatrix f(n, n);
  for (long j = -d; j <= d; ++j) {
    for (long m = -d; m <= d; ++m) {
      long r = (m * j) % period;
      if (r < 0) r += period;
      f(slot(j), slot(m)) =
          std::polar(scale, -2.0 * kPi * static_cast<double>(r) / static_cast<double>(period));
    }
  }
  return f;
}

double CvGrid::position_overlap(double x, double x_prime) const {
  const double u = (x - x_prime) * delta_p_ / (2.0 * hbar_);
  const double n = static_cast<double>(size());
  const double den = n * std::sin(u);
  if (std::abs(den) < 1e-300) {
    // Removable singularity at u = k pi: limit is (+-1)^{k(n-1)} = 1 for odd n.
    return 1.0;
  }
  return std::sin(n * u) / den;
}

bool CvGrid::operator==(const CvGrid& other) const {
  return half_width_ == other.half_width_ && p_max_ == other.p_max_ && hbar_ == other.hbar_;
}

CvGrid build_cv_grid(std::size_t half_width, double p_max, double hbar) {
  return CvGrid(half_width, p_max, hbar);
}

CvState::CvState(CvGrid grid, CvRepresentation representation, ComplexMatrix matrix)
    : grid_(grid), representation_(representation), matrix_(std::move(matrix)) {
  const auto n = static_cast<Idx>(grid_.size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    std::ostringstream os;
    os << "matrix is " << matrix_.rows() << "x" << matrix_.cols() << ", grid needs " << n << "x" << n;
    throw CoherenceError(ErrorCode::WrongDimension, os.str());
  }
  check_state_matrix(matrix_, 1e-12, 1e-10, "CV state");
}

CvState CvState::to_momentum() const {
  if (representation_ == CvRepresentation::Momentum) return *this;
  const ComplexMatrix f = grid_.basis_change();
  ComplexMatrix gamma = f * matrix_ * f.adjoint();
  gamma = 0.5 * (gamma + gamma.adjoint()).eval();
  return {grid_, CvRepresentation::Momentum, std::move(gamma)};
}

CvState CvState::to_position() const {
  if (representation_ == CvRepresentation::Position) return *this;
  const ComplexMatrix f = grid_.basis_change();
  ComplexMatrix g = f.adjoint() * matrix_ * f;
  g = 0.5 * (g + g.adjoint()).eval();
  return {grid_, CvRepresentation::Position, std::move(g)};
}

CvState gaussian_cv(double sigma_x, double x0, double p0, const CvGrid& grid) {
  require_positive(sigma_x, "sigma_x");
  const auto d = static_cast<long>(grid.half_width());
  ComplexVector psi(static_cast<Idx>(grid.size()));
  for (long m = -d; m <= d; ++m) {
    const double x = grid.x(m);
    const double env = std::exp(-(x - x0) * (x - x0) / (4.0 * sigma_x * sigma_x));
    psi(grid.slot(m)) = std::polar(env, p0 * x / grid.hbar());
  }
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw CoherenceError(ErrorCode::EmptyState, "Gaussian underflows on the grid");
  psi /= norm;
  ComplexMatrix g = psi * psi.adjoint();
  g = 0.5 * (g + g.adjoint()).eval();
  return {grid, CvRepresentation::Position, std::move(g)};
}

CvState thermal_cv(double nbar, const CvGrid& grid, double sigma0) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw CoherenceError(ErrorCode::InvalidParameter, "nbar must be finite and >= 0");
  }
  if (sigma0 <= 0.0) sigma0 = std::sqrt(grid.hbar() / 2.0);
  const double k = 2.0 * nbar + 1.0;
  const double s2 = sigma0 * sigma0 * k;
  const double sum_coeff = 1.0 / (8.0 * s2);
  // 1/(8 s^2) + 1/(2 xi^2) = (2 nbar + 1)^2 / (8 s^2)
  const double diff_coeff = k * k / (8.0 * s2);
  const auto d = static_cast<long>(grid.half_width());
  const auto n = static_cast<Idx>(grid.size());
  ComplexMatrix g(n, n);
  for (long a = -d; a <= d; ++a) {
    for (long b = -d; b <= d; ++b) {
      const double sum = grid.x(a) + grid.x(b);
      const double diff = grid.x(a) - grid.x(b);
      g(grid.slot(a), grid.slot(b)) =
          std::exp(-sum * sum * sum_coeff - diff * diff * diff_coeff) * grid.delta_x();
    }
  }
  const double trace = g.trace().real();
  if (!(trace > 0.0)) throw CoherenceError(ErrorCode::EmptyState, "thermal kernel underflows on the grid");
  g /= trace;
  return {grid, CvRepresentation::Position, std::move(g)};
}

double p_inf_cv(const CvState& s) { return std::sqrt(sum_abs2(s.matrix())); }

ComplexMatrix commutator_matrix(const CvGrid& grid) {
  const ComplexMatrix f = grid.basis_change();
  const auto n = static_cast<Idx>(grid.size());
  const auto d = static_cast<long>(grid.half_width());
  RealVector p_diag(n);
  RealVector x_diag(n);
  for (long j = -d; j <= d; ++j) {
    p_diag(grid.slot(j)) = grid.p(j);
    x_diag(grid.slot(j)) = grid.x(j);
  }
  // p in the position basis: <x_m|p|x_n> = sum_j p_j <x_m|p_j><p_j|x_n>.
  const ComplexMatrix p_op = f.adjoint() * p_diag.cast<Complex>().asDiagonal() * f;
  ComplexMatrix c(n, n);
  for (Idx a = 0; a < n; ++a) {
    for (Idx b = 0; b < n; ++b) c(a, b) = (x_diag(a) - x_diag(b)) * p_op(a, b);
  }
  return c;
}

CommutatorCheck commutator_check(const CvGrid& grid, const CvState& probe) {
  if (!(probe.grid() == grid)) {
    throw CoherenceError(ErrorCode::GridMismatch, "probe state lives on a different grid");
  }
  const ComplexMatrix c = commutator_matrix(grid);
  const ComplexMatrix rho = probe.to_position().matrix();
  CommutatorCheck out;
  out.trace_norm = std::abs(c.trace());
  for (Idx a = 0; a < c.rows(); ++a) out.max_diagonal = std::max(out.max_diagonal, std::abs(c(a, a)));
  if (out.trace_norm > 1e-10 || out.max_diagonal > 1e-10) {
    std::ostringstream os;
    os << "commutator trace " << out.trace_norm << ", max diagonal " << out.max_diagonal;
    throw CoherenceError(ErrorCode::InternalInvariantViolation, os.str());
  }
  // Tr(rho C) = sum_mn rho_mn C_nm
  out.expectation = (rho.transpose().cwiseProduct(c)).sum();
  out.deviation = std::abs(out.expectation - Complex(0.0, grid.hbar()));
  return out;
}

// ---------------------------------------------------------------------------

double WignerSamples::dx() const {
  return values.rows() > 1 ? (x_max - x_min) / static_cast<double>(values.rows() - 1) : 0.0;
}

double WignerSamples::dp() const {
  return values.cols() > 1 ? (p_max - p_min) / static_cast<double>(values.cols() - 1) : 0.0;
}

double WignerSamples::normalization() const {
  std::vector<double> v(values.data(), values.data() + values.size());
  return dx() * dp() * pairwise_sum(v);
}

WignerSamples gaussian_wigner(double sigma_x, double sigma_p, double x0, double p0, double x_lim,
                              double p_lim, std::size_t steps, double hbar) {
  require_positive(sigma_x, "sigma_x");
  require_positive(sigma_p, "sigma_p");
  require_positive(x_lim, "x range");
  require_positive(p_lim, "p range");
  require_positive(hbar, "hbar");
  if (sigma_x * sigma_p < 0.5 * hbar * (1.0 - 1e-12)) {
    throw CoherenceError(ErrorCode::InvalidParameter, "sigma_x sigma_p below hbar/2");
  }
  if (steps < 2) throw CoherenceError(ErrorCode::InvalidParameter, "need at least 2 steps");
  WignerSamples w;
  w.x_min = x0 - x_lim;
  w.x_max = x0 + x_lim;
  w.p_min = p0 - p_lim;
  w.p_max = p0 + p_lim;
  const auto n = static_cast<Idx>(steps);
  w.values.resize(n, n);
  const double norm = 1.0 / (2.0 * kPi * sigma_x * sigma_p);
  for (Idx i = 0; i < n; ++i) {
    const double dx = (w.x_at(i) - x0) / sigma_x;
    for (Idx k = 0; k < n; ++k) {
      const double dp = (w.p_at(k) - p0) / sigma_p;
      w.values(i, k) = norm * std::exp(-0.5 * (dx * dx + dp * dp));
    }
  }
  return w;
}

double p_inf_wigner(const WignerSamples& w, double hbar, double tol) {
  require_positive(hbar, "hbar");
  if (w.values.rows() < 2 || w.values.cols() < 2) {
    throw CoherenceError(ErrorCode::InvalidParameter, "Wigner grid needs at least 2x2 samples");
  }
  const double norm = w.normalization();
  if (std::abs(norm - 1.0) > tol) {
    std::ostringstream os;
    os << "dx dp sum W = " << norm << " differs from 1 by more than " << tol;
    throw CoherenceError(ErrorCode::NotNormalized, os.str());
  }
  std::vector<double> squares(static_cast<std::size_t>(w.values.size()));
  for (Idx k = 0; k < w.values.size(); ++k) {
    squares[static_cast<std::size_t>(k)] = w.values.data()[k] * w.values.data()[k];
  }
  return std::sqrt(2.0 * kPi * hbar * w.dx() * w.dp() * pairwise_sum(squares));
}

WignerSamples wigner_from_cv(const CvState& s, std::size_t x_steps, std::size_t p_steps) {
  if (s.representation() != CvRepresentation::Position) {
    throw CoherenceError(ErrorCode::GridMismatch, "Wigner transform needs the position representation");
  }
  if (x_steps < 2 || p_steps < 2) {
    throw CoherenceError(ErrorCode::InvalidParameter, "need at least 2 steps per axis");
  }
  const CvGrid& grid = s.grid();
  const double h = grid.delta_x();
  const double hbar = grid.hbar();
  const std::size_t half = grid.half_width();
  const ComplexMatrix g = s.matrix() / h;

  WignerSamples w;
  w.x_min = grid.x(-static_cast<long>(half));
  w.x_max = grid.x(static_cast<long>(half));
  w.p_max = kPi * hbar / (2.0 * h);
  w.p_min = -w.p_max;
  w.values.resize(static_cast<Idx>(x_steps), static_cast<Idx>(p_steps));

  // phase(k, b) = e^{-2 i p_b y_k / hbar} with y_k = k h, k = 1..D.
  const auto y_count = static_cast<Idx>(half);
  ComplexMatrix phase(y_count, static_cast<Idx>(p_steps));
  for (Idx k = 0; k < y_count; ++k) {
    const double y = static_cast<double>(k + 1) * h;
    for (Idx b = 0; b < static_cast<Idx>(p_steps); ++b) {
      phase(k, b) = std::polar(1.0, -2.0 * w.p_at(b) * y / hbar);
    }
  }

  const double prefactor = h / (kPi * hbar);
  ComplexVector f(y_count);
  for (Idx i = 0; i < static_cast<Idx>(x_steps); ++i) {
    const double x = w.x_at(i);
    const double f0 = interpolate(g, half, h, x, x).real();
    for (Idx k = 0; k < y_count; ++k) {
      const double y = static_cast<double>(k + 1) * h;
      f(k) = interpolate(g, half, h, x + y, x - y);
    }
    // f(-y) = conj f(y), so the transform is f(0) + 2 Re sum_{y>0}.
    const Eigen::RowVectorXcd sums = f.transpose() * phase;
    for (Idx b = 0; b < static_cast<Idx>(p_steps); ++b) {
      w.values(i, b) = prefactor * (f0 + 2.0 * sums(b).real());
    }
  }
  return w;
}

// ---------------------------------------------------------------------------

double ConvergenceLadder::error_estimate() const {
  return rungs.size() < 2 ? 0.0 : std::abs(rungs.back().difference);
}

ConvergenceLadder truncation_ladder(std::span<const std::size_t> cutoffs,
                                    const std::function<double(std::size_t)>& route) {
  ConvergenceLadder ladder;
  for (std::size_t d : cutoffs) {
    LadderRung rung;
    rung.cutoff = d;
    rung.value = route(d);
    rung.difference = ladder.rungs.empty() ? 0.0 : rung.value - ladder.rungs.back().value;
    ladder.rungs.push_back(rung);
  }
  return ladder;
}

double ladder_p_max(std::size_t cutoff, std::size_t first_cutoff, double p_max_base) {
  return p_max_base * std::sqrt(static_cast<double>(cutoff) / static_cast<double>(first_cutoff));
}

ConvergenceLadder cv_ladder(std::span<const std::size_t> cutoffs, double p_max_base, double hbar,
                            const std::function<double(const CvGrid&)>& route) {
  ConvergenceLadder ladder;
  if (cutoffs.empty()) return ladder;
  for (std::size_t d : cutoffs) {
    LadderRung rung;
    rung.cutoff = d;
    rung.p_max = ladder_p_max(d, cutoffs.front(), p_max_base);
    rung.value = route(build_cv_grid(d, rung.p_max, hbar));
    rung.difference = ladder.rungs.empty() ? 0.0 : rung.value - ladder.rungs.back().value;
    ladder.rungs.push_back(rung);
  }
  return ladder;
}

}  // namespace coherence
