#include "coherence/basis_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "coherence/error.hpp"
#include "coherence/measures.hpp"

namespace coherence {

namespace {

using Idx = Eigen::Index;

constexpr double kInitialStep = 0.5;
constexpr double kMinStep = 1e-6;
constexpr std::size_t kRejectionsBeforeShrink = 20;
constexpr std::size_t kRefreshEvery = 1000;

// Q from QR with the phases of diag(R) moved into Q, so that the map from
// Ginibre matrices to U(N) is Haar and idempotent on unitaries.
ComplexMatrix unitary_from_qr(const ComplexMatrix& g) {
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Idx k = 0; k < g.cols(); ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

struct Move {
  Idx p;
  Idx q;
  double cos_t;
  double sin_t;
  Complex phase;                // e^{i phi}
  std::vector<Complex> diag;    // random diagonal phases
};

// M <- M G D, applied to the columns of M.
void apply_right(ComplexMatrix& m, const Move& mv) {
  const ComplexVector col_p = m.col(mv.p);
  const ComplexVector col_q = m.col(mv.q);
  m.col(mv.p) = mv.cos_t * col_p + std::conj(mv.phase) * mv.sin_t * col_q;
  m.col(mv.q) = -mv.phase * mv.sin_t * col_p + mv.cos_t * col_q;
  for (Idx k = 0; k < m.cols(); ++k) m.col(k) *= mv.diag[static_cast<std::size_t>(k)];
}

// A <- D^dagger G^dagger A G D.
void conjugate(ComplexMatrix& a, const Move& mv) {
  apply_right(a, mv);
  const Eigen::RowVectorXcd row_p = a.row(mv.p);
  const Eigen::RowVectorXcd row_q = a.row(mv.q);
  a.row(mv.p) = mv.cos_t * row_p + mv.phase * mv.sin_t * row_q;
  a.row(mv.q) = -std::conj(mv.phase) * mv.sin_t * row_p + mv.cos_t * row_q;
  for (Idx k = 0; k < a.rows(); ++k) a.row(k) *= std::conj(mv.diag[static_cast<std::size_t>(k)]);
}

}  // namespace

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m, double tol) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw CoherenceError(ErrorCode::NotSquare, "unitary must be square");
  }
  const double err = unitarity_error();
  if (!(err <= tol)) {
    std::ostringstream os;
    os << "||U^dagger U - 1||_F = " << err << " exceeds " << tol;
    throw CoherenceError(ErrorCode::InvalidParameter, os.str());
  }
}

double UnitaryMatrix::unitarity_error() const {
  const Idx n = matrix_.rows();
  return (matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(n, n)).norm();
}

UnitaryMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw CoherenceError(ErrorCode::DimensionTooSmall, "dimension must be at least 2");
  std::mt19937_64 rng(seed);
  return UnitaryMatrix(unitary_from_qr(complex_ginibre(dim, dim, rng)));
}

ComplexMatrix fourier_unitary(std::size_t dim) {
  const auto n = static_cast<Idx>(dim);
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Idx j = 0; j < n; ++j) {
    for (Idx k = 0; k < n; ++k) {
      // Reduce jk mod N before scaling to keep the angle small and exact.
      const auto r = static_cast<double>((j * k) % n);
      f(j, k) = std::polar(scale, 2.0 * std::numbers::pi * r / static_cast<double>(dim));
    }
  }
  return f;
}

UnitaryMatrix eigen_basis(const DensityMatrix& rho) {
  return UnitaryMatrix(spectral_decompose(rho).eigenvectors);
}

UnitaryMatrix equalizing_basis(const DensityMatrix& rho) {
  return UnitaryMatrix(spectral_decompose(rho).eigenvectors * fourier_unitary(rho.dim()));
}

std::string_view to_string(SearchTarget target) {
  return target == SearchTarget::Mu ? "mu" : "visibility";
}

double search_objective(SearchTarget target, const ComplexMatrix& a) {
  if (target == SearchTarget::Mu) return try_mu_n(a).value_or(0.0);
  std::vector<double> probs(static_cast<std::size_t>(a.rows()));
  for (Idx i = 0; i < a.rows(); ++i) probs[static_cast<std::size_t>(i)] = std::max(a(i, i).real(), 0.0);
  return visibility_f(probs);
}

MaximizationResult maximize(SearchTarget target, const DensityMatrix& rho, std::size_t budget,
                            std::uint64_t seed, const SearchOptions& options) {
  if (budget < 1) throw CoherenceError(ErrorCode::InvalidParameter, "budget must be >= 1");
  const std::size_t dim = rho.dim();
  const auto n = static_cast<Idx>(dim);
  const ComplexMatrix& r = rho.matrix();
  const double ceiling = target == SearchTarget::Mu ? p_n(rho) : visibility(rho);
  const double ceiling_tol = target == SearchTarget::Mu ? 1e-9 : 1e-10;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Idx> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  MaximizationResult result;
  result.target = target;
  result.best_value = -1.0;

  auto record = [&](double value, const ComplexMatrix& u_of_value) {
    ++result.evaluations;
    if (options.verify_ceiling && value > ceiling + ceiling_tol) {
      std::ostringstream os;
      os << to_string(target) << " value " << value << " exceeds analytic ceiling " << ceiling
         << " at evaluation " << result.evaluations;
      throw CoherenceError(ErrorCode::InternalInvariantViolation, os.str());
    }
    if (value > result.best_value) {
      result.best_value = value;
      result.best_unitary = u_of_value;
    }
    if (options.trace_stride > 0 && result.evaluations % options.trace_stride == 0) {
      result.trace.emplace_back(result.evaluations, result.best_value);
    }
  };

  Move mv;
  mv.diag.resize(dim);
  ComplexMatrix candidate_a;
  ComplexMatrix candidate_u;

  while (result.evaluations < budget) {
    ComplexMatrix u;
    if (result.restarts == 0 && options.inject_analytic_seed) {
      u = (target == SearchTarget::Mu ? equalizing_basis(rho) : eigen_basis(rho)).matrix();
    } else {
      u = unitary_from_qr(complex_ginibre(dim, dim, rng));
    }
    ++result.restarts;
    ComplexMatrix a = in_basis(r, u);
    double current = search_objective(target, a);
    record(current, u);

    double step = kInitialStep;
    std::size_t rejections = 0;
    std::size_t accepted_since_refresh = 0;
    while (result.evaluations < budget) {
      mv.p = pick(rng);
      do {
        mv.q = pick(rng);
      } while (mv.q == mv.p);
      const double theta = step * (2.0 * unit(rng) - 1.0);
      mv.cos_t = std::cos(theta);
      mv.sin_t = std::sin(theta);
      mv.phase = std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
      for (auto& d : mv.diag) d = std::polar(1.0, step * (2.0 * unit(rng) - 1.0));

      candidate_a = a;
      conjugate(candidate_a, mv);
      const double value = search_objective(target, candidate_a);
      const bool improves_best = value > result.best_value;
      if (value > current || improves_best) {
        candidate_u = u;
        apply_right(candidate_u, mv);
      }
      record(value, improves_best ? candidate_u : u);

      if (value > current) {
        u.swap(candidate_u);
        a.swap(candidate_a);
        current = value;
        rejections = 0;
        ++result.iterations;
        if (++accepted_since_refresh >= kRefreshEvery) {
          u = unitary_from_qr(u);
          a = in_basis(r, u);
          accepted_since_refresh = 0;
        }
      } else if (++rejections >= kRejectionsBeforeShrink) {
        step *= 0.5;
        rejections = 0;
        if (step < kMinStep) {
          result.converged = true;
          break;
        }
      }
    }
  }
  if (options.trace_stride > 0 &&
      (result.trace.empty() || result.trace.back().first != result.evaluations)) {
    result.trace.emplace_back(result.evaluations, result.best_value);
  }
  result.best_unitary = unitary_from_qr(result.best_unitary);
  return result;
}

MaximizationResult maximize_mu(const DensityMatrix& rho, std::size_t budget, std::uint64_t seed,
                               const SearchOptions& options) {
  return maximize(SearchTarget::Mu, rho, budget, seed, options);
}

MaximizationResult maximize_visibility(const DensityMatrix& rho, std::size_t budget,
                                       std::uint64_t seed, const SearchOptions& options) {
  return maximize(SearchTarget::VisibilityF, rho, budget, seed, options);
}

bool is_majorized_by(std::span<const double> x, std::span<const double> y, double tol) {
  if (x.size() != y.size()) return false;
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    if (sx > sy + tol) return false;
  }
  return std::abs(sx - sy) <= tol;
}

}  // namespace coherence
