#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <variant>

#include <Eigen/Dense>

namespace coherence {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-9;

/// A validated density matrix: square, N >= 2, Hermitian, unit trace, PSD.
///
/// Only obtainable through validate_density() (or helpers that call it), so
/// holding one is proof the invariants were checked. Immutable.
class DensityMatrix {
 public:
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double tolerance() const { return tolerance_; }

 private:
  DensityMatrix(ComplexMatrix m, double tol) : matrix_(std::move(m)), tolerance_(tol) {}
  friend DensityMatrix validate_density(const ComplexMatrix& m, double tol);

  ComplexMatrix matrix_;
  double tolerance_;
};

/// Eigenvalues sorted descending; column k of `eigenvectors` pairs with
/// eigenvalues[k].
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Checks squareness, finiteness, Hermiticity, unit trace and positivity.
/// Eigenvalues in [-tol, 0) are clamped to zero and the trace renormalized.
/// Throws CoherenceError (NotSquare, NotFinite, DimensionTooSmall,
/// NotHermitian, NotUnitTrace, NotPSD).
DensityMatrix validate_density(const ComplexMatrix& m, double tol = kDefaultTolerance);

/// Descending spectrum with canonical eigenvectors. Within a degenerate block
/// (eigenvalues closer than 1e-12) the eigenvectors are rebuilt from the
/// projector onto the block, phase-fixed so the first nonzero component is real
/// positive, and ordered by descending lexicographic (re, im) order.
Spectrum spectral_decompose(const DensityMatrix& rho);

/// Same canonicalization for any Hermitian matrix.
Spectrum hermitian_spectrum(const ComplexMatrix& h);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

/// Sum_k lambda_k |psi_k><psi_k|.
ComplexMatrix reconstruct(const Spectrum& spectrum);

/// U^dagger rho U, i.e. rho expressed in the basis formed by the columns of U.
ComplexMatrix in_basis(const ComplexMatrix& rho, const ComplexMatrix& unitary);

DensityMatrix maximally_mixed(std::size_t dim);
/// |psi><psi| / <psi|psi>.
DensityMatrix pure_state(const ComplexVector& psi);
/// diag(p) for a probability vector p.
DensityMatrix diagonal_state(std::span<const double> probabilities);

struct HaarPure {};
struct GinibreMixed {};
struct RankK {
  std::size_t rank;
};
using StateKind = std::variant<HaarPure, GinibreMixed, RankK>;

/// Matrix of independent standard complex Gaussians.
ComplexMatrix complex_ginibre(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

/// Seeded random density matrix. haar_pure: |psi><psi| with psi uniform on the
/// sphere; ginibre_mixed: G G^dagger / Tr; rank_k: same with G of shape N x k.
DensityMatrix random_state(std::size_t dim, const StateKind& kind, std::uint64_t seed);

}  // namespace coherence
