#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "coherence/state.hpp"

namespace coherence {

/// Unitary matrix; U^dagger U = 1 within 1e-10 is checked on construction.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix m, double tol = 1e-10);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  /// ||U^dagger U - 1||_F
  double unitarity_error() const;

 private:
  ComplexMatrix matrix_;
};

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with R's diagonal phases folded back into Q.
UnitaryMatrix haar_unitary(std::size_t dim, std::uint64_t seed);

/// N-point discrete Fourier unitary F_jk = exp(2 pi i jk/N)/sqrt(N).
ComplexMatrix fourier_unitary(std::size_t dim);

/// Eigenbasis of rho followed by the DFT: every diagonal entry of U^dagger rho U
/// equals 1/N, where mu_n attains P_N.
UnitaryMatrix equalizing_basis(const DensityMatrix& rho);

/// Eigenbasis of rho (the maximizer of f).
UnitaryMatrix eigen_basis(const DensityMatrix& rho);

enum class SearchTarget { Mu, VisibilityF };

std::string_view to_string(SearchTarget target);

struct SearchOptions {
  /// Start from the analytic maximizer before any Haar seeds.
  bool inject_analytic_seed = true;
  /// Record (evaluation, best) every `trace_stride` evaluations; 0 disables.
  std::size_t trace_stride = 0;
  /// Check every evaluated value against the analytic ceiling and throw
  /// InternalInvariantViolation if it is exceeded.
  bool verify_ceiling = false;
};

struct MaximizationResult {
  SearchTarget target = SearchTarget::Mu;
  double best_value = 0.0;
  ComplexMatrix best_unitary;
  std::size_t iterations = 0;   // accepted moves
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
  bool converged = false;       // some restart shrank its step below 1e-6
  std::vector<std::pair<std::size_t, double>> trace;
};

/// Objective value of `target` for rho viewed in the basis given by U.
double search_objective(SearchTarget target, const ComplexMatrix& rho_in_basis);

/// Random-restart greedy search over U(N). Each restart begins at a seed
/// unitary (analytic first when enabled, then Haar draws) and proposes
/// U <- U G D, with G a Givens rotation on a random index pair (angle and phase
/// within the current step) and D random diagonal phases. The step halves
/// after 20 consecutive rejections; a restart ends when it falls below 1e-6.
/// `budget` counts objective evaluations.
MaximizationResult maximize(SearchTarget target, const DensityMatrix& rho, std::size_t budget,
                            std::uint64_t seed, const SearchOptions& options = {});

MaximizationResult maximize_mu(const DensityMatrix& rho, std::size_t budget, std::uint64_t seed,
                               const SearchOptions& options = {});

MaximizationResult maximize_visibility(const DensityMatrix& rho, std::size_t budget,
                                       std::uint64_t seed, const SearchOptions& options = {});

/// Partial sums of the descending-sorted x never exceed those of y (within
/// tol) and the totals agree within tol.
bool is_majorized_by(std::span<const double> x, std::span<const double> y, double tol);

}  // namespace coherence
