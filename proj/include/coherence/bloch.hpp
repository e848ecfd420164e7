#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "coherence/state.hpp"

namespace coherence {

/// 1-based (j, k) pair with j < k.
using IndexPair = std::pair<std::size_t, std::size_t>;

/// Generalized Gell-Mann generators of SU(N).
///
/// symmetric[(j,k)]     U_jk = |j><k| + |k><j|
/// antisymmetric[(j,k)] V_jk = -i|j><k| + i|k><j|
/// diagonal[l-1]        W_l  = sqrt(2/(l(l+1))) (sum_{m<=l} |m><m| - l |l+1><l+1|)
///
/// Every matrix is Hermitian, traceless and Tr(A B) = 2 delta_AB. Pairs are
/// enumerated row-major (j outer), indices 1-based.
struct GellMannBasis {
  std::size_t dim = 0;
  std::map<IndexPair, ComplexMatrix> symmetric;
  std::map<IndexPair, ComplexMatrix> antisymmetric;
  std::vector<ComplexMatrix> diagonal;

  std::size_t size() const { return symmetric.size() + antisymmetric.size() + diagonal.size(); }

  /// All N^2 - 1 generators in export order: U (row-major), V (row-major), W.
  std::vector<ComplexMatrix> flattened() const;
};

/// Real Bloch vector keyed like GellMannBasis.
struct BlochVector {
  std::size_t dim = 0;
  std::map<IndexPair, double> u;
  std::map<IndexPair, double> v;
  std::map<std::size_t, double> w;  // key l in [1, N-1]

  std::size_t size() const { return u.size() + v.size() + w.size(); }

  /// Components in export order: u (row-major), v (row-major), w ascending l.
  std::vector<double> flattened() const;

  /// Inverse of flattened(); throws WrongDimension on a count mismatch.
  static BlochVector from_flat(std::size_t dim, const std::vector<double>& flat);

  /// Zero vector (the maximally mixed state) of dimension N.
  static BlochVector zero(std::size_t dim);
};

GellMannBasis gellmann_basis(std::size_t dim);

/// rho -> (u, v, w) with the sqrt(N/(2(N-1))) normalization, so the unit ball
/// holds the pure states.
BlochVector to_bloch(const DensityMatrix& rho);

/// rho = (1/N)[1 + sqrt(N(N-1)/2) (sum u U + v V + w W)], validated. Throws
/// NotPSD when the vector lies outside the physical body and WrongDimension when
/// the keys do not match N.
DensityMatrix from_bloch(const BlochVector& b, double tol = kDefaultTolerance);

double bloch_norm(const BlochVector& b);

}  // namespace coherence
