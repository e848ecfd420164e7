#include "coherence/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "coherence/error.hpp"

namespace coherence {

namespace {

constexpr double kDegeneracyGap = 1e-12;

// Multiply v by a unit phase so the first component with magnitude above
// `floor` is real positive.
void fix_phase(Eigen::Ref<ComplexVector> v, double floor = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > floor) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

bool lex_less(const ComplexVector& a, const ComplexVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > kDegeneracyGap) return a(i).real() < b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > kDegeneracyGap) return a(i).imag() < b(i).imag();
  }
  return false;
}

// Replace the eigenvectors of one degenerate block by a basis that depends only
// on the block's projector: pivoted Gram-Schmidt over the projected standard
// basis vectors, lowest index winning near-ties.
void canonicalize_block(ComplexMatrix& vecs, Eigen::Index first, Eigen::Index count) {
  const Eigen::Index n = vecs.rows();
  const ComplexMatrix q = vecs.middleCols(first, count);
  ComplexMatrix candidates = q * q.adjoint();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<ComplexVector> basis;
  basis.reserve(static_cast<std::size_t>(count));

  for (Eigen::Index k = 0; k < count; ++k) {
    Eigen::Index pick = -1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double norm = candidates.col(i).norm();
      if (norm > best + 1e-9) {
        best = norm;
        pick = i;
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    ComplexVector v = candidates.col(pick) / best;
    // Second pass of orthogonalization against the accepted vectors.
    for (const auto& b : basis) v -= b * b.dot(v);
    v.normalize();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!used[static_cast<std::size_t>(i)]) {
        candidates.col(i) -= v * v.dot(candidates.col(i));
      }
    }
    fix_phase(v);
    basis.push_back(std::move(v));
  }

  std::sort(basis.begin(), basis.end(), [](const ComplexVector& a, const ComplexVector& b) { return lex_less(b, a); });
  for (Eigen::Index k = 0; k < count; ++k) {
    vecs.col(first + k) = basis[static_cast<std::size_t>(k)];
  }
}

void require_square_and_dim(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << "x" << m.cols();
    throw CoherenceError(ErrorCode::NotSquare, os.str());
  }
  if (m.rows() < 2) {
    throw CoherenceError(ErrorCode::DimensionTooSmall, "dimension must be at least 2");
  }
}

}  // namespace

DensityMatrix validate_density(const ComplexMatrix& m, double tol) {
  require_square_and_dim(m);
  if (!(tol >= 0.0) || !std::isfinite(tol)) {
    throw CoherenceError(ErrorCode::InvalidParameter, "tolerance must be a finite value >= 0");
  }
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        throw CoherenceError(ErrorCode::NotFinite, "matrix has a non-finite entry");
      }
    }
  }

  double asym = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
    }
    asym = std::max(asym, std::abs(m(i, i).imag()));
  }
  if (asym > tol) {
    std::ostringstream os;
    os << "max |rho_ij - conj(rho_ji)| = " << asym << " exceeds " << tol;
    throw CoherenceError(ErrorCode::NotHermitian, os.str());
  }

  const Complex trace = m.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > tol) {
    std::ostringstream os;
    os << "trace = " << trace.real() << " (deviation " << std::abs(trace - 1.0) << ")";
    throw CoherenceError(ErrorCode::NotUnitTrace, os.str());
  }

  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw CoherenceError(ErrorCode::EigenSolverFailure, "eigensolver did not converge");
  }
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    std::ostringstream os;
    os << "minimum eigenvalue " << min_eig << " below -" << tol;
    throw CoherenceError(ErrorCode::NotPSD, os.str());
  }
  if (min_eig < 0.0) {
    RealVector clamped = solver.eigenvalues().cwiseMax(0.0);
    clamped /= clamped.sum();
    const ComplexMatrix& v = solver.eigenvectors();
    h = v * clamped.cast<Complex>().asDiagonal() * v.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
  }

  const double p = h.cwiseAbs2().sum();
  if (p > 1.0 + tol) {
    std::ostringstream os;
    os << "purity " << p << " exceeds 1";
    throw CoherenceError(ErrorCode::NotPSD, os.str());
  }
  return DensityMatrix(std::move(h), tol);
}

Spectrum hermitian_spectrum(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw CoherenceError(ErrorCode::EigenSolverFailure, "eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  Spectrum out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && out.eigenvalues(end - 1) - out.eigenvalues(end) <= kDegeneracyGap) ++end;
    if (end - start > 1) {
      canonicalize_block(out.eigenvectors, start, end - start);
    } else {
      fix_phase(out.eigenvectors.col(start));
    }
    start = end;
  }
  return out;
}

Spectrum spectral_decompose(const DensityMatrix& rho) { return hermitian_spectrum(rho.matrix()); }

double purity(const DensityMatrix& rho) { return rho.matrix().cwiseAbs2().sum(); }

ComplexMatrix reconstruct(const Spectrum& spectrum) {
  const auto& v = spectrum.eigenvectors;
  return v * spectrum.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
}

ComplexMatrix in_basis(const ComplexMatrix& rho, const ComplexMatrix& unitary) {
  return unitary.adjoint() * rho * unitary;
}

DensityMatrix maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return validate_density(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix pure_state(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw CoherenceError(ErrorCode::EmptyState, "zero state vector");
  const ComplexVector unit = psi / norm;
  return validate_density(unit * unit.adjoint());
}

DensityMatrix diagonal_state(std::span<const double> probabilities) {
  const auto n = static_cast<Eigen::Index>(probabilities.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = probabilities[static_cast<std::size_t>(i)];
  return validate_density(m);
}

ComplexMatrix complex_ginibre(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Explicit loop fixes the draw order (column-major, re then im).
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

DensityMatrix random_state(std::size_t dim, const StateKind& kind, std::uint64_t seed) {
  if (dim < 2) throw CoherenceError(ErrorCode::DimensionTooSmall, "dimension must be at least 2");
  std::mt19937_64 rng(seed);
  std::size_t cols = dim;
  if (std::holds_alternative<HaarPure>(kind)) {
    cols = 1;
  } else if (const auto* rk = std::get_if<RankK>(&kind)) {
    if (rk->rank < 1 || rk->rank > dim) {
      std::ostringstream os;
      os << "rank " << rk->rank << " outside [1, " << dim << "]";
      throw CoherenceError(ErrorCode::InvalidRank, os.str());
    }
    cols = rk->rank;
  }
  const ComplexMatrix g = complex_ginibre(dim, cols, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  return validate_density(m, 1e-10);
}

}  // namespace coherence
