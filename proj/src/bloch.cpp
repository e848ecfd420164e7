#include "coherence/bloch.hpp"

#include <cmath>
#include <sstream>

#include "coherence/error.hpp"

namespace coherence {

namespace {

using Idx = Eigen::Index;

Idx at(std::size_t one_based) { return static_cast<Idx>(one_based) - 1; }

void require_dim(std::size_t dim) {
  if (dim < 2) throw CoherenceError(ErrorCode::DimensionTooSmall, "dimension must be at least 2");
}

void require_layout(const BlochVector& b) {
  require_dim(b.dim);
  const std::size_t pairs = b.dim * (b.dim - 1) / 2;
  bool ok = b.u.size() == pairs && b.v.size() == pairs && b.w.size() == b.dim - 1;
  for (const auto& [jk, _] : b.u) ok = ok && jk.first >= 1 && jk.first < jk.second && jk.second <= b.dim;
  for (const auto& [jk, _] : b.v) ok = ok && jk.first >= 1 && jk.first < jk.second && jk.second <= b.dim;
  for (const auto& [l, _] : b.w) ok = ok && l >= 1 && l < b.dim;
  if (!ok) {
    std::ostringstream os;
    os << "Bloch vector keys do not match dimension " << b.dim << " (" << b.size()
       << " components, expected " << b.dim * b.dim - 1 << ")";
    throw CoherenceError(ErrorCode::WrongDimension, os.str());
  }
}

}  // namespace

std::vector<ComplexMatrix> GellMannBasis::flattened() const {
  std::vector<ComplexMatrix> out;
  out.reserve(size());
  for (const auto& [_, m] : symmetric) out.push_back(m);
  for (const auto& [_, m] : antisymmetric) out.push_back(m);
  for (const auto& m : diagonal) out.push_back(m);
  return out;
}

std::vector<double> BlochVector::flattened() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& [_, x] : u) out.push_back(x);
  for (const auto& [_, x] : v) out.push_back(x);
  for (const auto& [_, x] : w) out.push_back(x);
  return out;
}

BlochVector BlochVector::zero(std::size_t dim) {
  require_dim(dim);
  BlochVector b;
  b.dim = dim;
  for (std::size_t j = 1; j <= dim; ++j) {
    for (std::size_t k = j + 1; k <= dim; ++k) {
      b.u[{j, k}] = 0.0;
      b.v[{j, k}] = 0.0;
    }
  }
  for (std::size_t l = 1; l < dim; ++l) b.w[l] = 0.0;
  return b;
}

BlochVector BlochVector::from_flat(std::size_t dim, const std::vector<double>& flat) {
  BlochVector b = zero(dim);
  if (flat.size() != b.size()) {
    std::ostringstream os;
    os << flat.size() << " components given, expected " << b.size();
    throw CoherenceError(ErrorCode::WrongDimension, os.str());
  }
  auto it = flat.begin();
  for (auto& [_, x] : b.u) x = *it++;
  for (auto& [_, x] : b.v) x = *it++;
  for (auto& [_, x] : b.w) x = *it++;
  return b;
}

GellMannBasis gellmann_basis(std::size_t dim) {
  require_dim(dim);
  const auto n = static_cast<Idx>(dim);
  const Complex i_unit(0.0, 1.0);
  GellMannBasis basis;
  basis.dim = dim;
  for (std::size_t j = 1; j <= dim; ++j) {
    for (std::size_t k = j + 1; k <= dim; ++k) {
      ComplexMatrix u = ComplexMatrix::Zero(n, n);
      u(at(j), at(k)) = 1.0;
      u(at(k), at(j)) = 1.0;
      basis.symmetric.emplace(IndexPair{j, k}, std::move(u));

      ComplexMatrix v = ComplexMatrix::Zero(n, n);
      v(at(j), at(k)) = -i_unit;
      v(at(k), at(j)) = i_unit;
      basis.antisymmetric.emplace(IndexPair{j, k}, std::move(v));
    }
  }
  for (std::size_t l = 1; l < dim; ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    for (std::size_t m = 1; m <= l; ++m) w(at(m), at(m)) = scale;
    w(at(l + 1), at(l + 1)) = -static_cast<double>(l) * scale;
    basis.diagonal.push_back(std::move(w));
  }
  return basis;
}

BlochVector to_bloch(const DensityMatrix& rho) {
  const std::size_t dim = rho.dim();
  const auto nd = static_cast<double>(dim);
  const double off_scale = std::sqrt(nd / (2.0 * (nd - 1.0)));
  const Complex i_unit(0.0, 1.0);
  BlochVector b;
  b.dim = dim;
  for (std::size_t j = 1; j <= dim; ++j) {
    for (std::size_t k = j + 1; k <= dim; ++k) {
      const Complex rjk = rho(j - 1, k - 1);
      const Complex rkj = rho(k - 1, j - 1);
      // Imaginary residues are O(tolerance) and dropped.
      b.u[{j, k}] = (off_scale * (rjk + rkj)).real();
      b.v[{j, k}] = (i_unit * off_scale * (rjk - rkj)).real();
    }
  }
  double partial = 0.0;
  for (std::size_t l = 1; l < dim; ++l) {
    partial += rho(l - 1, l - 1).real();
    const auto ld = static_cast<double>(l);
    const double scale = std::sqrt(nd / (ld * (ld + 1.0) * (nd - 1.0)));
    b.w[l] = scale * (partial - ld * rho(l, l).real());
  }
  return b;
}

DensityMatrix from_bloch(const BlochVector& b, double tol) {
  require_layout(b);
  const std::size_t dim = b.dim;
  const auto n = static_cast<Idx>(dim);
  const auto nd = static_cast<double>(dim);
  const double scale = std::sqrt(nd * (nd - 1.0) / 2.0);
  const Complex i_unit(0.0, 1.0);

  // Expand the generators entrywise rather than summing N^2 - 1 dense matrices.
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  for (const auto& [jk, x] : b.u) {
    m(at(jk.first), at(jk.second)) += scale * x;
    m(at(jk.second), at(jk.first)) += scale * x;
  }
  for (const auto& [jk, x] : b.v) {
    m(at(jk.first), at(jk.second)) += -i_unit * scale * x;
    m(at(jk.second), at(jk.first)) += i_unit * scale * x;
  }
  for (const auto& [l, x] : b.w) {
    const auto ld = static_cast<double>(l);
    const double wscale = scale * x * std::sqrt(2.0 / (ld * (ld + 1.0)));
    for (std::size_t k = 1; k <= l; ++k) m(at(k), at(k)) += wscale;
    m(at(l + 1), at(l + 1)) -= ld * wscale;
  }
  m /= nd;
  return validate_density(m, tol);
}

double bloch_norm(const BlochVector& b) {
  double sum = 0.0;
  for (const auto& [_, x] : b.u) sum += x * x;
  for (const auto& [_, x] : b.v) sum += x * x;
  for (const auto& [_, x] : b.w) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace coherence
