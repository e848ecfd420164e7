#include "doctest.h"
#include "oracles.hpp"

#include "coherence/error.hpp"
#include "coherence/state.hpp"

using namespace coherence;
using oracle::cd;

namespace {

ErrorCode code_of(const ComplexMatrix& m, double tol = kDefaultTolerance) {
  try {
    validate_density(m, tol);
  } catch (const CoherenceError& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return ErrorCode::InternalInvariantViolation;
}

ComplexMatrix mat2(cd a, cd b, cd c, cd d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("validation accepts the maximally mixed qubit") {
  const DensityMatrix rho = validate_density(ComplexMatrix::Identity(2, 2) / 2.0);
  CHECK(rho.dim() == 2);
  CHECK(purity(rho) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("validation rejects malformed matrices") {
  CHECK(code_of(ComplexMatrix::Zero(2, 3)) == ErrorCode::NotSquare);
  CHECK(code_of(ComplexMatrix::Ones(1, 1)) == ErrorCode::DimensionTooSmall);
  CHECK(code_of(mat2(0.5, cd(0, 0.25), cd(0, 0.25), 0.5)) == ErrorCode::NotHermitian);
  CHECK(code_of(mat2(0.6, 0.0, 0.0, 0.6)) == ErrorCode::NotUnitTrace);
  CHECK(code_of(mat2(std::nan(""), 0.0, 0.0, 0.5)) == ErrorCode::NotFinite);
}

TEST_CASE("validation rejects a matrix with a negative eigenvalue") {
  const ComplexMatrix m = mat2(0.6, 0.5, 0.5, 0.4);
  const auto [l1, l2] = oracle::eig2(m);
  CHECK(l1 == doctest::Approx(0.5 + std::sqrt(0.26)));
  CHECK(l2 == doctest::Approx(0.5 - std::sqrt(0.26)));
  CHECK(l2 < -0.0098);
  CHECK(code_of(m) == ErrorCode::NotPSD);
}

TEST_CASE("spectrum is sorted descending") {
  const std::vector<double> p{0.2, 0.5, 0.3};
  const Spectrum s = spectral_decompose(diagonal_state(p));
  CHECK(s.eigenvalues(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(s.eigenvalues(2) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("2x2 spectrum matches the characteristic polynomial") {
  const ComplexMatrix m = mat2(0.5, 0.25, 0.25, 0.5);
  const Spectrum s = spectral_decompose(validate_density(m));
  const auto [l1, l2] = oracle::eig2(m);
  CHECK(std::abs(s.eigenvalues(0) - l1) < 1e-14);
  CHECK(std::abs(s.eigenvalues(1) - l2) < 1e-14);
  CHECK(l1 == doctest::Approx(0.75));
  CHECK((reconstruct(s) - m).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pure plus state has spectrum (1, 0)") {
  ComplexVector psi(2);
  psi << 1.0, 1.0;
  const Spectrum s = spectral_decompose(pure_state(psi));
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s.eigenvalues(1)) < 1e-14);
}

TEST_CASE("degenerate eigenvectors come out in a canonical orthonormal form") {
  const DensityMatrix rho = maximally_mixed(4);
  const Spectrum s = spectral_decompose(rho);
  CHECK((s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
  CHECK((s.eigenvectors - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("purity matches the entrywise sum") {
  CHECK(purity(diagonal_state(std::vector<double>{0.5, 0.3, 0.2})) == doctest::Approx(0.38).epsilon(1e-14));
  CHECK(purity(maximally_mixed(5)) == doctest::Approx(0.2).epsilon(1e-14));
  for (int n = 2; n <= 6; ++n) {
    const ComplexMatrix m = oracle::random_density(n, 100u + static_cast<unsigned>(n));
    CHECK(std::abs(purity(validate_density(m)) - oracle::purity_entrywise(m)) < 1e-14);
  }
}

TEST_CASE("random states follow their ensemble") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(purity(random_state(2, HaarPure{}, seed)) == doctest::Approx(1.0).epsilon(1e-12));
    const Spectrum s = spectral_decompose(random_state(4, RankK{2}, seed));
    CHECK((s.eigenvalues.array() > 1e-12).count() == 2);
    const DensityMatrix g = random_state(6, GinibreMixed{}, seed);
    CHECK_NOTHROW(validate_density(g.matrix(), 1e-10));
  }
}

TEST_CASE("random states are reproducible from the seed") {
  const DensityMatrix a = random_state(3, GinibreMixed{}, 99);
  const DensityMatrix b = random_state(3, GinibreMixed{}, 99);
  CHECK(a.matrix() == b.matrix());
  CHECK(a.matrix() != random_state(3, GinibreMixed{}, 100).matrix());
}

TEST_CASE("rank must lie in [1, N]") {
  CHECK_THROWS_AS(random_state(3, RankK{0}, 1), CoherenceError);
  CHECK_THROWS_AS(random_state(3, RankK{4}, 1), CoherenceError);
}

TEST_CASE("change of basis is U^dagger rho U") {
  const ComplexMatrix m = oracle::random_density(3, 7);
  ComplexMatrix u = ComplexMatrix::Zero(3, 3);
  u(0, 1) = 1.0;
  u(1, 2) = 1.0;
  u(2, 0) = 1.0;
  const ComplexMatrix t = in_basis(m, u);
  CHECK(std::abs(t(0, 0) - m(2, 2)) < 1e-15);
  CHECK(std::abs(t(1, 1) - m(0, 0)) < 1e-15);
}
