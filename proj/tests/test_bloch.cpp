#include "doctest.h"
#include "oracles.hpp"

#include "coherence/bloch.hpp"
#include "coherence/error.hpp"
#include "coherence/measures.hpp"

using namespace coherence;
using oracle::cd;

TEST_CASE("N = 2 generators are the Pauli matrices") {
  const GellMannBasis b = gellmann_basis(2);
  ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  CHECK(b.symmetric.at({1, 2}) == sx);
  CHECK(b.antisymmetric.at({1, 2}) == sy);
  CHECK(b.diagonal.at(0) == sz);
}

TEST_CASE("N = 3 second diagonal generator") {
  const GellMannBasis b = gellmann_basis(3);
  ComplexMatrix w2 = ComplexMatrix::Zero(3, 3);
  w2.diagonal() << 1.0, 1.0, -2.0;
  w2 *= std::sqrt(1.0 / 3.0);
  CHECK((b.diagonal.at(1) - w2).norm() < 1e-15);
}

TEST_CASE("generators are traceless, Hermitian and Hilbert-Schmidt orthogonal") {
  for (std::size_t n : {2u, 3u, 4u, 6u}) {
    const auto gens = gellmann_basis(n).flattened();
    REQUIRE(gens.size() == n * n - 1);
    for (std::size_t a = 0; a < gens.size(); ++a) {
      CHECK(std::abs(gens[a].trace()) < 1e-14);
      CHECK((gens[a] - gens[a].adjoint()).norm() < 1e-15);
      for (std::size_t b = 0; b < gens.size(); ++b) {
        const cd ip = (gens[a] * gens[b]).trace();
        CHECK(std::abs(ip - cd(a == b ? 2.0 : 0.0)) < 1e-13);
      }
    }
  }
}

TEST_CASE("Bloch components of worked examples") {
  ComplexMatrix m(2, 2);
  m << 0.5, 0.25, 0.25, 0.5;
  const BlochVector b = to_bloch(validate_density(m));
  CHECK(b.u.at({1, 2}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(b.v.at({1, 2})) < 1e-15);
  CHECK(std::abs(b.w.at(1)) < 1e-15);
  CHECK(bloch_norm(b) == doctest::Approx(std::sqrt(2 * 0.625 - 1)).epsilon(1e-14));

  const BlochVector d = to_bloch(diagonal_state(std::vector<double>{0.5, 0.3, 0.2}));
  CHECK(d.w.at(1) == doctest::Approx(std::sqrt(0.75) * 0.2).epsilon(1e-14));
  CHECK(d.w.at(2) == doctest::Approx(0.2).epsilon(1e-14));
  for (const auto& [k, x] : d.u) CHECK(std::abs(x) < 1e-15);
  CHECK(bloch_norm(d) == doctest::Approx(std::sqrt(0.07)).epsilon(1e-13));
}

TEST_CASE("maximally mixed state sits at the origin") {
  const BlochVector b = to_bloch(maximally_mixed(4));
  CHECK(bloch_norm(b) < 1e-15);
  CHECK((from_bloch(BlochVector::zero(5)).matrix() - ComplexMatrix::Identity(5, 5) / 5.0).norm() < 1e-15);
  CHECK(bloch_norm(BlochVector::zero(3)) == 0.0);
}

TEST_CASE("round trip and Hilbert-Schmidt expansion reconstruct the state") {
  for (std::size_t n : {2u, 3u, 4u, 6u}) {
    const auto gens = gellmann_basis(n).flattened();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DensityMatrix rho = random_state(n, GinibreMixed{}, seed);
      CHECK((from_bloch(to_bloch(rho)).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
      ComplexMatrix expansion = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
      for (const auto& g : gens) expansion += 0.5 * (rho.matrix() * g).trace() * g;
      CHECK((expansion - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("flattening order is u then v then w") {
  const DensityMatrix rho = random_state(3, GinibreMixed{}, 4);
  const BlochVector b = to_bloch(rho);
  const auto flat = b.flattened();
  REQUIRE(flat.size() == 8);
  CHECK(flat[0] == b.u.at({1, 2}));
  CHECK(flat[1] == b.u.at({1, 3}));
  CHECK(flat[2] == b.u.at({2, 3}));
  CHECK(flat[3] == b.v.at({1, 2}));
  CHECK(flat[6] == b.w.at(1));
  CHECK(flat[7] == b.w.at(2));
  const BlochVector back = BlochVector::from_flat(3, flat);
  CHECK(back.flattened() == flat);
}

TEST_CASE("unphysical Bloch vectors are rejected") {
  BlochVector b = BlochVector::zero(3);
  b.w.at(1) = 1.0;
  try {
    from_bloch(b);
    FAIL("expected NotPSD");
  } catch (const CoherenceError& e) {
    CHECK(e.code() == ErrorCode::NotPSD);
  }
  BlochVector wrong = BlochVector::zero(3);
  wrong.w.erase(2);
  CHECK_THROWS_AS(from_bloch(wrong), CoherenceError);
}
