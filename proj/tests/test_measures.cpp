#include "doctest.h"
#include "oracles.hpp"

#include <numbers>

#include "coherence/bloch.hpp"
#include "coherence/error.hpp"
#include "coherence/measures.hpp"

using namespace coherence;
using oracle::cd;

namespace {

const double kRoot007 = std::sqrt(0.07);

DensityMatrix diag3() { return diagonal_state(std::vector<double>{0.5, 0.3, 0.2}); }

DensityMatrix qubit(double a, cd off) {
  ComplexMatrix m(2, 2);
  m << a, off, std::conj(off), 1.0 - a;
  return validate_density(m);
}

}  // namespace

TEST_CASE("P_N on worked examples") {
  CHECK(p_n(maximally_mixed(4)) < 1e-15);
  CHECK(p_n(random_state(5, HaarPure{}, 3)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p_n(diag3()) == doctest::Approx(kRoot007).epsilon(1e-13));
}

TEST_CASE("P_N matches the purity oracle on random states") {
  for (int n = 2; n <= 10; ++n) {
    const ComplexMatrix m = oracle::random_density(n, 500u + static_cast<unsigned>(n));
    CHECK(std::abs(p_n(validate_density(m)) - oracle::p_n_from_purity(oracle::purity_entrywise(m), n)) < 1e-12);
  }
}

TEST_CASE("determinant form at N = 2") {
  CHECK(p2_determinant_form(maximally_mixed(2)) < 1e-15);
  CHECK(p2_determinant_form(qubit(0.5, 0.25)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p2_determinant_form(random_state(2, HaarPure{}, 1)) == doctest::Approx(1.0).epsilon(1e-7));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix rho = random_state(2, GinibreMixed{}, seed);
    CHECK(std::abs(p2_determinant_form(rho) - p_n(rho)) < 1e-12);
  }
  CHECK_THROWS_AS(p2_determinant_form(diag3()), CoherenceError);
}

TEST_CASE("Frobenius and centre-of-mass distances") {
  CHECK(frobenius_distance_measure(maximally_mixed(3)) < 1e-15);
  CHECK(frobenius_distance_measure(random_state(4, HaarPure{}, 8)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(frobenius_distance_measure(diag3()) == doctest::Approx(std::sqrt(1.5 * 14.0 / 300.0)).epsilon(1e-13));
  Spectrum s;
  s.eigenvalues = RealVector::Constant(3, 1.0 / 3.0);
  CHECK(center_of_mass_distance(s) < 1e-15);
  s.eigenvalues << 1.0, 0.0, 0.0;
  CHECK(center_of_mass_distance(s) == doctest::Approx(1.0).epsilon(1e-14));
  s.eigenvalues << 0.5, 0.3, 0.2;
  CHECK(center_of_mass_distance(s) == doctest::Approx(std::sqrt(0.14 / 2.0)).epsilon(1e-13));
  for (int n = 2; n <= 8; ++n) {
    const DensityMatrix rho = random_state(static_cast<std::size_t>(n), GinibreMixed{}, 40u + static_cast<unsigned>(n));
    const Spectrum sp = spectral_decompose(rho);
    std::vector<double> lambda(sp.eigenvalues.data(), sp.eigenvalues.data() + n);
    CHECK(std::abs(center_of_mass_distance(sp) - oracle::p_n_from_eigenvalues(lambda)) < 1e-12);
  }
}

TEST_CASE("mu_N on worked examples") {
  CHECK(mu_n(qubit(0.5, 0.0)) == 0.0);
  ComplexVector psi(2);
  psi << 0.1, std::sqrt(1.0 - 0.01);
  CHECK(mu_n(pure_state(psi)) == doctest::Approx(1.0).epsilon(1e-12));
  ComplexVector plus(3);
  plus << 1.0, 1.0, 0.0;
  const DensityMatrix rho = pure_state(plus);
  CHECK(mu_n(rho) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu_n(diag3()) == 0.0);
}

TEST_CASE("mu_N agrees with its definition and with the purity identity") {
  for (int n = 2; n <= 7; ++n) {
    const ComplexMatrix m = oracle::random_density(n, 900u + static_cast<unsigned>(n));
    const double mu = mu_n(validate_density(m));
    CHECK(std::abs(mu - oracle::mu_definition(m)) < 1e-12);
    double diag_sq = 0.0;
    for (int i = 0; i < n; ++i) diag_sq += std::norm(m(i, i));
    const double identity = 1.0 - (1.0 - oracle::purity_entrywise(m)) / (1.0 - diag_sq);
    CHECK(std::abs(mu * mu - identity) < 1e-12);
  }
}

TEST_CASE("mu_N is undefined on a basis vector") {
  ComplexVector e(3);
  e << 0.0, 1.0, 0.0;
  CHECK_FALSE(try_mu_n(pure_state(e).matrix()).has_value());
  try {
    mu_n(pure_state(e));
    FAIL("expected DegenerateDiagonal");
  } catch (const CoherenceError& err) {
    CHECK(err.code() == ErrorCode::DegenerateDiagonal);
  }
}

TEST_CASE("interference intensities are analyzer projections") {
  const DensityMatrix rho = qubit(0.5, 0.25);
  const auto at_zero = interference_2d(rho, 0.3, 0.0);
  CHECK(at_zero.i1 == doctest::Approx(0.5));
  CHECK(at_zero.i2 == doctest::Approx(0.5));
  const auto mixed = interference_2d(maximally_mixed(2), 1.1, 0.7);
  CHECK(mixed.i1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(interference_2d(rho, 0.0, std::numbers::pi / 4).i1 == doctest::Approx(0.75).epsilon(1e-14));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix r = random_state(2, GinibreMixed{}, seed);
    for (double delta : {0.0, 0.4, 2.5, 5.0}) {
      for (double theta : {0.1, 0.9, 2.0}) {
        ComplexVector e(2), ep(2);
        e << std::cos(theta), std::polar(std::sin(theta), delta);
        ep << std::sin(theta), -std::polar(std::cos(theta), delta);
        const auto out = interference_2d(r, delta, theta);
        CHECK(std::abs(out.i1 - (e.adjoint() * r.matrix() * e)(0).real()) < 1e-14);
        CHECK(std::abs(out.i2 - (ep.adjoint() * r.matrix() * ep)(0).real()) < 1e-14);
        CHECK(std::abs(out.i1 + out.i2 - 1.0) < 1e-14);
      }
    }
  }
}

TEST_CASE("grid fringe visibility approaches P_2") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix r = random_state(2, GinibreMixed{}, seed);
    CHECK(std::abs(fringe_visibility_grid(r, 400) - p_n(r)) < 1e-3);
  }
  CHECK_THROWS_AS(fringe_visibility_grid(diag3(), 10), CoherenceError);
}

TEST_CASE("visibility function") {
  CHECK(visibility_f(std::vector<double>{1, 0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(visibility_f(std::vector<double>{0.25, 0.25, 0.25, 0.25}) < 1e-15);
  CHECK(visibility_f(std::vector<double>{0.5, 0.3, 0.2}) == doctest::Approx(kRoot007).epsilon(1e-13));
  CHECK(visibility(diag3()) == doctest::Approx(kRoot007).epsilon(1e-13));
  CHECK(visibility(random_state(3, HaarPure{}, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(visibility_f(std::vector<double>{1.0}), CoherenceError);
  CHECK_THROWS_AS(visibility_f(std::vector<double>{0.5, -0.1}), CoherenceError);
  CHECK_THROWS_AS(visibility_f(std::vector<double>{0.0, 0.0}), CoherenceError);
}

TEST_CASE("pure-part decomposition on worked examples") {
  const PurePartDecomposition d = pure_part_decomposition(diag3());
  REQUIRE(d.weights.size() == 2);
  CHECK(d.weights[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(d.weights[1] == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(d.mixed_weight == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(d.weights[0] + d.weights[1] + d.mixed_weight == doctest::Approx(1.0).epsilon(1e-14));
  const BoundCheck b = pure_part_bound_check(d, p_n(diag3()));
  CHECK(b.bound_holds);
  CHECK(b.gap == doctest::Approx(0.4 - kRoot007).epsilon(1e-12));
  CHECK(b.identity_error < 1e-12);

  const PurePartDecomposition mm = pure_part_decomposition(maximally_mixed(4));
  for (double s : mm.weights) CHECK(std::abs(s) < 1e-15);
  CHECK(mm.mixed_weight == doctest::Approx(1.0).epsilon(1e-14));

  const DensityMatrix pure = random_state(2, HaarPure{}, 5);
  const PurePartDecomposition pd = pure_part_decomposition(pure);
  CHECK(pd.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(pd.mixed_weight) < 1e-12);
  CHECK(std::abs(pure_part_bound_check(pd, p_n(pure)).gap) < 1e-9);
}

TEST_CASE("pure-part decomposition reconstructs the state") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DensityMatrix rho = random_state(5, GinibreMixed{}, seed);
    const PurePartDecomposition d = pure_part_decomposition(rho);
    CHECK((d.reconstruct() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(pure_part_bound_check(d, p_n(rho)).identity_error < 1e-10);
  }
}

TEST_CASE("bound saturates exactly when a single pure-part weight is nonzero") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix q = random_state(2, GinibreMixed{}, seed);
    CHECK(std::abs(pure_part_bound_check(pure_part_decomposition(q), p_n(q)).gap) < 1e-9);
  }
  // lambda = (a, b, b, b): only s_1 = a - b is nonzero.
  const DensityMatrix pseudo = diagonal_state(std::vector<double>{0.55, 0.15, 0.15, 0.15});
  CHECK(std::abs(pure_part_bound_check(pure_part_decomposition(pseudo), p_n(pseudo)).gap) < 1e-12);
  // Rank 2 with N >= 3 leaves s_1 s_2 > 0, so the gap is positive.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix r2 = random_state(4, RankK{2}, seed);
    const RealVector& l = spectral_decompose(r2).eigenvalues;
    const double expected = l(0) + l(1) - oracle::p_n_from_eigenvalues({l(0), l(1), l(2), l(3)});
    const double gap = pure_part_bound_check(pure_part_decomposition(r2), p_n(r2)).gap;
    CHECK(gap > 1e-3);
    CHECK(std::abs(gap - expected) < 1e-12);
  }
  const DensityMatrix half = diagonal_state(std::vector<double>{0.5, 0.5, 0.0});
  CHECK(pure_part_bound_check(pure_part_decomposition(half), p_n(half)).gap == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("coherence report assembles consistent fields") {
  const CoherenceReport id = coherence_report(maximally_mixed(3));
  CHECK(id.p_n < 1e-12);
  CHECK(id.visibility < 1e-12);
  CHECK(id.bloch_norm < 1e-12);
  CHECK(id.purity == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const CoherenceReport d = coherence_report(diag3());
  for (double v : {d.p_n, d.frobenius_distance, d.center_of_mass, d.bloch_norm, d.visibility}) {
    CHECK(v == doctest::Approx(kRoot007).epsilon(1e-12));
  }
  REQUIRE(d.mu_in_given_basis.has_value());
  CHECK(*d.mu_in_given_basis == 0.0);

  const CoherenceReport pure = coherence_report(random_state(5, HaarPure{}, 11));
  for (double v : {pure.p_n, pure.frobenius_distance, pure.center_of_mass, pure.bloch_norm, pure.visibility}) {
    CHECK(std::abs(v - 1.0) < 1e-9);
  }
  CHECK(pure.max_route_discrepancy <= 1e-9);

  ComplexVector e(3);
  e << 1.0, 0.0, 0.0;
  CHECK_FALSE(coherence_report(pure_state(e)).mu_in_given_basis.has_value());
}
