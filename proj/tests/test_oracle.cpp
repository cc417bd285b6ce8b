#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "harmlat/covariance.hpp"
#include "harmlat/entanglement.hpp"
#include "harmlat/oracle.hpp"

using namespace harmlat;

TEST_CASE("dense modes reproduce the analytic dispersion") {
  const auto ring = oracle::dense_modes({1, 3, 1.0, 0.0});
  CHECK(ring.frequencies(0) == Approx(0.0).margin(1e-10));
  CHECK(ring.frequencies(1) == Approx(std::sqrt(3.0)).margin(1e-10));
  CHECK(ring.frequencies(2) == Approx(std::sqrt(3.0)).margin(1e-10));

  for (const LatticeSpec spec : {LatticeSpec{1, 5, 1.0, 1.0}, LatticeSpec{2, 3, 1.0, 1.0},
                                 LatticeSpec{2, 9, 1.0, 0.3}, LatticeSpec{3, 5, 1.0, 0.5}}) {
    const auto decomp = oracle::dense_modes(spec);
    std::vector<double> analytic;
    for (const auto& m : ModeRange(spec)) analytic.push_back(mode_frequency(spec, m));
    std::sort(analytic.begin(), analytic.end());
    REQUIRE(static_cast<std::int64_t>(analytic.size()) == spec.total_sites());
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      CHECK(decomp.frequencies(static_cast<Eigen::Index>(i)) ==
            Approx(analytic[i]).margin(1e-10));
    }
    // reconstruction K = V diag(x^2) V^T
    const Eigen::MatrixXd rebuilt = decomp.eigenvectors *
                                    decomp.frequencies.array().square().matrix().asDiagonal() *
                                    decomp.eigenvectors.transpose();
    CHECK((rebuilt - decomp.coupling).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("dense oracle refuses oversized lattices") {
  CHECK_THROWS_AS(oracle::dense_modes({3, 31, 1.0, 0.1}), Error);
}

TEST_CASE("mode-reconstructed covariance equals the analytic sums") {
  // n=7 chain, several separations and temperatures
  const LatticeSpec chain{1, 7, 1.0, 0.3};
  const auto decomp = oracle::dense_modes(chain);
  for (const double tau : {0.0, 0.7}) {
    for (const int r : {1, 2, 3}) {
      const auto lhs = two_site_covariance(chain, tau, std::vector<int>{r});
      const auto rhs = oracle::covariance_from_modes(decomp, tau, 0, r);
      CHECK(lhs.a == Approx(rhs.a).margin(1e-10));
      CHECK(lhs.b == Approx(rhs.b).margin(1e-10));
      CHECK(lhs.e == Approx(rhs.e).margin(1e-10));
      CHECK(lhs.f == Approx(rhs.f).margin(1e-10));
      CHECK(lhs.separation == rhs.separation);
    }
  }
  // translational symmetry: any pair realizing the separation gives the same entries
  const auto pair_a = oracle::covariance_from_modes(decomp, 0.4, 0, 2);
  const auto pair_b = oracle::covariance_from_modes(decomp, 0.4, 3, 5);
  const auto pair_c = oracle::covariance_from_modes(decomp, 0.4, 6, 1);  // wraps around
  CHECK(pair_a.e == Approx(pair_b.e).margin(1e-12));
  CHECK(pair_a.e == Approx(pair_c.e).margin(1e-12));
  CHECK(pair_a.f == Approx(pair_b.f).margin(1e-12));

  CHECK_THROWS_AS(oracle::covariance_from_modes(decomp, 0.4, 2, 2), Error);
  CHECK_THROWS_AS(oracle::covariance_from_modes(oracle::dense_modes({1, 7, 1.0, 0.0}), 0.0, 0, 1),
                  Error);
}

TEST_CASE("mode-reconstructed covariance matches in higher dimensions") {
  const LatticeSpec plane{2, 5, 1.0, 0.6};
  const auto decomp = oracle::dense_modes(plane);
  // site (0,0) against site (1,2): separation (1,2)
  const auto lhs = two_site_covariance(plane, 0.9, std::vector<int>{1, 2});
  const auto rhs = oracle::covariance_from_modes(decomp, 0.9, 0, 1 * 5 + 2);
  CHECK(lhs.a == Approx(rhs.a).margin(1e-10));
  CHECK(lhs.b == Approx(rhs.b).margin(1e-10));
  CHECK(lhs.e == Approx(rhs.e).margin(1e-10));
  CHECK(lhs.f == Approx(rhs.f).margin(1e-10));
}

TEST_CASE("Fock oracle agrees with the analytic moments") {
  const LatticeSpec ring{1, 3, 1.0, 1.0};
  const oracle::FockOracleConfig config{3, 12, 2.0};
  const auto fock = oracle::fock_thermal_moments(config, ring);
  const auto analytic = two_site_covariance(ring, 0.5, std::vector<int>{1});
  CHECK(fock.a == Approx(analytic.a).margin(1e-4));
  CHECK(fock.b == Approx(analytic.b).margin(1e-4));
  CHECK(fock.e == Approx(analytic.e).margin(1e-4));
  CHECK(fock.f == Approx(analytic.f).margin(1e-4));
}

TEST_CASE("Fock oracle approaches the ground state at large xi") {
  const LatticeSpec ring{1, 3, 1.0, 1.0};
  const oracle::FockOracleConfig config{3, 12, 20.0};
  const auto fock = oracle::fock_thermal_moments(config, ring);
  const auto ground = two_site_covariance(ring, 0.0, std::vector<int>{1});
  CHECK(fock.a == Approx(ground.a).margin(1e-5));
  CHECK(fock.b == Approx(ground.b).margin(1e-5));
  CHECK(fock.e == Approx(ground.e).margin(1e-5));
  CHECK(fock.f == Approx(ground.f).margin(1e-5));
}

TEST_CASE("starved truncation is detected a posteriori") {
  const LatticeSpec ring{1, 3, 1.0, 1.0};
  const oracle::FockOracleConfig starved{3, 2, 0.5};
  try {
    oracle::fock_thermal_moments(starved, ring);
    FAIL("expected cutoff_insufficient");
  } catch (const Error& e) {
    CHECK(e.code() == errc::cutoff_insufficient);
  }
}

TEST_CASE("Fock oracle input validation") {
  const LatticeSpec ring{1, 3, 1.0, 1.0};
  CHECK_THROWS_AS(oracle::fock_thermal_moments({5, 8, 1.0}, ring), Error);    // sites mismatch
  CHECK_THROWS_AS(oracle::fock_thermal_moments({3, 8, -1.0}, ring), Error);   // bad xi
  CHECK_THROWS_AS(oracle::fock_thermal_moments({3, 8, 1.0}, {1, 3, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(oracle::fock_thermal_moments({3, 200, 1.0}, ring), Error);  // > 10^6 states
}

TEST_CASE("symplectic negativity of the product vacuum vanishes") {
  const CovMatrix vacuum{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  CHECK(oracle::symplectic_negativity(vacuum) == 0.0);
}

TEST_CASE("symplectic negativity reproduces the continuum nearest-neighbour value") {
  const double target = 16.0 / (3.0 * std::numbers::pi * std::numbers::pi);
  TwoSiteCovariance cov;
  cov.a = 2.0;
  cov.b = 2.0;
  cov.e = 1.5;
  cov.f = target / (cov.a - cov.e) - cov.b;  // forces (A - E)(B + F) = target
  const double en = oracle::symplectic_negativity(assemble_matrix(cov));
  CHECK(en == Approx(-0.5 * std::log(target)).margin(1e-10));
  CHECK(en == Approx(0.3077).margin(1e-4));
}

TEST_CASE("unphysical matrices are rejected") {
  const CovMatrix squeezed{{{0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 0.5, 0}, {0, 0, 0, 0.5}}};
  CHECK_THROWS_AS(oracle::symplectic_negativity(squeezed), Error);
}

TEST_CASE("both negativity routes agree on thermal states") {
  std::mt19937_64 gen(20260808);
  std::uniform_int_distribution<int> side_pick(2, 20);       // side = 2k+1 in [5, 41]
  std::uniform_real_distribution<double> ratio_pick(std::log(0.05), std::log(3.0));
  std::uniform_real_distribution<double> tau_pick(0.05, 5.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const int side = 2 * side_pick(gen) + 1;
    const LatticeSpec spec{1, side, 1.0, std::exp(ratio_pick(gen))};
    const double tau = coin(gen) < 0.2 ? 0.0 : tau_pick(gen);
    std::uniform_int_distribution<int> r_pick(1, spec.half_span());
    const std::vector<int> r{r_pick(gen)};

    const auto cov = two_site_covariance(spec, tau, r);
    const double direct = log_negativity(separability_functions(cov)).value;
    const double sympl = oracle::symplectic_negativity(assemble_matrix(cov));
    REQUIRE(std::fabs(direct - sympl) <= 1e-10);
  }
}
