#include <catch2/catch.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "harmlat/lattice.hpp"
#include "harmlat/witness.hpp"

using namespace harmlat;

namespace {

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
  }
  return rows;
}

std::vector<std::vector<double>> random_orthogonal(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gauss(gen);
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  return to_rows(q);
}

// real Fourier-type (Hartley) matrix, columns permuted to the library's
// lexicographic mode order; every diagonal W^2_kk then equals the mean square
// frequency exactly, realizing the complete-mixture extremal value
std::vector<std::vector<double>> hartley_for_spec(const LatticeSpec& spec) {
  const int n = spec.side;
  const int h = spec.half_span();
  std::vector<std::vector<double>> m(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    m[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const int natural = (((j - h) % n) + n) % n;
      const double arg = 2.0 * std::numbers::pi * k * natural / n;
      m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
          (std::cos(arg) + std::sin(arg)) / std::sqrt(static_cast<double>(n));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("internal energy: ground value, equipartition limit, monotonicity") {
  const LatticeSpec ring{1, 3, 1.0, 1.0};
  CHECK(internal_energy(ring, 0.0) == Approx(2.5).epsilon(1e-14));  // (1/2)(1 + 2 + 2)

  for (const LatticeSpec spec : {LatticeSpec{1, 9, 1.0, 0.3}, LatticeSpec{2, 5, 1.0, 1.0}}) {
    const double tau = 50.0;
    const double equip = spec.dimension * static_cast<double>(spec.total_sites()) * tau / 2.0;
    CHECK(internal_energy(spec, tau) / equip == Approx(1.0).epsilon(0.01));

    double prev = internal_energy(spec, 0.0);
    for (int i = 1; i <= 15; ++i) {
      const double u = internal_energy(spec, 0.3 * i);
      CHECK(u >= prev);
      prev = u;
    }
  }

  CHECK_THROWS_AS(internal_energy({1, 9, 1.0, 0.0}, 0.5), Error);
  CHECK_NOTHROW(internal_energy({1, 9, 1.0, 0.0}, 0.0));
}

TEST_CASE("separable bound conventions") {
  const LatticeSpec chain{1, 51, 1.0, 0.0};
  const double expected = 0.5 * 51.0 * std::sqrt(2.0);
  CHECK(separable_bound(chain, BoundConvention::paper) == Approx(expected).epsilon(1e-14));
  CHECK(separable_bound(chain, BoundConvention::mean_frequency) == Approx(expected).epsilon(1e-14));

  const LatticeSpec cube{3, 5, 1.0, 0.0};
  CHECK(separable_bound(cube, BoundConvention::paper) ==
        Approx(1.5 * 125.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(separable_bound(cube, BoundConvention::mean_frequency) ==
        Approx(1.5 * 125.0 * std::sqrt(6.0)).epsilon(1e-14));

  CHECK(default_convention(chain) == BoundConvention::paper);
  CHECK(default_convention(cube) == BoundConvention::mean_frequency);
}

TEST_CASE("witness temperature closed forms and asymptote") {
  CHECK(witness_temperature({1, 9, 1.0, 0.0}, BoundConvention::paper) ==
        Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK(witness_temperature({1, 9, 1.0, 1.0}, BoundConvention::paper) ==
        Approx(std::sqrt(3.0)).margin(1e-12));
  CHECK(witness_temperature({3, 3, 1.0, 0.0}, BoundConvention::mean_frequency) ==
        Approx(std::sqrt(6.0)).margin(1e-12));
  const double tew = witness_temperature({1, 9, 1.0, 100.0}, BoundConvention::paper);
  CHECK(tew / 100.0 == Approx(1.0).epsilon(0.01));
}

TEST_CASE("witness verdict across the threshold") {
  const LatticeSpec spec{1, 49, 1.0, 1e-4};
  const auto cold = witness_verdict(spec, 0.5, BoundConvention::paper);
  CHECK(cold.verdict == WitnessVerdict::witnessed_entangled);
  const auto hot = witness_verdict(spec, 3.0, BoundConvention::paper);
  CHECK(hot.verdict == WitnessVerdict::inconclusive);

  // ground state: verdict compares the exact ground energy to the bound
  const auto ground = witness_verdict(spec, 0.0, BoundConvention::paper);
  CHECK(ground.verdict == WitnessVerdict::witnessed_entangled);
  CHECK(ground.internal_energy < ground.separable_bound);
}

TEST_CASE("equipartition crossing reproduces the witness temperature exactly") {
  for (const LatticeSpec spec : {LatticeSpec{1, 49, 1.0, 0.7}, LatticeSpec{2, 7, 1.0, 0.2}}) {
    for (const auto conv : {BoundConvention::paper, BoundConvention::mean_frequency}) {
      const double tew = witness_temperature(spec, conv);
      const double equip = spec.dimension * static_cast<double>(spec.total_sites()) * tew / 2.0;
      CHECK(equip == Approx(separable_bound(spec, conv)).epsilon(1e-12));
    }
  }
}

TEST_CASE("separable bound dominates the ground energy under the default convention") {
  for (const LatticeSpec spec :
       {LatticeSpec{1, 9, 1.0, 0.0}, LatticeSpec{1, 49, 1.0, 2.0}, LatticeSpec{2, 7, 1.0, 0.1},
        LatticeSpec{3, 5, 1.0, 0.5}, LatticeSpec{3, 9, 1.0, 0.0}}) {
    const double ground = internal_energy(spec, 0.0);
    CHECK(separable_bound(spec, default_convention(spec)) > ground);
  }
}

TEST_CASE("thermal part of the energy stays below equipartition") {
  const LatticeSpec spec{1, 25, 1.0, 0.3};
  const double ground = internal_energy(spec, 0.0);
  for (int i = 1; i <= 20; ++i) {
    const double tau = 0.15 * i;
    const double equip = spec.dimension * static_cast<double>(spec.total_sites()) * tau / 2.0;
    CHECK(internal_energy(spec, tau) - ground < equip);
  }
}

TEST_CASE("mode-transform bound endpoints") {
  const LatticeSpec spec{1, 9, 1.0, 0.4};
  const auto n = static_cast<int>(spec.total_sites());

  std::vector<std::vector<double>> identity(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    identity[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n), 0.0);
    identity[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  }
  const double ground = internal_energy(spec, 0.0);
  CHECK(mode_transform_bound(spec, identity) == Approx(ground).margin(1e-12));

  // a permutation only reorders the diagonal frequencies
  std::vector<std::vector<double>> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    perm[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n), 0.0);
    perm[static_cast<std::size_t>(i)][static_cast<std::size_t>((i + 3) % n)] = 1.0;
  }
  CHECK(mode_transform_bound(spec, perm) == Approx(ground).margin(1e-12));

  // real Fourier-type matrix lands on the complete-mixture value (N/2) Omega
  const double upper = 0.5 * n * std::sqrt(2.0 + std::pow(spec.trap_ratio(), 2));
  CHECK(mode_transform_bound(spec, hartley_for_spec(spec)) == Approx(upper).margin(1e-10));
}

TEST_CASE("random orthogonal transforms stay inside the sandwich") {
  const LatticeSpec spec{1, 15, 1.0, 0.1};
  const auto n = static_cast<int>(spec.total_sites());
  const double lower = internal_energy(spec, 0.0);
  const double upper = 0.5 * n * std::sqrt(2.0 + std::pow(spec.trap_ratio(), 2));
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const double bound = mode_transform_bound(spec, random_orthogonal(n, seed));
    CHECK(bound - lower >= -1e-10);
    CHECK(upper - bound >= -1e-10);
  }
}

TEST_CASE("mode-transform bound rejects bad inputs") {
  const LatticeSpec spec{1, 5, 1.0, 0.4};
  std::vector<std::vector<double>> not_orthogonal(5, std::vector<double>(5, 0.3));
  CHECK_THROWS_AS(mode_transform_bound(spec, not_orthogonal), Error);
  std::vector<std::vector<double>> wrong_shape(4, std::vector<double>(4, 0.0));
  CHECK_THROWS_AS(mode_transform_bound(spec, wrong_shape), Error);
  CHECK_THROWS_AS(mode_transform_bound({2, 5, 1.0, 0.4}, not_orthogonal), Error);
}
