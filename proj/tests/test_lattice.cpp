#include <catch2/catch.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "harmlat/lattice.hpp"

using namespace harmlat;

namespace {

bool fails_with(errc expected, const LatticeSpec& raw) {
  try {
    validate_spec(raw);
  } catch (const Error& e) {
    return e.code() == expected;
  }
  return false;
}

}  // namespace

TEST_CASE("spec validation accepts the paper-style configurations") {
  CHECK_NOTHROW(validate_spec({1, 51, 1.0, 1e-4}));
  CHECK_NOTHROW(validate_spec({2, 31, 1.0, 1e-4}));
  CHECK_NOTHROW(validate_spec({3, 11, 1.0, 0.0}));
}

TEST_CASE("spec validation rejects each broken invariant") {
  CHECK(fails_with(errc::even_side, {1, 4, 1.0, 0.1}));
  CHECK(fails_with(errc::even_side, {1, 1, 1.0, 0.1}));
  CHECK(fails_with(errc::non_positive_coupling, {1, 5, 0.0, 0.1}));
  CHECK(fails_with(errc::non_positive_coupling, {1, 5, -1.0, 0.1}));
  CHECK(fails_with(errc::negative_trap, {1, 5, 1.0, -0.1}));
  CHECK(fails_with(errc::unsupported_dimension, {4, 5, 1.0, 0.1}));
  CHECK(fails_with(errc::unsupported_dimension, {0, 5, 1.0, 0.1}));
}

TEST_CASE("mode frequencies match the dispersion relation") {
  const LatticeSpec chain{1, 3, 1.0, 0.0};
  CHECK(mode_frequency(chain, {{0, 0, 0}, 1}) == 0.0);
  CHECK(mode_frequency(chain, {{1, 0, 0}, 1}) == Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(mode_frequency(chain, {{-1, 0, 0}, 1}) == Approx(std::sqrt(3.0)).epsilon(1e-15));

  const LatticeSpec plane{2, 3, 1.0, 2.0};  // pure-trap term (delta/2 omega)^2 = 1
  CHECK(mode_frequency(plane, {{0, 0, 0}, 2}) == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mode range is lazy, lexicographic and l -> -l symmetric") {
  const LatticeSpec spec{2, 5, 1.0, 0.3};
  ModeRange range(spec);
  REQUIRE(range.size() == 25);

  std::vector<std::array<int, 3>> seen;
  for (const auto& m : range) seen.push_back(m.l);
  REQUIRE(seen.size() == 25);
  CHECK(seen.front() == std::array<int, 3>{-2, -2, 0});
  CHECK(seen.back() == std::array<int, 3>{2, 2, 0});
  for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i - 1] < seen[i]);

  std::set<std::array<int, 3>> index_set(seen.begin(), seen.end());
  for (const auto& l : index_set) {
    CHECK(index_set.count({-l[0], -l[1], -l[2]}) == 1);
  }
}

TEST_CASE("spectrum minimum sits at l = 0 with value delta/omega") {
  for (const LatticeSpec spec : {LatticeSpec{1, 9, 1.0, 0.4}, LatticeSpec{2, 5, 2.0, 0.6},
                                 LatticeSpec{3, 3, 1.0, 1.0}}) {
    double min_x = 1e300;
    ModeIndex argmin;
    for (const auto& m : ModeRange(spec)) {
      const double x = mode_frequency(spec, m);
      if (x < min_x) {
        min_x = x;
        argmin = m;
      }
    }
    CHECK(min_x == Approx(spec.trap_ratio()).margin(1e-15));
    CHECK(argmin.l == std::array<int, 3>{0, 0, 0});

    // the minimum is attained exactly once
    int attained = 0;
    for (const auto& m : ModeRange(spec)) {
      if (mode_frequency(spec, m) <= min_x + 1e-15) ++attained;
    }
    CHECK(attained == 1);
  }
}

TEST_CASE("mean-square frequency equals the closed form 2 d omega^2 + delta^2") {
  for (int d = 1; d <= 3; ++d) {
    for (int n : {3, 5, 7, 9}) {
      for (double ratio : {0.0, 0.5, 1.0}) {
        const LatticeSpec spec{d, n, 1.0, ratio};
        const double expected = 2.0 * d + ratio * ratio;
        CHECK(mean_square_frequency(spec) == Approx(expected).epsilon(1e-12));
      }
    }
  }
  // spec examples: d=1 delta=0 -> 2 omega^2; d=3 n=5 delta=omega -> 7 omega^2
  CHECK(mean_square_frequency({1, 7, 2.0, 0.0}) == Approx(8.0).epsilon(1e-12));
  CHECK(mean_square_frequency({3, 5, 1.0, 1.0}) == Approx(7.0).epsilon(1e-12));
}

TEST_CASE("mean-square frequency agrees with a direct per-mode loop") {
  const LatticeSpec spec{2, 7, 1.5, 0.8};
  double sum = 0.0;
  for (const auto& m : ModeRange(spec)) {
    const double x = mode_frequency(spec, m);
    sum += x * x;
  }
  const double direct = sum / static_cast<double>(spec.total_sites()) * spec.coupling * spec.coupling;
  CHECK(mean_square_frequency(spec) == Approx(direct).epsilon(1e-13));
}
