#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "harmlat/errors.hpp"
#include "harmlat/lattice.hpp"
#include "harmlat/numeric.hpp"

namespace harmlat {

/// Thermal two-site covariance entries for a pair of lattice sites at
/// separation r. Entries are dimensionless: a carries units hbar/(m omega),
/// b carries m hbar omega, e and f likewise; with hbar = m = 1 the products
/// entering the separability functions need no extra factors.
struct TwoSiteCovariance {
  double a = 0.0;  ///< position variance, > 0
  double b = 0.0;  ///< momentum variance, > 0
  double e = 0.0;  ///< position cross-correlation, |e| < a
  double f = 0.0;  ///< momentum cross-correlation, |f| < b
  std::array<int, 3> separation{0, 0, 0};  ///< canonical, components in [0,(n-1)/2]
  int dimension = 1;
  double temp_scaled = 0.0;  ///< tau = 2 k_B T / (hbar omega); 0 = ground state
};

/// Row-major 4x4 covariance matrix in the operator order (u_R, p_R, u_P, p_P).
using CovMatrix = std::array<std::array<double, 4>, 4>;

/// Reduces an arbitrary integer separation vector to the canonical
/// representative under lattice periodicity: each component taken mod n and
/// folded into [0, (n-1)/2]. The cosine kernel is invariant under the fold.
inline std::array<int, 3> canonical_separation(const LatticeSpec& spec_in, std::span<const int> r) {
  const LatticeSpec spec = validate_spec(spec_in);
  if (r.size() != static_cast<std::size_t>(spec.dimension)) {
    fail(errc::bad_separation, "separation has " + std::to_string(r.size()) +
                                   " components, lattice dimension is " + std::to_string(spec.dimension));
  }
  std::array<int, 3> out{0, 0, 0};
  for (int j = 0; j < spec.dimension; ++j) {
    int c = ((r[static_cast<std::size_t>(j)] % spec.side) + spec.side) % spec.side;
    if (c > spec.half_span()) c = spec.side - c;
    out[static_cast<std::size_t>(j)] = c;
  }
  return out;
}

namespace detail {

struct CovarianceAccumulator {
  double a = 0.0, b = 0.0, e = 0.0, f = 0.0;
  CovarianceAccumulator operator+(const CovarianceAccumulator& o) const {
    return {a + o.a, b + o.b, e + o.e, f + o.f};
  }
};

}  // namespace detail

/// Mode sums for the two-site covariance entries:
///   A = (1/N) sum_l coth(xi x_l)/x_l          B = (1/N) sum_l x_l coth(xi x_l)
///   E = (1/N) sum_l cos(2 pi l.r / n) coth(xi x_l)/x_l
///   F = (1/N) sum_l cos(2 pi l.r / n) x_l coth(xi x_l)
/// with xi = 1/tau. At tau == 0 every coth factor is exactly 1. The sums use
/// a fixed-shape pairwise reduction, so repeated calls are bit-identical.
///
/// The separation must already be canonical: components in [0, (n-1)/2],
/// not all zero (use canonical_separation to fold larger vectors first).
inline TwoSiteCovariance two_site_covariance(const LatticeSpec& spec_in, double temp_scaled,
                                             std::span<const int> separation) {
  const LatticeSpec spec = validate_spec(spec_in);
  if (!(temp_scaled >= 0.0)) {
    fail(errc::domain_error, "scaled temperature must be >= 0, got " + std::to_string(temp_scaled));
  }
  if (separation.size() != static_cast<std::size_t>(spec.dimension)) {
    fail(errc::bad_separation, "separation has " + std::to_string(separation.size()) +
                                   " components, lattice dimension is " + std::to_string(spec.dimension));
  }
  std::array<int, 3> r{0, 0, 0};
  bool all_zero = true;
  for (int j = 0; j < spec.dimension; ++j) {
    const int c = separation[static_cast<std::size_t>(j)];
    if (c < 0 || c > spec.half_span()) {
      fail(errc::bad_separation, "separation component " + std::to_string(c) + " outside [0, " +
                                     std::to_string(spec.half_span()) + "]");
    }
    if (c != 0) all_zero = false;
    r[static_cast<std::size_t>(j)] = c;
  }
  if (all_zero) fail(errc::bad_separation, "separation must not be the zero vector");

  const detail::ModeSum ms(spec);
  const std::int64_t n_modes = spec.total_sites();
  const bool ground = (temp_scaled == 0.0);
  const double xi = ground ? 0.0 : 1.0 / temp_scaled;

  // cos(2 pi m / n) lookup for m = (l.r mod n)
  std::vector<double> cos_table(static_cast<std::size_t>(spec.side));
  for (int m = 0; m < spec.side; ++m) {
    cos_table[static_cast<std::size_t>(m)] = std::cos(2.0 * std::numbers::pi * m / spec.side);
  }

  const auto term = [&](std::int64_t i) -> detail::CovarianceAccumulator {
    const double x = ms.x(i);
    if (x < 1e-12) {
      fail(errc::zero_mode_divergence, "zero mode makes 1/x_l diverge; a positive trap is required");
    }
    const double w = ground ? 1.0 : coth_checked(xi * x);
    const double c = cos_table[static_cast<std::size_t>(ms.phase_index(i, r))];
    const double pos = w / x;
    const double mom = x * w;
    return {pos, mom, c * pos, c * mom};
  };

  const auto acc = pairwise_sum<detail::CovarianceAccumulator>(n_modes, term);
  const double inv_n = 1.0 / static_cast<double>(n_modes);

  TwoSiteCovariance cov;
  cov.a = acc.a * inv_n;
  cov.b = acc.b * inv_n;
  cov.e = acc.e * inv_n;
  cov.f = acc.f * inv_n;
  cov.separation = r;
  cov.dimension = spec.dimension;
  cov.temp_scaled = temp_scaled;
  return cov;
}

/// The 4x4 two-site covariance matrix
///   [ A 0 E 0 ]
///   [ 0 B 0 F ]
///   [ E 0 A 0 ]
///   [ 0 F 0 B ]
inline CovMatrix assemble_matrix(const TwoSiteCovariance& cov) {
  CovMatrix m{};
  m[0] = {cov.a, 0.0, cov.e, 0.0};
  m[1] = {0.0, cov.b, 0.0, cov.f};
  m[2] = {cov.e, 0.0, cov.a, 0.0};
  m[3] = {0.0, cov.f, 0.0, cov.b};
  return m;
}

}  // namespace harmlat
