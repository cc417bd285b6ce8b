#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "harmlat/errors.hpp"
#include "harmlat/numeric.hpp"

namespace harmlat {

// Unit conventions, used throughout the library:
//   hbar = k_B = m = 1; the nearest-neighbour coupling omega sets the scale.
//   Temperatures are the scaled quantity tau = 2 k_B T / (hbar omega), with
//   tau == 0.0 selecting the exact ground state (a distinguished code path,
//   not a large-beta limit). Energies are reported in units of hbar omega.
//   Mode frequencies are reported scaled, x_l = omega_l / omega.

/// Periodic d-dimensional harmonic lattice: n^d sites, nearest-neighbour
/// coupling omega, on-site trap delta. Side length must be odd so the mode
/// index set {-(n-1)/2, ..., (n-1)/2} is symmetric.
struct LatticeSpec {
  int dimension = 1;      ///< d in {1, 2, 3}
  int side = 3;           ///< sites per direction, odd, >= 3
  double coupling = 1.0;  ///< omega > 0 (angular frequency units)
  double trap = 0.0;      ///< delta >= 0 (angular frequency units)

  std::int64_t total_sites() const noexcept {
    std::int64_t n = 1;
    for (int j = 0; j < dimension; ++j) n *= side;
    return n;
  }
  double trap_ratio() const noexcept { return trap / coupling; }
  int half_span() const noexcept { return (side - 1) / 2; }
};

/// Checks all LatticeSpec invariants and returns the spec unchanged.
inline LatticeSpec validate_spec(const LatticeSpec& raw) {
  if (raw.dimension < 1 || raw.dimension > 3) {
    fail(errc::unsupported_dimension, "dimension must be 1, 2 or 3, got " + std::to_string(raw.dimension));
  }
  if (raw.side < 3) {
    fail(errc::even_side, "side must be an odd integer >= 3, got " + std::to_string(raw.side));
  }
  if (raw.side % 2 == 0) {
    fail(errc::even_side, "side must be odd, got " + std::to_string(raw.side));
  }
  if (!(raw.coupling > 0.0)) {
    fail(errc::non_positive_coupling, "coupling must be > 0, got " + std::to_string(raw.coupling));
  }
  if (!(raw.trap >= 0.0)) {
    fail(errc::negative_trap, "trap must be >= 0, got " + std::to_string(raw.trap));
  }
  return raw;
}

/// One phononic mode label: integer components l_j in [-(n-1)/2, (n-1)/2].
struct ModeIndex {
  std::array<int, 3> l{0, 0, 0};
  int dimension = 1;
};

/// Decodes the i-th mode in lexicographic order (l[0] slowest).
inline ModeIndex mode_at(const LatticeSpec& spec, std::int64_t ordinal) {
  ModeIndex m;
  m.dimension = spec.dimension;
  const int h = spec.half_span();
  for (int j = spec.dimension - 1; j >= 0; --j) {
    m.l[static_cast<std::size_t>(j)] = static_cast<int>(ordinal % spec.side) - h;
    ordinal /= spec.side;
  }
  return m;
}

/// Lazy range over all n^d modes in lexicographic order; nothing is
/// materialized, so 3D lattices cost no memory to iterate.
class ModeRange {
 public:
  explicit ModeRange(const LatticeSpec& spec) : spec_(validate_spec(spec)) {}

  class iterator {
   public:
    using value_type = ModeIndex;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator(const LatticeSpec* spec, std::int64_t ordinal) : spec_(spec), ordinal_(ordinal) {}
    ModeIndex operator*() const { return mode_at(*spec_, ordinal_); }
    iterator& operator++() { ++ordinal_; return *this; }
    iterator operator++(int) { iterator t = *this; ++ordinal_; return t; }
    bool operator==(const iterator& o) const { return ordinal_ == o.ordinal_; }
    bool operator!=(const iterator& o) const { return ordinal_ != o.ordinal_; }

   private:
    const LatticeSpec* spec_;
    std::int64_t ordinal_;
  };

  iterator begin() const { return iterator(&spec_, 0); }
  iterator end() const { return iterator(&spec_, spec_.total_sites()); }
  std::int64_t size() const { return spec_.total_sites(); }

 private:
  LatticeSpec spec_;
};

/// Scaled mode frequency x_l = omega_l / omega:
///   x_l = 2 sqrt( sum_j sin^2(pi l_j / n) + (delta / 2 omega)^2 ).
/// Minimum delta/omega is attained exactly at l = 0.
inline double mode_frequency(const LatticeSpec& spec_in, const ModeIndex& mode) {
  const LatticeSpec spec = validate_spec(spec_in);
  const int h = spec.half_span();
  double s = 0.0;
  for (int j = 0; j < spec.dimension; ++j) {
    const int lj = mode.l[static_cast<std::size_t>(j)];
    if (lj < -h || lj > h) {
      fail(errc::domain_error, "mode component " + std::to_string(lj) + " outside [-" +
                                   std::to_string(h) + ", " + std::to_string(h) + "]");
    }
    const double sj = std::sin(std::numbers::pi * lj / spec.side);
    s += sj * sj;
  }
  const double half_ratio = spec.trap / (2.0 * spec.coupling);
  return 2.0 * std::sqrt(s + half_ratio * half_ratio);
}

namespace detail {

/// Table-driven per-ordinal evaluation of x_l and the separation phase,
/// shared by the mode sums in the covariance and witness modules.
struct ModeSum {
  explicit ModeSum(const LatticeSpec& spec)
      : side(spec.side), dimension(spec.dimension), half(spec.half_span()) {
    const double half_ratio = spec.trap / (2.0 * spec.coupling);
    kappa_sq = half_ratio * half_ratio;
    sin_sq.resize(static_cast<std::size_t>(side));
    for (int idx = 0; idx < side; ++idx) {
      const double s = std::sin(std::numbers::pi * (idx - half) / side);
      sin_sq[static_cast<std::size_t>(idx)] = s * s;
    }
  }

  double x_sq(std::int64_t ordinal) const {
    double s = kappa_sq;
    for (int j = 0; j < dimension; ++j) {
      s += sin_sq[static_cast<std::size_t>(ordinal % side)];
      ordinal /= side;
    }
    return 4.0 * s;
  }

  double x(std::int64_t ordinal) const { return std::sqrt(x_sq(ordinal)); }

  /// (sum_j l_j r_j) mod side, in [0, side). Component order is immaterial
  /// because the tables are per-axis identical.
  int phase_index(std::int64_t ordinal, const std::array<int, 3>& r) const {
    std::int64_t dot = 0;
    for (int j = dimension - 1; j >= 0; --j) {
      const int lj = static_cast<int>(ordinal % side) - half;
      ordinal /= side;
      dot += static_cast<std::int64_t>(lj) * r[static_cast<std::size_t>(j)];
    }
    const std::int64_t m = ((dot % side) + side) % side;
    return static_cast<int>(m);
  }

  int side;
  int dimension;
  int half;
  double kappa_sq;
  std::vector<double> sin_sq;
};

}  // namespace detail

/// (1/N) sum_l (omega x_l)^2, evaluated by pairwise summation over the mode
/// set. Closed form: 2 d omega^2 + delta^2 (the mean of each sin^2 term is
/// 1/2 for odd n).
inline double mean_square_frequency(const LatticeSpec& spec_in) {
  const LatticeSpec spec = validate_spec(spec_in);
  const detail::ModeSum ms(spec);
  const std::int64_t n = spec.total_sites();
  const double sum = pairwise_sum<double>(n, [&](std::int64_t i) { return ms.x_sq(i); });
  return sum / static_cast<double>(n) * spec.coupling * spec.coupling;
}

}  // namespace harmlat
