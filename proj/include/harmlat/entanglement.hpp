#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "harmlat/covariance.hpp"
#include "harmlat/errors.hpp"
#include "harmlat/lattice.hpp"
#include "harmlat/quadrature.hpp"

namespace harmlat {

/// The two PPT separability functions. The pair (and the state) is separable
/// iff both are non-negative; s1 may legitimately be +infinity (divergent
/// position branch in the continuum at zero trap).
struct SeparabilityPair {
  double s1 = 0.0;  ///< (A + E)(B - F) - 1
  double s2 = 0.0;  ///< (A - E)(B + F) - 1
};

struct NegativityResult {
  double value = 0.0;  ///< logarithmic negativity, >= 0
  bool entangled = false;
};

inline SeparabilityPair separability_functions(const TwoSiteCovariance& cov) {
  return {(cov.a + cov.e) * (cov.b - cov.f) - 1.0, (cov.a - cov.e) * (cov.b + cov.f) - 1.0};
}

/// E_N = sum_j max{0, -ln sqrt(s_j + 1)}. A +infinity branch contributes 0.
inline NegativityResult log_negativity(const SeparabilityPair& pair) {
  double value = 0.0;
  for (const double s : {pair.s1, pair.s2}) {
    if (!(s > -1.0)) {
      fail(errc::domain_error, "separability function " + std::to_string(s) +
                                   " <= -1 signals an unphysical covariance");
    }
    const double term = -0.5 * std::log1p(s);
    if (term > 0.0) value += term;
  }
  NegativityResult out;
  out.value = value;
  out.entangled = std::min(pair.s1, pair.s2) < 0.0;
  return out;
}

/// Ground-state separability functions in the continuum limit of the 1D
/// chain, evaluated by adaptive quadrature over [0, pi/2] (the integrands are
/// even). kappa = delta / (2 omega). For kappa == 0 the position integral of
/// the s1 branch diverges and s1 is reported as +infinity; the surviving s2
/// branch has a removable singularity at z = 0, kept finite by writing the
/// numerators as 2 sin^2(z r) and 2 cos^2(z r).
inline SeparabilityPair continuum_ground_state_s(int separation, double kappa,
                                                 double abs_tol = 1e-9) {
  if (separation < 1) fail(errc::domain_error, "separation must be >= 1");
  if (!(kappa >= 0.0)) fail(errc::domain_error, "trap ratio must be >= 0");

  const double half_pi = 0.5 * std::numbers::pi;
  const double r = static_cast<double>(separation);
  const double kappa_sq = kappa * kappa;

  const auto root = [kappa_sq](double z) {
    const double s = std::sin(z);
    return std::sqrt(s * s + kappa_sq);
  };
  // position-sector integrands 2 sin^2(zr)/root and 2 cos^2(zr)/root
  const auto pos_minus = [&](double z) {
    const double num = std::sin(z * r);
    const double den = root(z);
    if (den == 0.0) return 0.0;  // removable at z = 0
    return 2.0 * num * num / den;
  };
  const auto pos_plus = [&](double z) {
    const double num = std::cos(z * r);
    return 2.0 * num * num / root(z);
  };
  // momentum-sector integrands root * 2 cos^2(yr) and root * 2 sin^2(yr)
  const auto mom_plus = [&](double y) {
    const double c = std::cos(y * r);
    return root(y) * 2.0 * c * c;
  };
  const auto mom_minus = [&](double y) {
    const double s = std::sin(y * r);
    return root(y) * 2.0 * s * s;
  };

  const double inv_pi_sq = 1.0 / (std::numbers::pi * std::numbers::pi);
  SeparabilityPair out;

  // s2: "-" in the position sector, "+" in the momentum sector
  {
    const double ipos = 2.0 * integrate_adaptive(pos_minus, 0.0, half_pi, abs_tol).value;
    const double imom = 2.0 * integrate_adaptive(mom_plus, 0.0, half_pi, abs_tol).value;
    out.s2 = inv_pi_sq * ipos * imom - 1.0;
  }
  // s1: "+" in the position sector, "-" in the momentum sector
  if (kappa == 0.0) {
    out.s1 = std::numeric_limits<double>::infinity();
  } else {
    const double ipos = 2.0 * integrate_adaptive(pos_plus, 0.0, half_pi, abs_tol).value;
    const double imom = 2.0 * integrate_adaptive(mom_minus, 0.0, half_pi, abs_tol).value;
    out.s1 = inv_pi_sq * ipos * imom - 1.0;
  }
  return out;
}

/// First-order high-temperature expansion of s2 in the continuum, zero-trap
/// chain: 1/(2 xi^2) - 1/2 for nearest neighbours, 1/xi^2 for next-nearest
/// (never negative). xi = hbar omega / (2 k_B T) = 1/tau.
inline double high_temperature_s2(double xi, int separation) {
  if (!(xi > 0.0)) fail(errc::domain_error, "xi must be > 0");
  if (separation == 1) return 0.5 / (xi * xi) - 0.5;
  if (separation == 2) return 1.0 / (xi * xi);
  fail(errc::unsupported_separation,
       "high-temperature expansion available for separations 1 and 2 only");
}

/// Scaled temperature at which the two-site negativity at the given
/// separation vanishes: ascending grid scan of min(s1, s2) over
/// [tol, scan_max] followed by bisection on the last sign change. The scan
/// guards against multiple crossings, which monotonicity arguments do not
/// rule out.
inline double critical_temperature(const LatticeSpec& spec_in, std::span<const int> separation,
                                   double scan_max = 3.0, double tol = 1e-6,
                                   int grid_points = 200) {
  const LatticeSpec spec = validate_spec(spec_in);
  if (!(spec.trap > 0.0)) {
    fail(errc::zero_mode_divergence, "critical-temperature scan requires a positive trap");
  }
  if (!(tol > 0.0) || !(scan_max > tol) || grid_points < 2) {
    fail(errc::domain_error, "require tol > 0, scan_max > tol and at least 2 grid points");
  }

  const auto min_s = [&](double tau) {
    const auto pair = separability_functions(two_site_covariance(spec, tau, separation));
    return std::min(pair.s1, pair.s2);
  };

  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  std::vector<double> g(static_cast<std::size_t>(grid_points));
  bool any_negative = false;
  for (int i = 0; i < grid_points; ++i) {
    const double tau = tol + (scan_max - tol) * i / (grid_points - 1);
    grid[static_cast<std::size_t>(i)] = tau;
    g[static_cast<std::size_t>(i)] = min_s(tau);
    if (g[static_cast<std::size_t>(i)] < 0.0) any_negative = true;
  }
  if (!any_negative) {
    fail(errc::not_entangled, "no positive negativity anywhere on the scan grid");
  }
  if (g.back() < 0.0) {
    fail(errc::no_vanishing, "still entangled at scan_max = " + std::to_string(scan_max));
  }

  int last = -1;
  for (int i = 0; i + 1 < grid_points; ++i) {
    if (g[static_cast<std::size_t>(i)] < 0.0 && g[static_cast<std::size_t>(i + 1)] >= 0.0) last = i;
  }
  if (last < 0) {
    // negative values exist but no upward crossing; cannot bracket
    fail(errc::not_entangled, "no sign change of min(s1, s2) found on the grid");
  }

  double lo = grid[static_cast<std::size_t>(last)];
  double hi = grid[static_cast<std::size_t>(last + 1)];
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (min_s(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Convenience: full pipeline from spec to logarithmic negativity.
inline NegativityResult negativity_at(const LatticeSpec& spec, double temp_scaled,
                                      std::span<const int> separation) {
  return log_negativity(separability_functions(two_site_covariance(spec, temp_scaled, separation)));
}

}  // namespace harmlat
