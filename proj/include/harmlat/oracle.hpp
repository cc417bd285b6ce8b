#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "harmlat/covariance.hpp"
#include "harmlat/errors.hpp"
#include "harmlat/lattice.hpp"

namespace harmlat::oracle {

/// Numerical normal-mode decomposition of the site-space coupling matrix
/// (units omega^2): K_RR = (delta/omega)^2 + 2d, K_RP = -1 per periodic bond.
/// Replaces the Fourier + Bogoliubov route by a dense symmetric
/// eigendecomposition; used to validate every analytic path.
struct DenseModeDecomposition {
  LatticeSpec spec;
  Eigen::MatrixXd coupling;      ///< K, units omega^2
  Eigen::VectorXd frequencies;   ///< x_k = omega_k/omega, ascending
  Eigen::MatrixXd eigenvectors;  ///< columns = normal modes, orthogonal
};

namespace detail {

inline std::vector<int> site_coords(const LatticeSpec& spec, std::int64_t site) {
  std::vector<int> c(static_cast<std::size_t>(spec.dimension));
  for (int j = spec.dimension - 1; j >= 0; --j) {
    c[static_cast<std::size_t>(j)] = static_cast<int>(site % spec.side);
    site /= spec.side;
  }
  return c;
}

inline std::int64_t site_ordinal(const LatticeSpec& spec, const std::vector<int>& coords) {
  std::int64_t s = 0;
  for (int j = 0; j < spec.dimension; ++j) {
    s = s * spec.side + coords[static_cast<std::size_t>(j)];
  }
  return s;
}

}  // namespace detail

inline DenseModeDecomposition dense_modes(const LatticeSpec& spec_in) {
  const LatticeSpec spec = validate_spec(spec_in);
  const std::int64_t n = spec.total_sites();
  if (n > 10000) {
    fail(errc::too_large, "dense oracle limited to 10^4 sites, got " + std::to_string(n));
  }
  const auto ni = static_cast<Eigen::Index>(n);
  const double trap_sq = spec.trap_ratio() * spec.trap_ratio();

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) k(i, i) = trap_sq;
  for (std::int64_t i = 0; i < n; ++i) {
    auto coords = detail::site_coords(spec, i);
    for (int axis = 0; axis < spec.dimension; ++axis) {
      auto nb = coords;
      nb[static_cast<std::size_t>(axis)] = (nb[static_cast<std::size_t>(axis)] + 1) % spec.side;
      const auto j = static_cast<Eigen::Index>(detail::site_ordinal(spec, nb));
      const auto ii = static_cast<Eigen::Index>(i);
      k(ii, ii) += 1.0;
      k(j, j) += 1.0;
      k(ii, j) -= 1.0;
      k(j, ii) -= 1.0;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  if (solver.info() != Eigen::Success) {
    fail(errc::unphysical, "eigendecomposition of the coupling matrix failed");
  }

  DenseModeDecomposition out;
  out.spec = spec;
  out.coupling = std::move(k);
  out.eigenvectors = solver.eigenvectors();
  out.frequencies.resize(ni);
  const double lambda_max = solver.eigenvalues().maxCoeff();
  const double clamp_floor = -1e-12 * std::max(1.0, lambda_max);
  for (Eigen::Index i = 0; i < ni; ++i) {
    double lambda = solver.eigenvalues()(i);
    if (lambda < 0.0) {
      if (lambda < clamp_floor) {
        fail(errc::unphysical, "coupling matrix eigenvalue " + std::to_string(lambda) + " < 0");
      }
      lambda = 0.0;
    }
    out.frequencies(i) = std::sqrt(lambda);
  }
  return out;
}

/// Two-site covariance reconstructed from numerically diagonalized modes:
///   Gamma_uu(R,P) = sum_k V_Rk V_Pk coth(xi x_k)/x_k,   Gamma_pp with x_k up.
/// Agrees with the analytic mode sums to 1e-10 on translation-invariant specs.
inline TwoSiteCovariance covariance_from_modes(const DenseModeDecomposition& decomp,
                                               double temp_scaled, std::int64_t site_r,
                                               std::int64_t site_p) {
  const LatticeSpec& spec = decomp.spec;
  const std::int64_t n = spec.total_sites();
  if (site_r < 0 || site_r >= n || site_p < 0 || site_p >= n) {
    fail(errc::bad_separation, "site index out of range");
  }
  if (site_r == site_p) {
    fail(errc::bad_separation, "two-site covariance requires distinct sites");
  }
  if (!(temp_scaled >= 0.0)) {
    fail(errc::domain_error, "scaled temperature must be >= 0");
  }
  const bool ground = (temp_scaled == 0.0);
  const double xi = ground ? 0.0 : 1.0 / temp_scaled;

  const auto ni = static_cast<Eigen::Index>(n);
  double a = 0.0, b = 0.0, e = 0.0, f = 0.0;
  for (Eigen::Index k = 0; k < ni; ++k) {
    const double x = decomp.frequencies(k);
    if (x < 1e-12) {
      fail(errc::zero_mode_divergence, "zero mode makes 1/x_k diverge; a positive trap is required");
    }
    const double w = ground ? 1.0 : coth_checked(xi * x);
    const double vr = decomp.eigenvectors(static_cast<Eigen::Index>(site_r), k);
    const double vp = decomp.eigenvectors(static_cast<Eigen::Index>(site_p), k);
    a += vr * vr * w / x;
    b += vr * vr * x * w;
    e += vr * vp * w / x;
    f += vr * vp * x * w;
  }

  const auto cr = detail::site_coords(spec, site_r);
  const auto cp = detail::site_coords(spec, site_p);
  std::array<int, 3> sep{0, 0, 0};
  for (int j = 0; j < spec.dimension; ++j) {
    int d = ((cp[static_cast<std::size_t>(j)] - cr[static_cast<std::size_t>(j)]) % spec.side +
             spec.side) %
            spec.side;
    if (d > spec.half_span()) d = spec.side - d;
    sep[static_cast<std::size_t>(j)] = d;
  }

  TwoSiteCovariance cov;
  cov.a = a;
  cov.b = b;
  cov.e = e;
  cov.f = f;
  cov.separation = sep;
  cov.dimension = spec.dimension;
  cov.temp_scaled = temp_scaled;
  return cov;
}

/// Truncated Fock-space thermal oracle: builds exp(-beta H) for a short 1D
/// periodic chain in an occupation basis and reads the second moments off by
/// trace, independent of any mode decomposition.
struct FockOracleConfig {
  int sites = 3;    ///< 2-4 and equal to the spec side (odd, so 3 in practice)
  int cutoff = 12;  ///< max occupation per site kept in the basis
  double xi = 1.0;  ///< hbar omega / (2 k_B T), > 0
};

inline TwoSiteCovariance fock_thermal_moments(const FockOracleConfig& config,
                                              const LatticeSpec& spec_in) {
  const LatticeSpec spec = validate_spec(spec_in);
  if (spec.dimension != 1) {
    fail(errc::unsupported_dimension, "Fock oracle supports 1D chains only");
  }
  if (config.sites < 2 || config.sites > 4) {
    fail(errc::domain_error, "Fock oracle supports 2-4 sites");
  }
  if (config.sites != spec.side) {
    fail(errc::domain_error, "config.sites must equal the spec side");
  }
  if (config.cutoff < 1) fail(errc::domain_error, "cutoff must be >= 1");
  if (!(config.xi > 0.0)) fail(errc::domain_error, "xi must be > 0");
  if (!(spec.trap > 0.0)) {
    fail(errc::zero_mode_divergence, "Fock oracle requires a positive trap");
  }

  const int s = config.sites;
  const int q = config.cutoff + 1;  // states per site
  double dim_d = 1.0;
  for (int i = 0; i < s; ++i) dim_d *= q;
  if (dim_d > 1e6) {
    fail(errc::too_large, "truncated Hilbert space dimension exceeds 10^6");
  }
  const auto dim = static_cast<Eigen::Index>(dim_d);

  // single-site ladder structure; basis oscillator frequency = mean-field
  // frequency sqrt(delta^2 + 2 omega^2) for fast cutoff convergence
  const double nu = std::sqrt(spec.trap * spec.trap + 2.0 * spec.coupling * spec.coupling);
  Eigen::MatrixXd upos1 = Eigen::MatrixXd::Zero(q, q);  // u = (a + a^dag)/sqrt(2 nu)
  Eigen::MatrixXd mneg1 = Eigen::MatrixXd::Zero(q, q);  // m = a^dag - a; p = i sqrt(nu/2) m
  for (int occ = 1; occ < q; ++occ) {
    const double amp = std::sqrt(static_cast<double>(occ));
    upos1(occ - 1, occ) = amp / std::sqrt(2.0 * nu);
    upos1(occ, occ - 1) = amp / std::sqrt(2.0 * nu);
    mneg1(occ, occ - 1) = amp;   // a^dag
    mneg1(occ - 1, occ) = -amp;  // -a
  }

  // lift a single-site operator to site index via Kronecker embedding
  const auto lift = [&](const Eigen::MatrixXd& op, int site) {
    Eigen::SparseMatrix<double> m(1, 1);
    m.insert(0, 0) = 1.0;
    for (int j = 0; j < s; ++j) {
      Eigen::SparseMatrix<double> factor;
      if (j == site) {
        factor = op.sparseView();
      } else {
        Eigen::SparseMatrix<double> eye(q, q);
        eye.setIdentity();
        factor = eye;
      }
      Eigen::SparseMatrix<double> next(m.rows() * factor.rows(), m.cols() * factor.cols());
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(static_cast<std::size_t>(m.nonZeros()) * static_cast<std::size_t>(factor.nonZeros()));
      for (int ok = 0; ok < m.outerSize(); ++ok) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, ok); it; ++it) {
          for (int fk = 0; fk < factor.outerSize(); ++fk) {
            for (Eigen::SparseMatrix<double>::InnerIterator jt(factor, fk); jt; ++jt) {
              trips.emplace_back(it.row() * factor.rows() + jt.row(),
                                 it.col() * factor.cols() + jt.col(), it.value() * jt.value());
            }
          }
        }
      }
      next.setFromTriplets(trips.begin(), trips.end());
      m = std::move(next);
    }
    return m;
  };

  std::vector<Eigen::SparseMatrix<double>> u(static_cast<std::size_t>(s));
  std::vector<Eigen::SparseMatrix<double>> w(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) {
    u[static_cast<std::size_t>(j)] = lift(upos1, j);
    w[static_cast<std::size_t>(j)] = lift(mneg1, j);
  }

  // H = sum_R [ p_R^2/2 + delta^2 u_R^2/2 ] + sum_bonds omega^2 (u_R - u_R')^2/2
  // with p^2 = -(nu/2) m^2
  Eigen::SparseMatrix<double> h(dim, dim);
  const double om_sq = spec.coupling * spec.coupling;
  const double tr_sq = spec.trap * spec.trap;
  for (int j = 0; j < s; ++j) {
    const auto& uj = u[static_cast<std::size_t>(j)];
    const auto& wj = w[static_cast<std::size_t>(j)];
    h += Eigen::SparseMatrix<double>(-(nu / 4.0) * (wj * wj).eval());
    h += Eigen::SparseMatrix<double>((tr_sq / 2.0) * (uj * uj).eval());
    const auto& un = u[static_cast<std::size_t>((j + 1) % s)];
    Eigen::SparseMatrix<double> diff = uj - un;
    h += Eigen::SparseMatrix<double>((om_sq / 2.0) * (diff * diff).eval());
  }

  Eigen::MatrixXd hd = Eigen::MatrixXd(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hd);
  if (solver.info() != Eigen::Success) {
    fail(errc::unphysical, "eigendecomposition of the truncated Hamiltonian failed");
  }

  const double beta = 2.0 * config.xi / spec.coupling;
  const double e0 = solver.eigenvalues()(0);
  Eigen::VectorXd weights(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    weights(i) = std::exp(-beta * (solver.eigenvalues()(i) - e0));
  }
  weights /= weights.sum();
  const Eigen::MatrixXd rho =
      solver.eigenvectors() * weights.asDiagonal() * solver.eigenvectors().transpose();

  // truncation adequacy: population of the highest occupation level per site
  std::array<std::int64_t, 4> strides{1, 1, 1, 1};
  {
    std::int64_t stride = 1;
    for (int j = s - 1; j >= 0; --j) {
      strides[static_cast<std::size_t>(j)] = stride;
      stride *= q;
    }
  }
  for (int j = 0; j < s; ++j) {
    double pop = 0.0;
    const std::int64_t stride = strides[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < dim; ++i) {
      const std::int64_t occ = (static_cast<std::int64_t>(i) / stride) % q;
      if (occ == config.cutoff) pop += rho(i, i);
    }
    if (pop > 1e-6) {
      fail(errc::cutoff_insufficient, "highest-level population " + std::to_string(pop) +
                                          " at site " + std::to_string(j) + " exceeds 1e-6");
    }
  }

  const auto trace_with = [&](const Eigen::SparseMatrix<double>& op) {
    double t = 0.0;
    for (int ok = 0; ok < op.outerSize(); ++ok) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(op, ok); it; ++it) {
        t += rho(it.col(), it.row()) * it.value();
      }
    }
    return t;
  };

  // moments for sites 0 and 1 (separation 1); dimensionless covariance units
  const double om = spec.coupling;
  Eigen::SparseMatrix<double> u00 = (u[0] * u[0]).eval();
  Eigen::SparseMatrix<double> u01 = (u[0] * u[1]).eval();
  Eigen::SparseMatrix<double> w00 = (w[0] * w[0]).eval();
  Eigen::SparseMatrix<double> w01 = (w[0] * w[1]).eval();

  TwoSiteCovariance cov;
  cov.a = 2.0 * om * trace_with(u00);
  cov.e = 2.0 * om * trace_with(u01);
  cov.b = -(nu / om) * trace_with(w00);  // 2 <p p> / omega, p^2 = -(nu/2) m^2
  cov.f = -(nu / om) * trace_with(w01);
  cov.separation = {1, 0, 0};
  cov.dimension = 1;
  cov.temp_scaled = 1.0 / config.xi;
  return cov;
}

/// Minimum eigenvalue of the Hermitian physicality matrix Gamma + i Sigma
/// (Sigma = sigma + sigma, hbar = 1). Physical states give values >= 0 up to
/// solver noise.
inline double min_physicality_eigenvalue(const CovMatrix& gamma) {
  Eigen::Matrix4cd m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      m(i, j) = std::complex<double>(gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 0.0);
    }
  }
  const std::complex<double> im(0.0, 1.0);
  m(0, 1) += im;
  m(1, 0) -= im;
  m(2, 3) += im;
  m(3, 2) -= im;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m);
  return solver.eigenvalues().minCoeff();
}

/// Logarithmic negativity from the symplectic eigenvalues of the partially
/// transposed covariance matrix: E_N = sum_j max(0, -ln nu_j) where the nu_j
/// are the positive moduli of the eigenvalues of i Sigma Gamma^{T_P}.
/// Independent route from the separability-function formula.
inline double symplectic_negativity(const CovMatrix& gamma) {
  if (min_physicality_eigenvalue(gamma) < -1e-8) {
    fail(errc::unphysical, "covariance matrix violates Gamma + i Sigma >= 0");
  }

  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      g(i, j) = gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  // partial transpose of the second mode: p_P -> -p_P
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  t(3, 3) = -1.0;
  const Eigen::Matrix4d gt = t * g * t;

  Eigen::Matrix4d sigma = Eigen::Matrix4d::Zero();
  sigma(0, 1) = 1.0;
  sigma(1, 0) = -1.0;
  sigma(2, 3) = 1.0;
  sigma(3, 2) = -1.0;

  const Eigen::Matrix4d m = sigma * gt;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(m);
  if (solver.info() != Eigen::Success) {
    fail(errc::unphysical, "eigendecomposition of sigma * Gamma^{T_P} failed");
  }
  std::array<double, 4> moduli{};
  for (int i = 0; i < 4; ++i) {
    moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  }
  std::sort(moduli.begin(), moduli.end());
  // eigenvalues come in +-i nu pairs; average each pair
  const double nu1 = 0.5 * (moduli[0] + moduli[1]);
  const double nu2 = 0.5 * (moduli[2] + moduli[3]);

  double en = 0.0;
  for (const double nu : {nu1, nu2}) {
    if (!(nu > 0.0)) fail(errc::unphysical, "vanishing symplectic eigenvalue");
    const double term = -std::log(nu);
    if (term > 0.0) en += term;
  }
  return en;
}

}  // namespace harmlat::oracle
