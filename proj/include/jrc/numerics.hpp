// SPDX-License-Identifier: Apache-2.0
//
// Complex-matrix primitives: DFT codebooks, nullspace extraction, capacity
// log-determinants and covariance estimation. Everything here is pure and
// deterministic; all other modules build on these.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "jrc/types.hpp"

namespace jrc {

/// PSD eigenvalue tolerance, relative to the largest eigenvalue.
inline constexpr double kPsdTol = 1e-9;

/// Default rank tolerance for nullspace extraction: singular values below
/// tol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-8;

/// Forces exact conjugate symmetry on a square matrix.
inline CMat hermitize(const CMat& a) {
  return 0.5 * (a + a.adjoint());
}

/// Unnormalized DFT codebook, entry (m,k) = exp(-j 2 pi m k / n).
/// Columns have squared norm n; F F^H = n I.
inline CMat dft_matrix(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("dft_matrix: n must be >= 1");
  CMat f(n, n);
  const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      // reduce m*k mod n before multiplying to keep the phase argument small
      const auto mk = static_cast<double>((m * k) % n);
      f(m, k) = std::polar(1.0, w * mk);
    }
  }
  return f;
}

/// Unitary DFT codebook (columns unit norm). This is the constant-modulus
/// analog beamformer F_RF used when selections are turned into precoders.
inline CMat dft_codebook_unitary(Eigen::Index n) {
  return dft_matrix(n) / std::sqrt(static_cast<double>(n));
}

/// Orthonormal basis of the (right) nullspace {x : a x ~ 0}. Singular values
/// below tol * sigma_max are treated as zero. A full-column-rank input yields
/// a matrix with zero columns.
inline CMat nullspace_basis(const CMat& a, double tol = kRankTol) {
  if (a.size() == 0) throw std::invalid_argument("nullspace_basis: empty matrix");
  if (!(tol > 0.0)) throw std::invalid_argument("nullspace_basis: tol must be > 0");
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * smax) ++rank;
  }
  return svd.matrixV().rightCols(a.cols() - rank);
}

/// log2 det(I + (1/noise_power) h sigma h^H), computed from the eigenvalues
/// of the Hermitian product so large SNR does not overflow a determinant.
/// sigma must be PSD up to kPsdTol relative to its largest eigenvalue.
inline double logdet_cap(const CMat& h, const CMat& sigma, double noise_power) {
  if (!(noise_power > 0.0))
    throw std::invalid_argument("logdet_cap: noise_power must be > 0");
  if (h.cols() != sigma.rows() || sigma.rows() != sigma.cols())
    throw std::invalid_argument("logdet_cap: dimension mismatch");
  {
    Eigen::SelfAdjointEigenSolver<CMat> chk(sigma, Eigen::EigenvaluesOnly);
    const double lmax = chk.eigenvalues().size() ? chk.eigenvalues().maxCoeff() : 0.0;
    const double lmin = chk.eigenvalues().size() ? chk.eigenvalues().minCoeff() : 0.0;
    if (lmin < -kPsdTol * std::max(lmax, 1e-300))
      throw std::domain_error("logdet_cap: sigma is not PSD");
  }
  const CMat x = hermitize(h * sigma * h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(x, Eigen::EigenvaluesOnly);
  double out = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = std::max(es.eigenvalues()(i), 0.0);
    out += std::log2(1.0 + lam / noise_power);
  }
  return out;
}

enum class ChannelPart { comms, radar, total };

/// Sample covariance (1/M) sum_m H_m^H H_m of the selected channel part.
inline CMat sample_covariance(const std::vector<ChannelSet>& draws,
                              ChannelPart which) {
  if (draws.empty())
    throw std::invalid_argument("sample_covariance: no draws");
  const Eigen::Index n = draws.front().h.rows();
  CMat acc = CMat::Zero(n, n);
  for (const auto& d : draws) {
    const CMat& m = which == ChannelPart::comms  ? d.h_c
                    : which == ChannelPart::radar ? d.h_r
                                                  : d.h;
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("sample_covariance: inconsistent dimensions");
    acc.noalias() += m.adjoint() * m;
  }
  return hermitize(acc / static_cast<double>(draws.size()));
}

/// PSD principal square root, clamping slightly negative eigenvalues to zero.
inline CMat psd_sqrt(const CMat& sigma) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(sigma));
  RVec lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

} // namespace jrc
