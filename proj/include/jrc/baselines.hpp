// SPDX-License-Identifier: Apache-2.0
//
// The four comparison schemes: no-interference upper bound, with-interference
// lower bound, SVD nulling (digital, perfect CSI) and beamspace nulling
// (hybrid, perfect CSI), plus the shared evaluation path that also scores the
// proposed selection.
//
// Every method is scored with the same weighted MUI so sweeps compare like
// with like. Transmit covariances are orthonormal-basis projections under a
// common per-mode power 2 w / N (w = rho for comms, 1 - rho for radar),
// Sigma_X = (2 w / N) B_X B_X^H. The shared multiplier keeps the full-space
// upper bound above every restricted scheme, and the interfering side's
// power (and with it the cross interference) vanishes at the rho extremes.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jrc/metrics.hpp"
#include "jrc/numerics.hpp"
#include "jrc/types.hpp"

namespace jrc {

inline constexpr double kMaskEnergyFraction = 0.95;

struct NullingPrecoders {
  CMat sigma_c_root; // orthonormal basis of null(H_R)
  CMat sigma_r_root; // orthonormal basis of null(H_C)
  bool degenerate_c = false; // empty nullspace, comms cannot be nulled
  bool degenerate_r = false;
};

/// Mutually nulling covariance roots: each operation transmits inside the
/// nullspace of the other operation's channel, so cross products vanish.
inline NullingPrecoders svd_nulling_precoders(const CMat& h_c, const CMat& h_r,
                                              double tol = kRankTol) {
  NullingPrecoders out;
  out.sigma_c_root = nullspace_basis(h_r, tol);
  out.sigma_r_root = nullspace_basis(h_c, tol);
  out.degenerate_c = out.sigma_c_root.cols() == 0;
  out.degenerate_r = out.sigma_r_root.cols() == 0;
  return out;
}

/// Smallest sets of beamspace entries of F^H H_C F and F^H H_R F capturing at
/// least energy_fraction of each component's squared Frobenius energy.
inline std::pair<MaskMat, MaskMat> beamspace_masks(const CMat& h_c,
                                                   const CMat& h_r,
                                                   const CMat& f,
                                                   double energy_fraction = kMaskEnergyFraction) {
  if (!(energy_fraction > 0.0 && energy_fraction <= 1.0))
    throw std::invalid_argument("beamspace_masks: energy_fraction must be in (0,1]");
  auto build = [&](const CMat& h) {
    const CMat bs = f.adjoint() * h * f;
    const Eigen::Index n = bs.rows();
    std::vector<std::pair<double, Eigen::Index>> entries;
    entries.reserve(n * n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double e = std::norm(bs(i, j));
        total += e;
        entries.emplace_back(e, i * n + j);
      }
    MaskMat mask = MaskMat::Zero(n, n);
    if (!(total > 0.0)) return mask;
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    double acc = 0.0;
    for (const auto& [e, idx] : entries) {
      if (acc >= energy_fraction * total) break;
      mask(idx / n, idx % n) = 1;
      acc += e;
    }
    return mask;
  };
  return {build(h_c), build(h_r)};
}

/// 0/1 vector marking columns with at least one selected beamspace entry;
/// the transmit-side beam support of an entry mask.
inline IVec mask_column_support(const MaskMat& mask) {
  IVec d = IVec::Zero(mask.cols());
  for (Eigen::Index j = 0; j < mask.cols(); ++j)
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
      if (mask(i, j) != 0) {
        d(j) = 1;
        break;
      }
  return d;
}

namespace detail {

/// (2 w / n) * B B^H for an orthonormal (or empty) basis B.
inline CMat scaled_projection(const CMat& basis, double weight, Eigen::Index n) {
  if (basis.cols() == 0 || weight <= 0.0) return CMat::Zero(n, n);
  return hermitize((2.0 * weight / static_cast<double>(n)) *
                   (basis * basis.adjoint()));
}

} // namespace detail

/// Weighted MUI of an arbitrary pair of covariance roots under the common
/// power split, with or without cross interference in the denominators.
inline MuiReport evaluate_roots(const ChannelSet& ch, const CMat& basis_c,
                                const CMat& basis_r, const Scenario& sc,
                                bool with_interference) {
  const Eigen::Index n = sc.n_antennas;
  const CMat sigma_c = detail::scaled_projection(basis_c, sc.rho, n);
  const CMat sigma_r = detail::scaled_projection(basis_r, 1.0 - sc.rho, n);
  return mui_weighted(ch.h_c, ch.h_r, sigma_c, sigma_r, sc.noise_power(), sc.rho,
                      with_interference);
}

/// Scores a DFT-beam selection (proposed method or beamspace supports) with
/// the same weighted metric as the covariance baselines.
inline MuiReport evaluate_selection(const ChannelSet& ch, const Selection& sel,
                                    const Scenario& sc) {
  const CMat f_unitary = dft_codebook_unitary(sc.n_antennas);
  auto basis_from = [&](const IVec& d) {
    CMat cols(sc.n_antennas, d.sum());
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (d(i) != 0) cols.col(c++) = f_unitary.col(i);
    return cols;
  };
  return evaluate_roots(ch, basis_from(sel.d_c), basis_from(sel.d_r), sc, true);
}

/// Evaluates one baseline on one channel realization.
inline MuiReport evaluate_baseline(BaselineKind kind, const ChannelSet& ch,
                                   const Scenario& sc) {
  const Eigen::Index n = sc.n_antennas;
  const CMat full = CMat::Identity(n, n);
  switch (kind) {
    case BaselineKind::no_interference:
      return evaluate_roots(ch, full, full, sc, false);
    case BaselineKind::with_interference:
      return evaluate_roots(ch, full, full, sc, true);
    case BaselineKind::svd_nulling: {
      const NullingPrecoders np = svd_nulling_precoders(ch.h_c, ch.h_r);
      MuiReport rep = evaluate_roots(ch, np.sigma_c_root, np.sigma_r_root, sc, true);
      rep.degenerate = np.degenerate_c || np.degenerate_r;
      return rep;
    }
    case BaselineKind::beamspace_nulling: {
      const CMat f = dft_matrix(n);
      const auto [omega_c, omega_r] = beamspace_masks(ch.h_c, ch.h_r, f);
      Selection sel;
      sel.d_c = mask_column_support(omega_c);
      sel.d_r = mask_column_support(omega_r);
      return evaluate_selection(ch, sel, sc);
    }
  }
  throw std::invalid_argument("evaluate_baseline: unknown baseline kind");
}

} // namespace jrc
