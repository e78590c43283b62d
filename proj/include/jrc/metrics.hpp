// SPDX-License-Identifier: Apache-2.0
//
// Mutual-information and interference figures of merit: the separate and
// joint MUI forms, the weighted MUI, the masked-beamspace MUI, covariance
// interference traces, the selection objective with its first-order
// approximation, and the NRP beampattern.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "jrc/channel.hpp"
#include "jrc/numerics.hpp"
#include "jrc/types.hpp"

namespace jrc {

/// MUI with dedicated, non-interfering hardware: the sum of the two
/// capacity log-dets, each against the thermal noise floor alone.
inline MuiReport mui_separate(const CMat& h_c, const CMat& h_r,
                              const CMat& sigma_c, const CMat& sigma_r,
                              double noise_power) {
  MuiReport rep;
  rep.comms_term = logdet_cap(h_c, sigma_c, noise_power);
  rep.radar_term = logdet_cap(h_r, sigma_r, noise_power);
  rep.mui_bits = rep.comms_term + rep.radar_term;
  return rep;
}

/// Joint-operation MUI with cross interference raising each noise floor:
/// the comms denominator gains ||H_R Sigma_C^{1/2}||_F^2 and the radar
/// denominator gains ||H_C Sigma_R^{1/2}||_F^2. Never exceeds mui_separate.
inline MuiReport mui_joint(const CMat& h_c, const CMat& h_r,
                           const CMat& sigma_c, const CMat& sigma_r,
                           double noise_power) {
  const CMat root_c = psd_sqrt(sigma_c);
  const CMat root_r = psd_sqrt(sigma_r);
  MuiReport rep;
  rep.sigma_r_sq = (h_r * root_c).squaredNorm();
  rep.sigma_c_sq = (h_c * root_r).squaredNorm();
  rep.comms_term = logdet_cap(h_c, sigma_c, noise_power + rep.sigma_r_sq);
  rep.radar_term = logdet_cap(h_r, sigma_r, noise_power + rep.sigma_c_sq);
  rep.mui_bits = rep.comms_term + rep.radar_term;
  return rep;
}

/// Weighted MUI: 2 rho * comms log-det + 2 (1-rho) * radar log-det.
/// With with_interference set, the denominators carry the cross-transmission
/// powers: the comms denominator gains ||H_C Sigma_R^{1/2}||^2 (the radar
/// transmission arriving through the comms channel) and the radar denominator
/// gains ||H_R Sigma_C^{1/2}||^2, so interference vanishes together with the
/// interfering side's allocated power.
inline MuiReport mui_weighted(const CMat& h_c, const CMat& h_r,
                              const CMat& sigma_c, const CMat& sigma_r,
                              double noise_power, double rho,
                              bool with_interference) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("mui_weighted: rho must be in [0,1]");
  MuiReport rep;
  if (with_interference) {
    rep.sigma_r_sq = (h_c * psd_sqrt(sigma_r)).squaredNorm();
    rep.sigma_c_sq = (h_r * psd_sqrt(sigma_c)).squaredNorm();
  }
  rep.comms_term =
      2.0 * rho * logdet_cap(h_c, sigma_c, noise_power + rep.sigma_r_sq);
  rep.radar_term =
      2.0 * (1.0 - rho) * logdet_cap(h_r, sigma_r, noise_power + rep.sigma_c_sq);
  rep.mui_bits = rep.comms_term + rep.radar_term;
  return rep;
}

/// Masked-beamspace MUI, a single log2 of one plus both masked-energy ratios,
/// exactly as the beamspace expression is written. Component channels supply
/// the cross-interference energies; without them the interference inside a
/// mask is taken as the total-channel energy on entries the two masks share
/// (the contested beams), which is zero for disjoint masks.
inline MuiReport mui_beamspace(const CMat& h, const MaskMat& omega_c,
                               const MaskMat& omega_r, const CMat& f,
                               double noise_power,
                               const CMat* h_c = nullptr,
                               const CMat* h_r = nullptr) {
  if (omega_c.rows() != h.rows() || omega_c.cols() != h.cols() ||
      omega_r.rows() != h.rows() || omega_r.cols() != h.cols() ||
      f.rows() != h.rows() || f.cols() != h.cols())
    throw std::invalid_argument("mui_beamspace: dimension mismatch");
  auto masked_energy = [](const CMat& bs, const MaskMat& m) {
    double e = 0.0;
    for (Eigen::Index j = 0; j < bs.cols(); ++j)
      for (Eigen::Index i = 0; i < bs.rows(); ++i)
        if (m(i, j) != 0) e += std::norm(bs(i, j));
    return e;
  };
  const CMat bs_total = f.adjoint() * h * f;
  const double sig_c = masked_energy(bs_total, omega_c);
  const double sig_r = masked_energy(bs_total, omega_r);
  double int_c = 0.0; // energy polluting the comms mask
  double int_r = 0.0;
  if (h_c != nullptr && h_r != nullptr) {
    int_c = masked_energy(f.adjoint() * (*h_r) * f, omega_c);
    int_r = masked_energy(f.adjoint() * (*h_c) * f, omega_r);
  } else {
    const MaskMat overlap = (omega_c.array() * omega_r.array()).matrix();
    int_c = masked_energy(bs_total, overlap);
    int_r = int_c;
  }
  MuiReport rep;
  rep.sigma_r_sq = int_c;
  rep.sigma_c_sq = int_r;
  const double ratio_c = sig_c / (noise_power + int_c);
  const double ratio_r = sig_r / (noise_power + int_r);
  rep.mui_bits = std::log2(1.0 + ratio_c + ratio_r);
  // split the single log so the report still satisfies mui = comms + radar
  rep.comms_term = std::log2(1.0 + ratio_c);
  rep.radar_term = rep.mui_bits - rep.comms_term;
  return rep;
}

/// tr(R F diag(d) F^H): the expected interference power a selection d causes
/// through a channel with covariance R when beamformed by F.
inline double interference_covariance(const CMat& r, const CMat& f_rf,
                                      const IVec& d) {
  if (f_rf.rows() != r.rows() || d.size() != f_rf.cols())
    throw std::invalid_argument("interference_covariance: dimension mismatch");
  const CMat g = f_rf.adjoint() * r * f_rf;
  double val = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) != 0) val += g(i, i).real();
  const double tr = r.diagonal().real().sum();
  if (val < -1e-9 * std::max(tr, 1.0))
    throw std::runtime_error("interference_covariance: negative trace value");
  return std::max(val, 0.0);
}

/// The two ratios of the selection objective, instantaneous form:
///   ratio_c = ||diag(d_c) F^H H||^2 / (noise + ||diag(d_c) F^H H_R||^2)
///   ratio_r = ||diag(d_r) F^H H||^2 / (noise + ||diag(d_r) F^H H_C||^2).
struct SelectionRatios {
  double signal_c = 0.0;
  double interf_c = 0.0;
  double signal_r = 0.0;
  double interf_r = 0.0;
  double ratio_c(double noise) const { return signal_c / (noise + interf_c); }
  double ratio_r(double noise) const { return signal_r / (noise + interf_r); }
};

inline SelectionRatios selection_ratios(const ChannelSet& ch, const CMat& f,
                                        const IVec& d_c, const IVec& d_r) {
  const CMat bs_total = f.adjoint() * ch.h;
  const CMat bs_c = f.adjoint() * ch.h_c;
  const CMat bs_r = f.adjoint() * ch.h_r;
  SelectionRatios out;
  for (Eigen::Index i = 0; i < f.cols(); ++i) {
    const double s = bs_total.row(i).squaredNorm();
    if (d_c(i) != 0) {
      out.signal_c += s;
      out.interf_c += bs_r.row(i).squaredNorm();
    }
    if (d_r(i) != 0) {
      out.signal_r += s;
      out.interf_r += bs_c.row(i).squaredNorm();
    }
  }
  return out;
}

/// Exact selection objective log2(1 + ratio_c + ratio_r).
inline double selection_mui_exact(const ChannelSet& ch, const CMat& f,
                                  const IVec& d_c, const IVec& d_r,
                                  double noise_power) {
  const SelectionRatios r = selection_ratios(ch, f, d_c, d_r);
  return std::log2(1.0 + r.ratio_c(noise_power) + r.ratio_r(noise_power));
}

/// First-order approximation of the same objective, log2(1+x) ~ x/ln 2.
inline double selection_mui_taylor(const ChannelSet& ch, const CMat& f,
                                   const IVec& d_c, const IVec& d_r,
                                   double noise_power) {
  const SelectionRatios r = selection_ratios(ch, f, d_c, d_r);
  return (r.ratio_c(noise_power) + r.ratio_r(noise_power)) / std::numbers::ln2;
}

/// Normalized received power over an angle grid, probing with receive
/// steering vectors: p(theta) = ||a(theta)^H H_R F_R||^2, normalized to a
/// unit maximum. An all-zero pattern is left at zero and flagged.
inline Beampattern nrp_beampattern(const CMat& h_r, const CMat& f_r,
                                   const std::vector<double>& grid_deg,
                                   Eigen::Index n, double spacing) {
  if (grid_deg.empty())
    throw std::invalid_argument("nrp_beampattern: empty angle grid");
  Beampattern bp;
  bp.angles_deg = grid_deg;
  bp.nrp.resize(grid_deg.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < grid_deg.size(); ++i) {
    const CVec a = steering_vector(grid_deg[i], n, spacing);
    bp.nrp[i] = (a.adjoint() * h_r * f_r).squaredNorm();
    peak = std::max(peak, bp.nrp[i]);
  }
  bp.all_zero = !(peak > 0.0);
  bp.nrp_db.resize(grid_deg.size());
  for (std::size_t i = 0; i < grid_deg.size(); ++i) {
    if (!bp.all_zero) bp.nrp[i] /= peak;
    // floor pattern nulls at -300 dB to keep emitted values finite
    bp.nrp_db[i] = 10.0 * std::log10(std::max(bp.nrp[i], 1e-30));
  }
  return bp;
}

/// Indices of strict local maxima of the (already normalized) pattern,
/// sorted by descending peak value.
inline std::vector<std::size_t> local_maxima(const Beampattern& bp) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < bp.nrp.size(); ++i)
    if (bp.nrp[i] > bp.nrp[i - 1] && bp.nrp[i] > bp.nrp[i + 1]) peaks.push_back(i);
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
    return bp.nrp[a] > bp.nrp[b];
  });
  return peaks;
}

} // namespace jrc
