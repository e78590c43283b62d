// SPDX-License-Identifier: Apache-2.0
//
// JRC scenario construction: user/target angle placement, ULA steering
// vectors, clustered-multipath channel synthesis and the comms/radar split
// H = H_C + H_R, plus the analytic second-order statistics of those channels.

#pragma once

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "jrc/numerics.hpp"
#include "jrc/rng.hpp"
#include "jrc/types.hpp"

namespace jrc {

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// ULA steering vector (1/sqrt(n)) [1, e^{j 2 pi (d/lambda) sin phi}, ...],
/// unit Euclidean norm.
inline CVec steering_vector(double angle_deg, Eigen::Index n,
                            double spacing_over_wavelength) {
  if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
  const double phase =
      2.0 * std::numbers::pi * spacing_over_wavelength * std::sin(deg2rad(angle_deg));
  CVec a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index k = 0; k < n; ++k) a(k) = std::polar(scale, phase * k);
  return a;
}

/// Places K users and T targets on an equispaced grid over the angle range,
/// alternating user/target slots (users on odd 1-based positions). When one
/// population runs out the remaining slots go to the other. Deterministic.
inline AngleSet place_angles(const Scenario& sc) {
  const int k = sc.n_users;
  const int t = sc.n_targets;
  if (k < 0 || t < 0 || k + t < 1)
    throw std::invalid_argument("place_angles: need at least one user or target");
  if (!(sc.angle_hi_deg > sc.angle_lo_deg))
    throw std::invalid_argument("place_angles: degenerate angle range");
  if (k + t > sc.n_antennas)
    std::cerr << "warning: " << (k + t) << " users+targets exceed " << sc.n_antennas
              << " antennas; beamspace resolution insufficient\n";
  AngleSet out;
  const int total = k + t;
  const double step = (sc.angle_hi_deg - sc.angle_lo_deg) / (total + 1);
  int users_left = k;
  int targets_left = t;
  for (int i = 0; i < total; ++i) {
    const double angle = sc.angle_lo_deg + (i + 1) * step;
    const bool prefer_user = (i % 2 == 0);
    const bool as_user =
        (prefer_user && users_left > 0) || targets_left == 0;
    if (as_user) {
      out.comms_angles_deg.push_back(angle);
      --users_left;
    } else {
      out.radar_angles_deg.push_back(angle);
      --targets_left;
    }
  }
  return out;
}

/// Clustered-multipath channel (n/sqrt(Nc)) sum_l g_l a(phi_l) a(phi_l)^H.
/// Departure and arrival angles coincide per path (monostatic geometry).
inline CMat synthesize_channel(const std::vector<double>& angles_deg,
                               const std::vector<cplx>& gains, Eigen::Index n,
                               double spacing) {
  if (angles_deg.size() != gains.size())
    throw std::invalid_argument("synthesize_channel: angles/gains length mismatch");
  if (angles_deg.empty())
    throw std::invalid_argument("synthesize_channel: need at least one path");
  CMat h = CMat::Zero(n, n);
  for (std::size_t l = 0; l < angles_deg.size(); ++l) {
    const CVec a = steering_vector(angles_deg[l], n, spacing);
    h.noalias() += gains[l] * (a * a.adjoint());
  }
  h *= static_cast<double>(n) / std::sqrt(static_cast<double>(angles_deg.size()));
  return h;
}

/// Draws one channel realization with i.i.d. CN(0,1) path gains, comms gains
/// consumed from the stream before radar gains. An empty angle list yields a
/// zero component.
inline ChannelSet draw_channel_set(const Scenario& sc, const AngleSet& angles,
                                   Rng& rng) {
  const Eigen::Index n = sc.n_antennas;
  auto draw_part = [&](const std::vector<double>& part_angles) -> CMat {
    if (part_angles.empty()) return CMat::Zero(n, n);
    std::vector<cplx> gains(part_angles.size());
    for (auto& g : gains) g = rng.cgaussian();
    return synthesize_channel(part_angles, gains, n, sc.spacing);
  };
  ChannelSet out;
  out.h_c = draw_part(angles.comms_angles_deg);
  out.h_r = draw_part(angles.radar_angles_deg);
  out.h = out.h_c + out.h_r;
  return out;
}

/// Closed-form E{H^H H} = (n^2/Nc) sum_l a(phi_l) a(phi_l)^H for CN(0,1)
/// i.i.d. path gains. Empty angle list yields the zero matrix.
inline CMat analytic_covariance(const std::vector<double>& angles_deg,
                                Eigen::Index n, double spacing) {
  CMat r = CMat::Zero(n, n);
  if (angles_deg.empty()) return r;
  for (const double ang : angles_deg) {
    const CVec a = steering_vector(ang, n, spacing);
    r.noalias() += a * a.adjoint();
  }
  r *= static_cast<double>(n * n) / static_cast<double>(angles_deg.size());
  return hermitize(r);
}

/// Analytic covariances of both components and their sum. The comms/radar
/// gains are independent and zero mean, so R = R_C + R_R.
inline CovarianceSet analytic_covariances(const Scenario& sc,
                                          const AngleSet& angles) {
  CovarianceSet out;
  out.r_c = analytic_covariance(angles.comms_angles_deg, sc.n_antennas, sc.spacing);
  out.r_r = analytic_covariance(angles.radar_angles_deg, sc.n_antennas, sc.spacing);
  out.r = hermitize(out.r_c + out.r_r);
  return out;
}

} // namespace jrc
