// SPDX-License-Identifier: Apache-2.0
//
// jrc — covariance-based hybrid beamforming for joint radar-communications.
// Shared domain types used across the library.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace jrc {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using IVec = Eigen::VectorXi;
using MaskMat = Eigen::MatrixXi; // 0/1 entries

/// Full experiment configuration for one scenario point.
struct Scenario {
  int n_antennas = 32;       // N, transmit/receive array size
  int n_users = 3;           // K
  int n_targets = 3;         // T
  double rho = 0.5;          // weighting factor in [0,1]; 1 = comms priority
  double snr_db = 10.0;      // SNR = 1/sigma_n^2
  double spacing = 0.5;      // antenna spacing over wavelength (d/lambda)
  double angle_lo_deg = -60.0;
  double angle_hi_deg = 60.0;
  std::uint64_t seed = 1;
  int trials = 500;

  double noise_power() const { return std::pow(10.0, -snr_db / 10.0); }
};

/// User and target angle placement, degrees.
struct AngleSet {
  std::vector<double> comms_angles_deg;
  std::vector<double> radar_angles_deg;
};

/// One multipath channel realization, split into its comms and radar parts.
/// Invariant: h = h_c + h_r as stored.
struct ChannelSet {
  CMat h_c;
  CMat h_r;
  CMat h;
};

/// Second-order statistics of the channel components.
struct CovarianceSet {
  CMat r;   // E{H^H H}
  CMat r_c; // E{H_C^H H_C}
  CMat r_r; // E{H_R^H H_R}
};

/// Mutual-information figures for one evaluation.
/// mui_bits = comms_term + radar_term; interference powers are the
/// denominator add-ons actually used (0 when interference is ignored).
struct MuiReport {
  double mui_bits = 0.0;
  double comms_term = 0.0;
  double radar_term = 0.0;
  double sigma_r_sq = 0.0; // radar -> comms interference power
  double sigma_c_sq = 0.0; // comms -> radar interference power
  bool degenerate = false; // set when a nulling precoder came back empty
};

/// Normalized received power over an angle grid.
struct Beampattern {
  std::vector<double> angles_deg;
  std::vector<double> nrp;    // linear, max = 1 unless all_zero
  std::vector<double> nrp_db; // 10*log10(nrp)
  bool all_zero = false;
};

/// Binary RF-chain selections over the DFT codebook plus the relaxed
/// box-constraint solutions they were thresholded from.
struct Selection {
  IVec d_c; // 0/1, length N
  IVec d_r;
  RVec relaxed_c;
  RVec relaxed_r;
  bool shortfall_c = false; // fewer positive-score candidates than cardinality
  bool shortfall_r = false;
};

/// Dinkelbach iteration bookkeeping. objective_trace holds the achieved
/// fractional objective (sum of the two ratios) after each accepted iteration.
struct DinkelbachState {
  double kappa_c = 1.0;
  double kappa_r = 1.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
  // terminal numerator/denominator pairs, evaluated at the returned selection
  double c_c = 0.0;
  double eta_c = 0.0;
  double c_r = 0.0;
  double eta_r = 0.0;
};

enum class BaselineKind {
  no_interference,
  with_interference,
  svd_nulling,
  beamspace_nulling,
};

/// Method tags understood by the sweep harness.
enum class Method {
  proposed,
  no_interference,
  with_interference,
  svd_nulling,
  beamspace_nulling,
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::proposed: return "proposed";
    case Method::no_interference: return "no_interference";
    case Method::with_interference: return "with_interference";
    case Method::svd_nulling: return "svd_nulling";
    case Method::beamspace_nulling: return "beamspace_nulling";
  }
  return "?";
}

enum class SweepAxis { snr_db, n_antennas, rho };

inline const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::snr_db: return "snr_db";
    case SweepAxis::n_antennas: return "n_antennas";
    case SweepAxis::rho: return "rho";
  }
  return "?";
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::snr_db;
  std::vector<double> values;
  std::vector<Method> methods;
  Scenario scenario;
  int trials = 500;
  std::string output_path;
};

struct SweepRow {
  std::string method;
  double axis_value = 0.0;
  double mean_mui = 0.0;
  double std_mui = 0.0;
  double mean_sigma_r_sq = 0.0;
  double mean_sigma_c_sq = 0.0;
  int trials = 0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
};

} // namespace jrc
