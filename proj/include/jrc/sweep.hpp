// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo sweep engine and result emission. Trials are embarrassingly
// parallel: every trial owns an RNG stream derived from (seed, trial index)
// and shared across axis values (common random numbers), results land in
// preallocated slots and the reduction runs single-threaded in a fixed order,
// so output bytes depend only on the spec and seed, never on the worker count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "jrc/baselines.hpp"
#include "jrc/channel.hpp"
#include "jrc/config.hpp"
#include "jrc/rfselect.hpp"
#include "jrc/types.hpp"

namespace jrc {

namespace detail {

inline Scenario scenario_at(const Scenario& base, SweepAxis axis, double value) {
  Scenario sc = base;
  switch (axis) {
    case SweepAxis::snr_db: sc.snr_db = value; break;
    case SweepAxis::n_antennas: sc.n_antennas = static_cast<int>(value); break;
    case SweepAxis::rho: sc.rho = value; break;
  }
  return sc;
}

inline void run_parallel(int jobs, int count, const std::function<void(int)>& work) {
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < count && !failed.load();
             i = next.fetch_add(1))
          work(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail

/// Runs the configured sweep. Identical (spec, seed) produce identical
/// results for any jobs count.
inline SweepResult run_sweep(const SweepSpec& spec, int jobs = 1) {
  if (spec.values.empty()) throw ConfigError("run_sweep: no axis values");
  if (spec.methods.empty()) throw ConfigError("run_sweep: no methods");
  if (spec.trials < 1) throw ConfigError("run_sweep: trials must be >= 1");

  const int n_methods = static_cast<int>(spec.methods.size());
  const int n_values = static_cast<int>(spec.values.size());
  SweepResult result;
  result.axis = axis_name(spec.axis);

  // per (value, trial, method) storage, filled by workers
  std::vector<MuiReport> cells(
      static_cast<std::size_t>(n_values) * spec.trials * n_methods);

  const bool wants_proposed =
      std::find(spec.methods.begin(), spec.methods.end(), Method::proposed) !=
      spec.methods.end();

  for (int vi = 0; vi < n_values; ++vi) {
    const Scenario sc = detail::scenario_at(spec.scenario, spec.axis, spec.values[vi]);
    const AngleSet angles = place_angles(sc);
    Selection proposed_sel;
    if (wants_proposed) {
      // second-order statistics only: one selection per sweep point
      const CovarianceSet covs = analytic_covariances(sc, angles);
      proposed_sel = dinkelbach_select(covs, sc).first;
    }
    detail::run_parallel(jobs, spec.trials, [&](int trial) {
      // common random numbers: trial t shares its gain stream across axis
      // values, so per-point differences are paired comparisons
      Rng rng(derive_stream(sc.seed, static_cast<std::uint64_t>(trial)));
      const ChannelSet ch = draw_channel_set(sc, angles, rng);
      for (int mi = 0; mi < n_methods; ++mi) {
        MuiReport rep;
        switch (spec.methods[mi]) {
          case Method::proposed:
            rep = evaluate_selection(ch, proposed_sel, sc);
            break;
          case Method::no_interference:
            rep = evaluate_baseline(BaselineKind::no_interference, ch, sc);
            break;
          case Method::with_interference:
            rep = evaluate_baseline(BaselineKind::with_interference, ch, sc);
            break;
          case Method::svd_nulling:
            rep = evaluate_baseline(BaselineKind::svd_nulling, ch, sc);
            break;
          case Method::beamspace_nulling:
            rep = evaluate_baseline(BaselineKind::beamspace_nulling, ch, sc);
            break;
        }
        cells[(static_cast<std::size_t>(vi) * spec.trials + trial) * n_methods + mi] =
            rep;
      }
    });
  }

  // fixed-order reduction: method major, axis value minor
  for (int mi = 0; mi < n_methods; ++mi) {
    for (int vi = 0; vi < n_values; ++vi) {
      double sum = 0.0, sum_sq = 0.0, sum_sr = 0.0, sum_sc = 0.0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        const MuiReport& rep =
            cells[(static_cast<std::size_t>(vi) * spec.trials + trial) * n_methods + mi];
        sum += rep.mui_bits;
        sum_sq += rep.mui_bits * rep.mui_bits;
        sum_sr += rep.sigma_r_sq;
        sum_sc += rep.sigma_c_sq;
      }
      const double m = static_cast<double>(spec.trials);
      SweepRow row;
      row.method = method_name(spec.methods[mi]);
      row.axis_value = spec.values[vi];
      row.mean_mui = sum / m;
      row.std_mui = std::sqrt(std::max(0.0, sum_sq / m - row.mean_mui * row.mean_mui));
      row.mean_sigma_r_sq = sum_sr / m;
      row.mean_sigma_c_sq = sum_sc / m;
      row.trials = spec.trials;
      result.rows.push_back(row);
    }
  }
  return result;
}

/// Radar precoder of a method for beampattern probing: the analog codebook
/// columns the method assigns to the radar operation (full codebook for the
/// unselective baselines, nullspace basis for SVD nulling).
inline CMat radar_precoder(Method method, const ChannelSet& ch, const Scenario& sc,
                           const AngleSet& angles) {
  const CMat f_unitary = dft_codebook_unitary(sc.n_antennas);
  auto columns_of = [&](const IVec& d) {
    CMat cols(sc.n_antennas, d.sum());
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (d(i) != 0) cols.col(c++) = f_unitary.col(i);
    return cols;
  };
  switch (method) {
    case Method::proposed: {
      const CovarianceSet covs = analytic_covariances(sc, angles);
      const Selection sel = dinkelbach_select(covs, sc).first;
      return columns_of(sel.d_r);
    }
    case Method::beamspace_nulling: {
      const auto [omega_c, omega_r] =
          beamspace_masks(ch.h_c, ch.h_r, dft_matrix(sc.n_antennas));
      return columns_of(mask_column_support(omega_r));
    }
    case Method::svd_nulling:
      return svd_nulling_precoders(ch.h_c, ch.h_r).sigma_r_root;
    case Method::no_interference:
    case Method::with_interference:
      return f_unitary;
  }
  throw ConfigError("radar_precoder: unknown method");
}

/// Builds the deterministic beampattern experiment: radar channel with unit
/// path gains at the given target angles, user placement from the scenario,
/// the method's radar precoder, then the NRP over a uniform angle grid.
inline Beampattern run_beampattern(const Scenario& base,
                                   const std::vector<double>& target_angles_deg,
                                   Method method, double grid_step_deg = 0.5) {
  if (target_angles_deg.empty())
    throw ConfigError("beampattern: target_angles is empty");
  if (!(grid_step_deg > 0.0 && grid_step_deg <= 1.0))
    throw ConfigError("beampattern: grid_step_deg must be in (0,1]");

  Scenario sc = base;
  sc.n_targets = static_cast<int>(target_angles_deg.size());
  AngleSet angles;
  if (sc.n_users > 0)
    angles.comms_angles_deg = place_angles(sc).comms_angles_deg;
  angles.radar_angles_deg = target_angles_deg;

  // deterministic probe channels: unit gains, no fading
  const std::vector<cplx> radar_gains(target_angles_deg.size(), cplx(1.0, 0.0));
  ChannelSet ch;
  ch.h_r = synthesize_channel(target_angles_deg, radar_gains, sc.n_antennas, sc.spacing);
  if (!angles.comms_angles_deg.empty()) {
    const std::vector<cplx> comms_gains(angles.comms_angles_deg.size(), cplx(1.0, 0.0));
    ch.h_c = synthesize_channel(angles.comms_angles_deg, comms_gains, sc.n_antennas,
                                sc.spacing);
  } else {
    ch.h_c = CMat::Zero(sc.n_antennas, sc.n_antennas);
  }
  ch.h = ch.h_c + ch.h_r;

  const CMat f_r = radar_precoder(method, ch, sc, angles);
  std::vector<double> grid;
  for (double a = -90.0; a <= 90.0 + 1e-9; a += grid_step_deg) grid.push_back(a);
  return nrp_beampattern(ch.h_r, f_r, grid, sc.n_antennas, sc.spacing);
}

namespace detail {

inline std::string fmt9(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

inline void write_or_throw(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

} // namespace detail

enum class EmitFormat { csv, json };

inline std::string render_sweep(const SweepResult& result, EmitFormat format) {
  if (format == EmitFormat::csv) {
    std::string body =
        "method," + result.axis + ",mean_mui,std_mui,mean_sigma_r_sq,mean_sigma_c_sq,trials\n";
    for (const auto& r : result.rows) {
      body += r.method + "," + detail::fmt9(r.axis_value) + "," +
              detail::fmt9(r.mean_mui) + "," + detail::fmt9(r.std_mui) + "," +
              detail::fmt9(r.mean_sigma_r_sq) + "," + detail::fmt9(r.mean_sigma_c_sq) +
              "," + std::to_string(r.trials) + "\n";
    }
    return body;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : result.rows) {
    arr.push_back({{"method", r.method},
                   {result.axis, r.axis_value},
                   {"mean_mui", r.mean_mui},
                   {"std_mui", r.std_mui},
                   {"mean_sigma_r_sq", r.mean_sigma_r_sq},
                   {"mean_sigma_c_sq", r.mean_sigma_c_sq},
                   {"trials", r.trials}});
  }
  return arr.dump(2) + "\n";
}

inline std::string render_beampattern(const Beampattern& bp, EmitFormat format) {
  if (format == EmitFormat::csv) {
    std::string body = "angle_deg,nrp,nrp_db\n";
    for (std::size_t i = 0; i < bp.angles_deg.size(); ++i)
      body += detail::fmt9(bp.angles_deg[i]) + "," + detail::fmt9(bp.nrp[i]) + "," +
              detail::fmt9(bp.nrp_db[i]) + "\n";
    return body;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < bp.angles_deg.size(); ++i)
    arr.push_back({{"angle_deg", bp.angles_deg[i]},
                   {"nrp", bp.nrp[i]},
                   {"nrp_db", bp.nrp_db[i]}});
  return arr.dump(2) + "\n";
}

inline void emit_results(const SweepResult& result, const std::string& path,
                         EmitFormat format) {
  detail::write_or_throw(path, render_sweep(result, format));
}

inline void emit_results(const Beampattern& bp, const std::string& path,
                         EmitFormat format) {
  detail::write_or_throw(path, render_beampattern(bp, format));
}

} // namespace jrc
