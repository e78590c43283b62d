// SPDX-License-Identifier: Apache-2.0
//
// RF-chain selection over the DFT codebook via Dinkelbach fractional
// programming, plus an exhaustive-search oracle for small arrays.
//
// The fractional objective is separable across codebook indices: with
// per-index signal scores s_n and interference scores g_n, each ratio is
// (sum_{n in S} s_n) / (noise + sum_{n in S} g_n). The Dinkelbach parametric
// subproblem max sum d_n^2 (s_n - kappa g_n) over the box [0,1]^N therefore
// has the closed-form solution d_n = 1{s_n - kappa g_n > 0}, and the
// cardinality threshold reduces to a top-k on the net scores.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "jrc/metrics.hpp"
#include "jrc/numerics.hpp"
#include "jrc/types.hpp"

namespace jrc {

/// Per-index scores s_n = ||row_n(F^H h)||^2, so that
/// ||diag(d) F^H h||_F^2 = sum_n d_n^2 s_n.
inline RVec beam_scores(const CMat& f, const CMat& h) {
  if (f.rows() != h.rows())
    throw std::invalid_argument("beam_scores: dimension mismatch");
  const CMat bs = f.adjoint() * h;
  RVec s(f.cols());
  for (Eigen::Index i = 0; i < f.cols(); ++i) s(i) = bs.row(i).squaredNorm();
  return s;
}

/// Covariance form of the same scores: s_n = [F^H R F]_{nn}, equal to the
/// expectation of the instantaneous scores when R = E{H H^H}.
inline RVec beam_scores_cov(const CMat& f, const CMat& r) {
  if (f.rows() != r.rows() || r.rows() != r.cols())
    throw std::invalid_argument("beam_scores_cov: dimension mismatch");
  const CMat g = f.adjoint() * r * f;
  return g.diagonal().real().cwiseMax(0.0);
}

/// Closed-form maximizer of sum_n d_n^2 (signal_n - kappa interf_n) - kappa
/// noise over d in [0,1]^N. Ties at exactly zero resolve to 0.
inline RVec solve_relaxed(const RVec& signal_scores, const RVec& interf_scores,
                          double kappa, double noise_power) {
  (void)noise_power; // constant offset, does not move the maximizer
  if (signal_scores.size() != interf_scores.size())
    throw std::invalid_argument("solve_relaxed: score length mismatch");
  RVec d(signal_scores.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d(i) = (signal_scores(i) - kappa * interf_scores(i) > 0.0) ? 1.0 : 0.0;
  return d;
}

struct ThresholdResult {
  IVec mask;
  bool shortfall = false;
};

/// Cardinality-constrained thresholding: exactly `cardinality` ones at the
/// indices with the largest relaxed value, ties broken by larger ranking
/// score, then by lower index. Candidates are the indices with a positive
/// relaxed value; if there are fewer candidates than requested, all of them
/// are selected and the shortfall is flagged.
inline ThresholdResult threshold_rho(const RVec& relaxed, const RVec& ranking_scores,
                                     int cardinality) {
  if (relaxed.size() != ranking_scores.size())
    throw std::invalid_argument("threshold_rho: length mismatch");
  if (cardinality < 0 || cardinality > relaxed.size())
    throw std::invalid_argument("threshold_rho: cardinality out of range");
  std::vector<int> cand;
  for (int i = 0; i < relaxed.size(); ++i)
    if (relaxed(i) > 0.0) cand.push_back(i);
  std::sort(cand.begin(), cand.end(), [&](int a, int b) {
    if (relaxed(a) != relaxed(b)) return relaxed(a) > relaxed(b);
    if (ranking_scores(a) != ranking_scores(b))
      return ranking_scores(a) > ranking_scores(b);
    return a < b;
  });
  ThresholdResult out;
  out.mask = IVec::Zero(relaxed.size());
  const int take = std::min<int>(cardinality, static_cast<int>(cand.size()));
  for (int i = 0; i < take; ++i) out.mask(cand[i]) = 1;
  out.shortfall = take < cardinality;
  return out;
}

/// Radar-side cardinality ceil((1-rho) N); the comms side receives the rest.
/// The small epsilon keeps exact products like 0.5*32 from rounding up.
inline int radar_cardinality(double rho, int n) {
  const int k = static_cast<int>(std::ceil((1.0 - rho) * n - 1e-9));
  return std::clamp(k, 0, n);
}

struct DinkelbachOptions {
  int max_iters = 50;
  double kappa_tol = 1e-6;
  bool disjoint = true; // an index serves comms or radar, never both
};

namespace detail {

/// Tops a selection up to the requested cardinality from the allowed,
/// not-yet-selected indices, best ranking score first. Keeps the exact
/// cardinality invariant when the positive-score candidates fall short.
inline void top_up(IVec& mask, const RVec& ranking, const IVec& allowed,
                   int cardinality) {
  int have = mask.sum();
  if (have >= cardinality) return;
  std::vector<int> rest;
  for (int i = 0; i < mask.size(); ++i)
    if (mask(i) == 0 && allowed(i) != 0) rest.push_back(i);
  std::sort(rest.begin(), rest.end(), [&](int a, int b) {
    if (ranking(a) != ranking(b)) return ranking(a) > ranking(b);
    return a < b;
  });
  for (int i : rest) {
    if (have >= cardinality) break;
    mask(i) = 1;
    ++have;
  }
}

struct ScoreSet {
  RVec signal;   // total-channel energy per codebook index
  RVec interf_c; // radar energy polluting a comms-selected index
  RVec interf_r; // comms energy polluting a radar-selected index
};

inline std::pair<Selection, DinkelbachState> dinkelbach_core(
    const ScoreSet& sc, double noise_power, double rho,
    const DinkelbachOptions& opts) {
  const int n = static_cast<int>(sc.signal.size());
  const int k_r = radar_cardinality(rho, n);
  const int k_c = n - k_r;

  Selection best;
  DinkelbachState st;
  st.kappa_c = 1.0; // Algorithm init; the uniform relaxed start is implicit
  st.kappa_r = 1.0; // because the per-index scores do not depend on d
  bool have_best = false;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    Selection cur;
    cur.relaxed_c = solve_relaxed(sc.signal, sc.interf_c, st.kappa_c, noise_power);
    RVec net_c = sc.signal - st.kappa_c * sc.interf_c;
    auto th_c = threshold_rho(cur.relaxed_c, net_c, k_c);
    cur.d_c = th_c.mask;
    cur.shortfall_c = th_c.shortfall;
    if (cur.shortfall_c)
      top_up(cur.d_c, net_c, IVec::Ones(n), k_c);

    IVec allowed_r = IVec::Ones(n);
    if (opts.disjoint) allowed_r -= cur.d_c;
    cur.relaxed_r = solve_relaxed(sc.signal, sc.interf_r, st.kappa_r, noise_power);
    for (int i = 0; i < n; ++i)
      if (allowed_r(i) == 0) cur.relaxed_r(i) = 0.0;
    RVec net_r = sc.signal - st.kappa_r * sc.interf_r;
    auto th_r = threshold_rho(cur.relaxed_r, net_r, k_r);
    cur.d_r = th_r.mask;
    cur.shortfall_r = th_r.shortfall;
    if (cur.shortfall_r)
      top_up(cur.d_r, net_r, allowed_r, k_r);

    // cardinality and disjointness must hold at every iteration
    if (cur.d_c.sum() != k_c || cur.d_r.sum() != k_r)
      throw std::logic_error("dinkelbach: cardinality invariant violated");
    if (opts.disjoint)
      for (int i = 0; i < n; ++i)
        if (cur.d_c(i) != 0 && cur.d_r(i) != 0)
          throw std::logic_error("dinkelbach: selections overlap");

    auto dot_sel = [&](const IVec& d, const RVec& v) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        if (d(i) != 0) acc += v(i);
      return acc;
    };
    const double c_c = dot_sel(cur.d_c, sc.signal);
    const double eta_c = noise_power + dot_sel(cur.d_c, sc.interf_c);
    const double c_r = dot_sel(cur.d_r, sc.signal);
    const double eta_r = noise_power + dot_sel(cur.d_r, sc.interf_r);
    const double kc_new = c_c / eta_c;
    const double kr_new = c_r / eta_r;
    const double objective = kc_new + kr_new;

    if (have_best && objective < st.objective_trace.back()) {
      // the parametric step failed to improve the true fractional objective;
      // keep the previous selection and stop
      break;
    }
    const bool converged = have_best &&
                           std::abs(kc_new - st.kappa_c) <= opts.kappa_tol &&
                           std::abs(kr_new - st.kappa_r) <= opts.kappa_tol;
    best = cur;
    have_best = true;
    st.objective_trace.push_back(objective);
    st.kappa_c = kc_new;
    st.kappa_r = kr_new;
    st.c_c = c_c;
    st.eta_c = eta_c;
    st.c_r = c_r;
    st.eta_r = eta_r;
    st.iterations = iter;
    if (converged) {
      st.converged = true;
      break;
    }
  }
  return {best, st};
}

} // namespace detail

/// Covariance-driven selection (the primary mode): scores are the beamspace
/// diagonals of R, R_R and R_C, so the output depends on the channel only
/// through its second-order statistics.
inline std::pair<Selection, DinkelbachState> dinkelbach_select(
    const CovarianceSet& covs, const Scenario& sc,
    const DinkelbachOptions& opts = {}) {
  if (!(sc.rho >= 0.0 && sc.rho <= 1.0))
    throw std::invalid_argument("dinkelbach_select: rho must be in [0,1]");
  const CMat f = dft_matrix(sc.n_antennas);
  detail::ScoreSet scores;
  scores.signal = beam_scores_cov(f, covs.r);
  scores.interf_c = beam_scores_cov(f, covs.r_r);
  scores.interf_r = beam_scores_cov(f, covs.r_c);
  return detail::dinkelbach_core(scores, sc.noise_power(), sc.rho, opts);
}

/// Instantaneous-channel selection, using the Frobenius-norm forms directly.
inline std::pair<Selection, DinkelbachState> dinkelbach_select(
    const ChannelSet& ch, const Scenario& sc,
    const DinkelbachOptions& opts = {}) {
  if (!(sc.rho >= 0.0 && sc.rho <= 1.0))
    throw std::invalid_argument("dinkelbach_select: rho must be in [0,1]");
  const CMat f = dft_matrix(sc.n_antennas);
  detail::ScoreSet scores;
  scores.signal = beam_scores(f, ch.h);
  scores.interf_c = beam_scores(f, ch.h_r);
  scores.interf_r = beam_scores(f, ch.h_c);
  return detail::dinkelbach_core(scores, sc.noise_power(), sc.rho, opts);
}

/// Exhaustive search over all disjoint selections with the required
/// cardinalities, maximizing the exact objective log2(1 + ratio_c + ratio_r).
/// Subsets are visited in lexicographic order and replaced only on strict
/// improvement, so ties return the lexicographically first maximizer.
inline std::pair<Selection, double> brute_force_oracle(const ChannelSet& ch,
                                                       const Scenario& sc) {
  const int n = sc.n_antennas;
  if (n > 10)
    throw std::invalid_argument(
        "brute_force_oracle: refused, exhaustive search needs N <= 10");
  const CMat f = dft_matrix(n);
  const RVec s = beam_scores(f, ch.h);
  const RVec ic = beam_scores(f, ch.h_r);
  const RVec ir = beam_scores(f, ch.h_c);
  const int k_r = radar_cardinality(sc.rho, n);
  const int k_c = n - k_r;
  const double noise = sc.noise_power();

  std::vector<int> pick(k_c);
  std::iota(pick.begin(), pick.end(), 0);
  Selection best;
  double best_obj = -std::numeric_limits<double>::infinity();
  bool more = true;
  while (more) {
    double sig_c = 0.0, int_c = 0.0;
    IVec d_c = IVec::Zero(n);
    for (int i : pick) {
      d_c(i) = 1;
      sig_c += s(i);
      int_c += ic(i);
    }
    IVec d_r = IVec::Ones(n) - d_c;
    double sig_r = 0.0, int_r = 0.0;
    for (int i = 0; i < n; ++i)
      if (d_r(i) != 0) {
        sig_r += s(i);
        int_r += ir(i);
      }
    const double obj =
        std::log2(1.0 + sig_c / (noise + int_c) + sig_r / (noise + int_r));
    if (obj > best_obj) {
      best_obj = obj;
      best.d_c = d_c;
      best.d_r = d_r;
    }
    // next k_c-combination of {0..n-1} in lexicographic order
    int i = k_c - 1;
    while (i >= 0 && pick[i] == n - k_c + i) --i;
    if (i < 0) {
      more = false;
    } else {
      ++pick[i];
      for (int j = i + 1; j < k_c; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  best.relaxed_c = best.d_c.cast<double>();
  best.relaxed_r = best.d_r.cast<double>();
  return {best, best_obj};
}

} // namespace jrc
