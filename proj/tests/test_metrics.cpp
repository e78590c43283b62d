#include <catch2/catch.hpp>

#include <cmath>

#include "jrc/baselines.hpp"
#include "jrc/channel.hpp"
#include "jrc/metrics.hpp"
#include "jrc/rng.hpp"

using jrc::CMat;
using jrc::cplx;

namespace {

CMat random_cmat(jrc::Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.cgaussian();
  return m;
}

CMat random_psd(jrc::Rng& rng, Eigen::Index n) {
  const CMat g = random_cmat(rng, n, n);
  return jrc::hermitize(g * g.adjoint());
}

double grid_angle(int n, int k) {
  return std::asin(2.0 * k / n - 1.0) * 180.0 / std::numbers::pi;
}

} // namespace

TEST_CASE("mui_separate basics") {
  const int n = 4;
  const CMat zero = CMat::Zero(n, n);
  const CMat eye = CMat::Identity(n, n);
  const auto rep0 = jrc::mui_separate(zero, zero, eye, eye, 1.0);
  CHECK(rep0.mui_bits == Approx(0.0).margin(1e-14));

  jrc::Rng rng(1);
  const CMat h = random_cmat(rng, n, n);
  const CMat sigma = random_psd(rng, n);
  const auto sym = jrc::mui_separate(h, h, sigma, sigma, 0.7);
  CHECK(sym.comms_term == Approx(sym.radar_term).margin(1e-12));
  CHECK(sym.mui_bits == Approx(sym.comms_term + sym.radar_term));
  CHECK(sym.sigma_r_sq == 0.0);
  CHECK(sym.sigma_c_sq == 0.0);
}

TEST_CASE("mui_joint never exceeds mui_separate") {
  jrc::Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + int(rng.uniform() * 5);
    const CMat h_c = random_cmat(rng, n, n);
    const CMat h_r = random_cmat(rng, n, n);
    const CMat sc = random_psd(rng, n);
    const CMat sr = random_psd(rng, n);
    const double noise = 0.05 + rng.uniform();
    const auto joint = jrc::mui_joint(h_c, h_r, sc, sr, noise);
    const auto sep = jrc::mui_separate(h_c, h_r, sc, sr, noise);
    REQUIRE(joint.mui_bits <= sep.mui_bits + 1e-9);
  }
}

TEST_CASE("mui_joint equals mui_separate for interference-free precoders") {
  jrc::Rng rng(3);
  const int n = 8;
  // rank-deficient channels so both nullspaces are nonempty
  const CMat h_c = random_cmat(rng, n, 2) * random_cmat(rng, 2, n);
  const CMat h_r = random_cmat(rng, n, 3) * random_cmat(rng, 3, n);
  const auto np = jrc::svd_nulling_precoders(h_c, h_r);
  const CMat sigma_c = jrc::hermitize(np.sigma_c_root * np.sigma_c_root.adjoint());
  const CMat sigma_r = jrc::hermitize(np.sigma_r_root * np.sigma_r_root.adjoint());
  const auto joint = jrc::mui_joint(h_c, h_r, sigma_c, sigma_r, 0.4);
  const auto sep = jrc::mui_separate(h_c, h_r, sigma_c, sigma_r, 0.4);
  CHECK(joint.mui_bits == Approx(sep.mui_bits).epsilon(1e-9));
  CHECK(joint.sigma_r_sq < 1e-12);
  CHECK(joint.sigma_c_sq < 1e-12);

  const CMat zero = CMat::Zero(n, n);
  CHECK(jrc::mui_joint(h_c, h_r, zero, zero, 0.4).mui_bits ==
        Approx(0.0).margin(1e-14));
}

TEST_CASE("mui_weighted identities") {
  jrc::Rng rng(4);
  const int n = 5;
  const CMat h_c = random_cmat(rng, n, n);
  const CMat h_r = random_cmat(rng, n, n);
  const CMat sc = random_psd(rng, n);
  const CMat sr = random_psd(rng, n);
  const double noise = 0.3;

  const auto w_half = jrc::mui_weighted(h_c, h_r, sc, sr, noise, 0.5, false);
  const auto sep = jrc::mui_separate(h_c, h_r, sc, sr, noise);
  CHECK(std::abs(w_half.mui_bits - sep.mui_bits) < 1e-10);

  const auto w_one = jrc::mui_weighted(h_c, h_r, sc, sr, noise, 1.0, false);
  CHECK(w_one.radar_term == 0.0);

  // rho = 0.25 recomposes from the individually computed log-det terms
  const double t_c = jrc::logdet_cap(h_c, sc, noise);
  const double t_r = jrc::logdet_cap(h_r, sr, noise);
  const auto w_q = jrc::mui_weighted(h_c, h_r, sc, sr, noise, 0.25, false);
  CHECK(w_q.mui_bits == Approx(2 * 0.25 * t_c + 2 * 0.75 * t_r).epsilon(1e-12));

  CHECK_THROWS_AS(jrc::mui_weighted(h_c, h_r, sc, sr, noise, 1.5, false),
                  std::invalid_argument);
}

TEST_CASE("mui values grow as noise shrinks") {
  jrc::Rng rng(6);
  const int n = 4;
  const CMat h_c = random_cmat(rng, n, n);
  const CMat h_r = random_cmat(rng, n, n);
  const CMat sc = random_psd(rng, n);
  const CMat sr = random_psd(rng, n);
  double prev_sep = -1.0, prev_joint = -1.0, prev_w = -1.0;
  for (double noise : {10.0, 1.0, 0.1, 0.01}) {
    const double sep = jrc::mui_separate(h_c, h_r, sc, sr, noise).mui_bits;
    const double joint = jrc::mui_joint(h_c, h_r, sc, sr, noise).mui_bits;
    const double w = jrc::mui_weighted(h_c, h_r, sc, sr, noise, 0.3, true).mui_bits;
    CHECK(sep >= prev_sep);
    CHECK(joint >= prev_joint);
    CHECK(w >= prev_w);
    CHECK(sep >= 0.0);
    CHECK(joint >= 0.0);
    CHECK(w >= 0.0);
    prev_sep = sep;
    prev_joint = joint;
    prev_w = w;
  }
}

TEST_CASE("mui_beamspace masked evaluation") {
  const int n = 8;
  const CMat f = jrc::dft_matrix(n);
  const jrc::MaskMat ones = jrc::MaskMat::Ones(n, n);
  const jrc::MaskMat zeros = jrc::MaskMat::Zero(n, n);

  const CMat zero = CMat::Zero(n, n);
  CHECK(jrc::mui_beamspace(zero, ones, zeros, f, 1.0).mui_bits ==
        Approx(0.0).margin(1e-14));

  jrc::Rng rng(8);
  const CMat h = random_cmat(rng, n, n);
  const CMat hr0 = CMat::Zero(n, n);
  const double noise = 0.9;
  const auto rep = jrc::mui_beamspace(h, ones, zeros, f, noise, &h, &hr0);
  // all-pass comms mask, no radar channel: single log of the full beamspace energy
  const CMat bs = f.adjoint() * h * f;
  CHECK(rep.mui_bits == Approx(std::log2(1.0 + bs.squaredNorm() / noise)).epsilon(1e-12));
  CHECK(rep.comms_term + rep.radar_term == Approx(rep.mui_bits));
}

TEST_CASE("mui_beamspace disjoint grid-aligned channels have negligible cross energy") {
  const int n = 16;
  const CMat f = jrc::dft_matrix(n);
  const CMat h_c = jrc::synthesize_channel({grid_angle(n, 11)}, {cplx(1, 0.3)}, n, 0.5);
  const CMat h_r = jrc::synthesize_channel({grid_angle(n, 4)}, {cplx(-0.5, 1)}, n, 0.5);
  const CMat h = h_c + h_r;
  const auto [omega_c, omega_r] = jrc::beamspace_masks(h_c, h_r, f, 0.95);
  const auto rep = jrc::mui_beamspace(h, omega_c, omega_r, f, 1e-3, &h_c, &h_r);
  const double sig_c = rep.comms_term; // proxy: interference must be tiny vs signal
  REQUIRE(sig_c > 0.0);
  CHECK(rep.sigma_r_sq < 1e-6 * (f.adjoint() * h_c * f).squaredNorm());
  CHECK(rep.sigma_c_sq < 1e-6 * (f.adjoint() * h_r * f).squaredNorm());
}

TEST_CASE("interference_covariance trace identities") {
  const int n = 8;
  const CMat f_raw = jrc::dft_matrix(n);
  jrc::IVec d = jrc::IVec::Zero(n);
  CHECK(jrc::interference_covariance(CMat::Identity(n, n), f_raw, d) == 0.0);

  d(1) = d(4) = d(6) = 1; // k = 3 selected beams, each raw column has norm^2 = n
  CHECK(jrc::interference_covariance(CMat::Identity(n, n), f_raw, d) ==
        Approx(3.0 * n).epsilon(1e-12));

  // single on-grid user: its beam carries the whole trace, others almost none
  const int k = 5;
  const CMat r_c = jrc::analytic_covariance({grid_angle(n, k)}, n, 0.5);
  const CMat f_unit = jrc::dft_codebook_unitary(n);
  const double total = r_c.diagonal().real().sum();
  // the DFT row matching sin(phi) = 2k/n - 1 is index (n - k) mod n for the
  // e^{-j2pi mk/n} codebook
  jrc::IVec hit = jrc::IVec::Zero(n);
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    jrc::IVec probe = jrc::IVec::Zero(n);
    probe(i) = 1;
    const double v = jrc::interference_covariance(r_c, f_unit, probe);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  hit(best_i) = 1;
  CHECK(best == Approx(total).epsilon(1e-9));
  for (int i = 0; i < n; ++i) {
    if (i == best_i) continue;
    jrc::IVec probe = jrc::IVec::Zero(n);
    probe(i) = 1;
    CHECK(jrc::interference_covariance(r_c, f_unit, probe) < 1e-9 * total);
  }

  // additivity over disjoint selections
  jrc::Rng rng(12);
  const CMat r = random_psd(rng, n);
  jrc::IVec d1 = jrc::IVec::Zero(n), d2 = jrc::IVec::Zero(n);
  d1(0) = d1(3) = 1;
  d2(5) = d2(7) = 1;
  const double lhs = jrc::interference_covariance(r, f_raw, (d1 + d2).eval());
  const double rhs = jrc::interference_covariance(r, f_raw, d1) +
                     jrc::interference_covariance(r, f_raw, d2);
  CHECK(lhs == Approx(rhs).epsilon(1e-12));
}

TEST_CASE("selection objective ratios decompose over scores") {
  const int n = 8;
  jrc::Rng rng(13);
  jrc::Scenario sc;
  sc.n_antennas = n;
  jrc::AngleSet as;
  as.comms_angles_deg = {-20.0};
  as.radar_angles_deg = {35.0};
  const auto ch = jrc::draw_channel_set(sc, as, rng);
  const CMat f = jrc::dft_matrix(n);
  jrc::IVec d_c = jrc::IVec::Zero(n), d_r = jrc::IVec::Zero(n);
  for (int i = 0; i < n / 2; ++i) d_c(i) = 1;
  for (int i = n / 2; i < n; ++i) d_r(i) = 1;
  const auto r = jrc::selection_ratios(ch, f, d_c, d_r);
  // signal term equals the masked Frobenius norm computed directly
  CMat masked = f.adjoint() * ch.h;
  for (int i = 0; i < n; ++i)
    if (d_c(i) == 0) masked.row(i).setZero();
  CHECK(r.signal_c == Approx(masked.squaredNorm()).epsilon(1e-12));

  const double noise = 0.25;
  const double exact = jrc::selection_mui_exact(ch, f, d_c, d_r, noise);
  CHECK(exact ==
        Approx(std::log2(1.0 + r.ratio_c(noise) + r.ratio_r(noise))).epsilon(1e-12));
  const double taylor = jrc::selection_mui_taylor(ch, f, d_c, d_r, noise);
  CHECK(taylor ==
        Approx((r.ratio_c(noise) + r.ratio_r(noise)) / std::numbers::ln2).epsilon(1e-12));
}

TEST_CASE("nrp_beampattern peaks, flags and scaling invariance") {
  const int n = 32;
  std::vector<double> grid;
  for (double a = -90.0; a <= 90.0; a += 0.5) grid.push_back(a);

  const CMat h_r = jrc::synthesize_channel({22.0}, {cplx(1, 0)}, n, 0.5);
  const CMat zero = CMat::Zero(n, n);
  const auto flat = jrc::nrp_beampattern(h_r, zero, grid, n, 0.5);
  CHECK(flat.all_zero);

  const CMat f_steer = jrc::steering_vector(22.0, n, 0.5);
  const auto bp = jrc::nrp_beampattern(h_r, f_steer, grid, n, 0.5);
  Eigen::Index arg = 0;
  Eigen::Map<const Eigen::VectorXd>(bp.nrp.data(), bp.nrp.size()).maxCoeff(&arg);
  CHECK(std::abs(bp.angles_deg[arg] - 22.0) <= 1.0);
  CHECK(*std::max_element(bp.nrp.begin(), bp.nrp.end()) == Approx(1.0));

  const auto bp_scaled =
      jrc::nrp_beampattern(h_r, cplx(0.0, -3.7) * f_steer, grid, n, 0.5);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(bp.nrp[i] == Approx(bp_scaled.nrp[i]).margin(1e-12));

  // target at broadside gives a pattern symmetric about 0 degrees
  const CMat h0 = jrc::synthesize_channel({0.0}, {cplx(1, 0)}, n, 0.5);
  const auto bp0 =
      jrc::nrp_beampattern(h0, jrc::dft_codebook_unitary(n), grid, n, 0.5);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = grid.size() - 1 - i;
    CHECK(bp0.nrp[i] == Approx(bp0.nrp[j]).margin(1e-9));
  }
}
