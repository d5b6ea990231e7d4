#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "relaycs/array_geometry.hpp"
#include "relaycs/channel_model.hpp"
#include "relaycs/impairments.hpp"
#include "relaycs/ms_estimator.hpp"
#include "relaycs/rng.hpp"
#include "relaycs/sounding.hpp"
#include "relaycs/sparse_recovery.hpp"

using relaycs::BlockageKind;
using relaycs::BlockageMask;
using relaycs::build_dictionary;
using relaycs::channel_of_sparse;
using relaycs::channel_of_sparse_baseline;
using relaycs::ChannelRealization;
using relaycs::CMatrix;
using relaycs::Complex;
using relaycs::corrupt_channel;
using relaycs::CVector;
using relaycs::default_lambda;
using relaycs::detect_support;
using relaycs::debias_rank_truncated;
using relaycs::estimate_channel;
using relaycs::EstimationRegime;
using relaycs::EstimatorConfig;
using relaycs::identity_mask;
using relaycs::lasso_solve;
using relaycs::MeasurementBatch;
using relaycs::nmse;
using relaycs::Rng;
using relaycs::sample_blockage;
using relaycs::sample_channel;
using relaycs::sample_codebook;
using relaycs::sensing_matrix_fast;
using relaycs::simulate_baseline_measurements;
using relaycs::simulate_measurements;
using relaycs::SoundingCodebook;
using relaycs::SteeringDictionary;
using relaycs::uniform_sine_grid;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Setup {
  SteeringDictionary bs_dict;
  SteeringDictionary ms_dict;
  SoundingCodebook codebook;
};

Setup make_setup(Rng& rng, int n_bs, int n_ms, int g_bs, int g_ms, int m_bs,
                 int m_ms) {
  Setup s;
  s.bs_dict = build_dictionary(n_bs, uniform_sine_grid(g_bs));
  s.ms_dict = build_dictionary(n_ms, uniform_sine_grid(g_ms));
  s.codebook = sample_codebook(rng, n_bs, n_ms, m_bs, m_ms);
  return s;
}

}  // namespace

TEST_SUITE("ms_estimator") {

TEST_CASE("nmse is the squared error relative to the truth") {
  Rng rng(41);
  CMatrix h(3, 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) h(r, c) = rng.cnormal();
  }
  CHECK(nmse(h, h) == 0.0);
  CHECK(nmse(h, CMatrix::Zero(3, 4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nmse(h, 2.0 * h) == doctest::Approx(1.0).epsilon(1e-12));
  CMatrix est = h;
  est(1, 2) += Complex(0.5, -0.25);
  const double base = nmse(h, est);
  CHECK(nmse(CMatrix(3.0 * h), CMatrix(3.0 * est)) ==
        doctest::Approx(base).epsilon(1e-12));
  CHECK_THROWS_AS(nmse(h, CMatrix::Zero(4, 3)), std::invalid_argument);
  CHECK_THROWS_AS(nmse(CMatrix::Zero(3, 4), h), std::domain_error);
}

TEST_CASE("noiseless sounding recovers an on-grid channel exactly") {
  for (std::uint64_t seed : {50, 51, 52, 53, 54}) {
    Rng rng(seed);
    // Eight combiners on the eight-element MS give the arrival side enough
    // projections that on-grid recovery succeeds at every seed, not just most.
    const Setup s = make_setup(rng, 16, 8, 16, 8, 32, 8);
    const ChannelRealization channel =
        sample_channel(rng, 2, s.bs_dict, s.ms_dict);
    const MeasurementBatch batch =
        simulate_measurements(rng, s.codebook, channel.matrix, kInf);
    const auto est = estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                                      EstimationRegime::fault_free);
    CAPTURE(seed);
    CHECK(nmse(channel.matrix, est.channel) < 1e-8);
  }
}

TEST_CASE("the baseline formulation also nails a noiseless on-grid channel") {
  Rng rng(55);
  const Setup s = make_setup(rng, 16, 8, 16, 8, 32, 8);
  const ChannelRealization channel =
      sample_channel(rng, 2, s.bs_dict, s.ms_dict);
  const MeasurementBatch batch =
      simulate_baseline_measurements(rng, s.codebook, channel.matrix, kInf);
  const auto est = estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                                    EstimationRegime::baseline_psi_a);
  CHECK(nmse(channel.matrix, est.channel) < 1e-8);
  const CMatrix resynth =
      channel_of_sparse_baseline(est.recovery.estimate, s.bs_dict, s.ms_dict);
  CHECK((est.channel - resynth).norm() < 1e-12);
}

TEST_CASE("the channel output is the synthesis of the sparse estimate") {
  Rng rng(56);
  const Setup s = make_setup(rng, 16, 8, 16, 8, 32, 4);
  const ChannelRealization channel =
      sample_channel(rng, 2, s.bs_dict, s.ms_dict);
  const MeasurementBatch batch =
      simulate_measurements(rng, s.codebook, channel.matrix, 10.0);
  const auto est = estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                                    EstimationRegime::fault_free);
  const CMatrix resynth =
      channel_of_sparse(est.recovery.estimate, s.bs_dict, s.ms_dict);
  CHECK((est.channel - resynth).norm() < 1e-12);
}

TEST_CASE("an identity mask estimate reproduces the fault-free operator") {
  Rng rng(57);
  const Setup s = make_setup(rng, 16, 8, 16, 8, 32, 4);
  const ChannelRealization channel =
      sample_channel(rng, 2, s.bs_dict, s.ms_dict);
  const MeasurementBatch batch =
      simulate_measurements(rng, s.codebook, channel.matrix, 10.0);
  const BlockageMask clean = identity_mask(16);
  const auto with_mask =
      estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                       EstimationRegime::relay_aided, &clean);
  const auto without =
      estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                       EstimationRegime::fault_free);
  CHECK((with_mask.channel - without.channel).norm() < 1e-14);
}

TEST_CASE("mask awareness restores the estimate that mismatch destroys") {
  Rng rng(58);
  const Setup s = make_setup(rng, 32, 16, 32, 16, 32, 4);
  const int trials = 30;
  double mean_free = 0.0, mean_unaware = 0.0, mean_relay = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ChannelRealization channel =
        sample_channel(rng, 3, s.bs_dict, s.ms_dict);
    const BlockageMask mask =
        sample_blockage(rng, 32, 6, BlockageKind::complete);
    const CMatrix corrupted =
        corrupt_channel(channel.matrix, mask, identity_mask(16));
    // Shared noise draws keep the three regimes paired per trial.
    Rng noise_a(1000 + t), noise_b(1000 + t);
    const MeasurementBatch clean_batch =
        simulate_measurements(noise_a, s.codebook, channel.matrix, 10.0);
    const MeasurementBatch faulty_batch =
        simulate_measurements(noise_b, s.codebook, corrupted, 10.0);
    mean_free += nmse(channel.matrix,
                      estimate_channel(clean_batch, s.codebook, s.bs_dict,
                                       s.ms_dict, EstimationRegime::fault_free)
                          .channel);
    mean_unaware +=
        nmse(channel.matrix,
             estimate_channel(faulty_batch, s.codebook, s.bs_dict, s.ms_dict,
                              EstimationRegime::fault_unaware)
                 .channel);
    mean_relay +=
        nmse(channel.matrix,
             estimate_channel(faulty_batch, s.codebook, s.bs_dict, s.ms_dict,
                              EstimationRegime::relay_aided, &mask)
                 .channel);
  }
  mean_free /= trials;
  mean_unaware /= trials;
  mean_relay /= trials;
  CAPTURE(mean_free);
  CAPTURE(mean_unaware);
  CAPTURE(mean_relay);
  // Ignoring six dead BS elements costs a clear mismatch penalty; the exact
  // mask recovers most of it. The relay operator sees fewer effective
  // elements, so a modest gap to the clean run remains.
  CHECK(mean_unaware > mean_free + 0.05);
  CHECK(mean_relay < mean_unaware - 0.05);
  CHECK(mean_relay < mean_free + 0.15);
}

TEST_CASE("the refit gate interpolates between shrunk and re-fit solutions") {
  Rng rng(59);
  const Setup s = make_setup(rng, 16, 8, 16, 8, 32, 4);
  const ChannelRealization channel =
      sample_channel(rng, 2, s.bs_dict, s.ms_dict);
  const MeasurementBatch batch =
      simulate_measurements(rng, s.codebook, channel.matrix, 10.0);

  // Replicate the estimator's pipeline stages directly.
  const CMatrix phi = sensing_matrix_fast(s.codebook, s.bs_dict, s.ms_dict);
  const double sigma = std::sqrt(batch.noise_variance);
  const double lambda = default_lambda(phi, batch.y, sigma);
  const auto raw =
      lasso_solve(phi, batch.y, lambda, relaycs::estimator_solver_defaults());
  REQUIRE_FALSE(raw.support.empty());

  EstimatorConfig shrunk_config;
  shrunk_config.refit_gate = 1e300;
  const auto shrunk =
      estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                       EstimationRegime::fault_free, nullptr, shrunk_config);
  CVector expected_shrunk = CVector::Zero(phi.cols());
  for (int i : raw.support) expected_shrunk(i) = raw.estimate(i);
  CHECK((shrunk.recovery.estimate - expected_shrunk).cwiseAbs().maxCoeff() <
        1e-12);

  EstimatorConfig refit_config;
  refit_config.refit_gate = 0.0;
  const auto refit =
      estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                       EstimationRegime::fault_free, nullptr, refit_config);
  const double mean_col = phi.colwise().norm().mean();
  const double signal_scale = batch.y.norm() / mean_col;
  const CVector expected_refit = debias_rank_truncated(
      phi, batch.y, raw.support, 10.0 * sigma / signal_scale);
  CHECK((refit.recovery.estimate - expected_refit).cwiseAbs().maxCoeff() <
        1e-12);

  // A positive lambda shrinks, so the two policies must actually differ.
  CHECK((refit.recovery.estimate - shrunk.recovery.estimate)
            .cwiseAbs()
            .maxCoeff() > 1e-12);
}

TEST_CASE("zero noise disables the gate and re-fits the whole support") {
  Rng rng(60);
  const Setup s = make_setup(rng, 16, 8, 16, 8, 32, 4);
  const ChannelRealization channel =
      sample_channel(rng, 2, s.bs_dict, s.ms_dict);
  const MeasurementBatch batch =
      simulate_measurements(rng, s.codebook, channel.matrix, kInf);
  const auto defaulted = estimate_channel(batch, s.codebook, s.bs_dict,
                                          s.ms_dict,
                                          EstimationRegime::fault_free);
  EstimatorConfig full_refit;
  full_refit.refit_gate = 0.0;
  const auto forced =
      estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                       EstimationRegime::fault_free, nullptr, full_refit);
  CHECK((defaulted.recovery.estimate - forced.recovery.estimate).norm() ==
        0.0);
}

TEST_CASE("the estimator validates its inputs") {
  Rng rng(61);
  const Setup s = make_setup(rng, 16, 8, 16, 8, 32, 4);
  const ChannelRealization channel =
      sample_channel(rng, 2, s.bs_dict, s.ms_dict);
  MeasurementBatch batch =
      simulate_measurements(rng, s.codebook, channel.matrix, 10.0);
  CHECK_THROWS_AS(estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                                   EstimationRegime::relay_aided),
                  std::invalid_argument);
  batch.y.conservativeResize(batch.y.size() - 1);
  CHECK_THROWS_AS(estimate_channel(batch, s.codebook, s.bs_dict, s.ms_dict,
                                   EstimationRegime::fault_free),
                  std::invalid_argument);
}

}  // TEST_SUITE
