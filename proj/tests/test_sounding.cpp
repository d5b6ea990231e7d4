#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "relaycs/channel_model.hpp"
#include "relaycs/impairments.hpp"
#include "relaycs/sounding.hpp"
#include "support/oracles.hpp"

using relaycs::assemble_psi;
using relaycs::assemble_psi_baseline;
using relaycs::baseline_dictionary_operator;
using relaycs::baseline_sensing_matrix;
using relaycs::BlockageKind;
using relaycs::BlockageMask;
using relaycs::build_dictionary;
using relaycs::ChannelRealization;
using relaycs::CMatrix;
using relaycs::Complex;
using relaycs::corrupt_channel;
using relaycs::CVector;
using relaycs::dictionary_operator;
using relaycs::MeasurementBatch;
using relaycs::noise_variance_for_snr_db;
using relaycs::Rng;
using relaycs::sample_beam_matrix;
using relaycs::sample_blockage;
using relaycs::sample_channel;
using relaycs::sample_codebook;
using relaycs::sensing_matrix;
using relaycs::sensing_matrix_fast;
using relaycs::simulate_baseline_measurements;
using relaycs::simulate_measurements;
using relaycs::SoundingCodebook;
using relaycs::SteeringDictionary;
using relaycs::uniform_sine_grid;

namespace {

constexpr double kNoiselessDb = std::numeric_limits<double>::infinity();

}  // namespace

TEST_SUITE("sounding") {

TEST_CASE("beam matrices draw unit-norm QPSK-alphabet columns") {
  Rng rng(21);
  const CMatrix p = sample_beam_matrix(rng, 16, 9);
  REQUIRE(p.rows() == 16);
  REQUIRE(p.cols() == 9);
  const double scale = 1.0 / 4.0;
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    CHECK(p.col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      const Complex v = p(r, c) / scale;
      const bool in_alphabet =
          std::abs(v - Complex(1, 0)) < 1e-15 ||
          std::abs(v - Complex(-1, 0)) < 1e-15 ||
          std::abs(v - Complex(0, 1)) < 1e-15 ||
          std::abs(v - Complex(0, -1)) < 1e-15;
      CHECK(in_alphabet);
    }
  }
  Rng again(21);
  CHECK((sample_beam_matrix(again, 16, 9) - p).norm() == 0.0);
  CHECK_THROWS_AS(sample_beam_matrix(rng, 0, 1), std::invalid_argument);
}

TEST_CASE("codebooks require the combiner count to divide the beam count") {
  Rng rng(22);
  const SoundingCodebook cb = sample_codebook(rng, 8, 4, 6, 3);
  CHECK(cb.num_beams() == 6);
  CHECK(cb.num_combiners() == 3);
  CHECK(cb.snapshots_per_combiner() == 2);
  CHECK_THROWS_AS(sample_codebook(rng, 8, 4, 5, 2), std::invalid_argument);
  CHECK_THROWS_AS(sample_codebook(rng, 8, 4, 4, 0), std::invalid_argument);
}

TEST_CASE("stacked operator rows reproduce the combined snapshots") {
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const int n_bs = 2 + static_cast<int>(rng.below(7));
    const int n_ms = 2 + static_cast<int>(rng.below(7));
    const int m_ms = 1 + static_cast<int>(rng.below(3));
    const int per = 1 + static_cast<int>(rng.below(4));
    const SoundingCodebook cb =
        sample_codebook(rng, n_bs, n_ms, m_ms * per, m_ms);
    const CMatrix h = oracles::random_cmatrix(rng, n_ms, n_bs);

    const CMatrix psi = assemble_psi(cb);
    REQUIRE(psi.rows() == m_ms * per);
    REQUIRE(psi.cols() == n_ms * n_bs);
    const CVector stacked = psi * oracles::vec(h.transpose());
    for (int r = 0; r < m_ms * per; ++r) {
      const Complex direct =
          cb.combiners.col(r / per).dot(h * cb.beams.col(r));
      CHECK(std::abs(stacked(r) - direct) < 1e-12);
    }
  }
}

TEST_CASE("stacked operator equals blockwise Kronecker construction") {
  Rng rng(24);
  const SoundingCodebook cb = sample_codebook(rng, 5, 3, 8, 2);
  const CMatrix psi = assemble_psi(cb);
  for (int m = 0; m < 2; ++m) {
    const CMatrix block = oracles::kron(
        cb.combiners.col(m).adjoint(),
        cb.beams.middleCols(m * 4, 4).transpose());
    CHECK((psi.middleRows(m * 4, 4) - block).norm() == 0.0);
  }
}

TEST_CASE("baseline operator reproduces the factorial snapshot layout") {
  Rng rng(25);
  const SoundingCodebook cb = sample_codebook(rng, 6, 4, 9, 3);
  const CMatrix psi_a = assemble_psi_baseline(cb);
  REQUIRE(psi_a.rows() == 9);
  const CMatrix expected = oracles::kron(
      cb.beams.leftCols(3).transpose(), cb.combiners.adjoint());
  CHECK((psi_a - expected).norm() == 0.0);

  const CMatrix h = oracles::random_cmatrix(rng, 4, 6);
  const CVector stacked = psi_a * oracles::vec(h);
  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < 3; ++m) {
      const Complex direct = cb.combiners.col(m).dot(h * cb.beams.col(n));
      CHECK(std::abs(stacked(m + 3 * n) - direct) < 1e-12);
    }
  }
}

TEST_CASE("fault-free sensing matrix matches the dense operator product") {
  Rng rng(26);
  const SteeringDictionary bs = build_dictionary(6, uniform_sine_grid(6));
  const SteeringDictionary ms = build_dictionary(4, uniform_sine_grid(4));
  const SoundingCodebook cb = sample_codebook(rng, 6, 4, 8, 2);

  const CMatrix psi = assemble_psi(cb);
  const CMatrix dense = psi * oracles::kron(ms.matrix, bs.matrix.conjugate());
  const CMatrix ref = sensing_matrix(psi, bs, ms);
  const CMatrix fast = sensing_matrix_fast(cb, bs, ms);
  CHECK((ref - dense).norm() < 1e-12);
  CHECK((fast - dense).norm() < 1e-12);
}

TEST_CASE("masked sensing matrix factorizes through the corruption diagonal") {
  Rng rng(27);
  const SteeringDictionary bs = build_dictionary(6, uniform_sine_grid(6));
  const SteeringDictionary ms = build_dictionary(4, uniform_sine_grid(4));
  const SoundingCodebook cb = sample_codebook(rng, 6, 4, 8, 2);
  const BlockageMask bs_mask = sample_blockage(rng, 6, 2, BlockageKind::mixed);
  const BlockageMask ms_mask = sample_blockage(rng, 4, 1, BlockageKind::mixed);

  // diag(d) with d = b_ms kron conj(b_bs) in the vec(H^T) layout.
  CVector d(24);
  for (int i_ms = 0; i_ms < 4; ++i_ms) {
    for (int i_bs = 0; i_bs < 6; ++i_bs) {
      d(i_bs + 6 * i_ms) = ms_mask.coefficients(i_ms) *
                           std::conj(bs_mask.coefficients(i_bs));
    }
  }
  const CMatrix psi = assemble_psi(cb);
  const CMatrix dense = psi * (d.asDiagonal() *
                               oracles::kron(ms.matrix, bs.matrix.conjugate()));
  const CMatrix ref = sensing_matrix(psi, bs, ms, &bs_mask, &ms_mask);
  const CMatrix fast = sensing_matrix_fast(cb, bs, ms, &bs_mask, &ms_mask);
  CHECK((ref - dense).norm() < 1e-12);
  CHECK((fast - dense).norm() < 1e-12);

  // One-sided masks agree between the two construction routes as well.
  CHECK((sensing_matrix(psi, bs, ms, &bs_mask, nullptr) -
         sensing_matrix_fast(cb, bs, ms, &bs_mask, nullptr))
            .norm() < 1e-12);
  CHECK((sensing_matrix(psi, bs, ms, nullptr, &ms_mask) -
         sensing_matrix_fast(cb, bs, ms, nullptr, &ms_mask))
            .norm() < 1e-12);
}

TEST_CASE("noiseless snapshots of a corrupted channel equal the corrupted "
          "sensing matrix applied to the sparse vector") {
  Rng rng(28);
  const SteeringDictionary bs = build_dictionary(8, uniform_sine_grid(8));
  const SteeringDictionary ms = build_dictionary(4, uniform_sine_grid(4));
  const SoundingCodebook cb = sample_codebook(rng, 8, 4, 12, 2);
  const ChannelRealization chan = sample_channel(rng, 3, bs, ms);
  const BlockageMask bs_mask = sample_blockage(rng, 8, 3, BlockageKind::mixed);
  const BlockageMask ms_mask = sample_blockage(rng, 4, 1, BlockageKind::mixed);

  const CMatrix corrupted = corrupt_channel(chan.matrix, bs_mask, ms_mask);
  const MeasurementBatch batch =
      simulate_measurements(rng, cb, corrupted, kNoiselessDb);
  CHECK(batch.noise_variance == 0.0);

  const CMatrix phi_hat = sensing_matrix_fast(cb, bs, ms, &bs_mask, &ms_mask);
  CHECK((batch.y - phi_hat * chan.sparse_coeffs).norm() <
        1e-12 * std::max(1.0, batch.y.norm()));
}

TEST_CASE("baseline sensing matrix equals its dense operator product") {
  Rng rng(29);
  const SteeringDictionary bs = build_dictionary(6, uniform_sine_grid(6));
  const SteeringDictionary ms = build_dictionary(4, uniform_sine_grid(4));
  const SoundingCodebook cb = sample_codebook(rng, 6, 4, 8, 4);

  const CMatrix dense = assemble_psi_baseline(cb) *
                        baseline_dictionary_operator(bs, ms);
  CHECK((baseline_sensing_matrix(cb, bs, ms) - dense).norm() < 1e-12);

  // Its noiseless measurements match on a synthesized channel too.
  const ChannelRealization chan = sample_channel(rng, 2, bs, ms);
  const MeasurementBatch batch =
      simulate_baseline_measurements(rng, cb, chan.matrix, kNoiselessDb);
  const CVector expected =
      assemble_psi_baseline(cb) * oracles::vec(chan.matrix);
  CHECK((batch.y - expected).norm() < 1e-12 * std::max(1.0, batch.y.norm()));
}

TEST_CASE("noise variance follows the SNR in decibels") {
  CHECK(noise_variance_for_snr_db(0.0) == doctest::Approx(1.0));
  CHECK(noise_variance_for_snr_db(10.0) == doctest::Approx(0.1));
  CHECK(noise_variance_for_snr_db(-10.0) == doctest::Approx(10.0));
  CHECK(noise_variance_for_snr_db(kNoiselessDb) == 0.0);
}

TEST_CASE("combined noise power calibrates to sigma^2 per snapshot") {
  Rng rng(30);
  const SoundingCodebook cb = sample_codebook(rng, 8, 4, 10000, 4);
  const CMatrix h = CMatrix::Zero(4, 8);
  const MeasurementBatch batch = simulate_measurements(rng, cb, h, 10.0);
  const double mean_power = batch.y.squaredNorm() / batch.y.size();
  // Combiner columns are unit norm, so the combined noise keeps variance
  // sigma^2 = 0.1; the empirical mean of 1e4 draws has ~1% relative error.
  CHECK(mean_power == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("measurement simulation is deterministic and validates shapes") {
  Rng rng(31);
  const SoundingCodebook cb = sample_codebook(rng, 6, 4, 8, 2);
  const CMatrix h = oracles::random_cmatrix(rng, 4, 6);
  Rng n1(55), n2(55);
  const MeasurementBatch a = simulate_measurements(n1, cb, h, 10.0);
  const MeasurementBatch b = simulate_measurements(n2, cb, h, 10.0);
  CHECK((a.y - b.y).norm() == 0.0);

  const CMatrix wrong = oracles::random_cmatrix(rng, 3, 6);
  Rng n3(55);
  CHECK_THROWS_AS(simulate_measurements(n3, cb, wrong, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_baseline_measurements(n3, cb, wrong, 10.0),
                  std::invalid_argument);
}

TEST_CASE("dimension and mask mismatches are rejected") {
  Rng rng(32);
  const SteeringDictionary bs = build_dictionary(6, uniform_sine_grid(6));
  const SteeringDictionary ms = build_dictionary(4, uniform_sine_grid(4));
  const SoundingCodebook cb = sample_codebook(rng, 6, 4, 8, 2);

  const SteeringDictionary bs_bad = build_dictionary(5, uniform_sine_grid(6));
  CHECK_THROWS_AS(sensing_matrix_fast(cb, bs_bad, ms), std::invalid_argument);

  const BlockageMask short_mask = sample_blockage(rng, 5, 1,
                                                  BlockageKind::complete);
  CHECK_THROWS_AS(sensing_matrix_fast(cb, bs, ms, &short_mask, nullptr),
                  std::invalid_argument);

  const CMatrix psi = assemble_psi(cb);
  CHECK_THROWS_AS(sensing_matrix(psi, bs_bad, ms), std::invalid_argument);
}

}  // TEST_SUITE
