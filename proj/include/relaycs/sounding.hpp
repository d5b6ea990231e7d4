#pragma once

#include "relaycs/array_geometry.hpp"
#include "relaycs/impairments.hpp"
#include "relaycs/rng.hpp"
#include "relaycs/types.hpp"

namespace relaycs {

/// Downlink training codebook. The BS sends one beam per snapshot; the MS
/// holds each combiner for M = num_beams / num_combiners consecutive
/// snapshots (combiner-major snapshot order throughout).
struct SoundingCodebook {
  CMatrix beams;      // P, n_bs x m_bs
  CMatrix combiners;  // Q, n_ms x m_ms

  int num_beams() const { return static_cast<int>(beams.cols()); }
  int num_combiners() const { return static_cast<int>(combiners.cols()); }
  int snapshots_per_combiner() const { return num_beams() / num_combiners(); }
};

/// Matrix with iid entries from {1, -1, j, -j} / sqrt(num_elements), so every
/// column has unit norm.
CMatrix sample_beam_matrix(Rng& rng, int num_elements, int count);

SoundingCodebook sample_codebook(Rng& rng, int n_bs, int n_ms, int m_bs,
                                 int m_ms);

/// Stacked measurement operator: block m (rows m*M .. m*M+M-1) equals
/// q_m^H kron P_m^T, acting on the column-stacked vec(H^T).
CMatrix assemble_psi(const SoundingCodebook& codebook);

/// Prior-art operator P_1^T kron Q^H: the first beam group repeated for every
/// combiner, acting on the column-stacked vec(H). Row m + m_ms*n carries
/// combiner m and beam n.
CMatrix assemble_psi_baseline(const SoundingCodebook& codebook);

/// A_MS kron conj(A_BS), mapping the sparse coefficient layout of
/// sparse_vector_of onto vec(H^T).
CMatrix dictionary_operator(const SteeringDictionary& bs_dict,
                            const SteeringDictionary& ms_dict);

/// conj(A_BS) kron A_MS, the baseline formulation's counterpart for vec(H).
CMatrix baseline_dictionary_operator(const SteeringDictionary& bs_dict,
                                     const SteeringDictionary& ms_dict);

/// CS sensing matrix Phi = Psi * diag(b_ms kron conj(b_bs)) * dictionary
/// operator, m_bs x (g_bs*g_ms). Null masks mean identity (fault-free Phi).
/// Reference route that multiplies the dense factors; quadratic in the array
/// sizes, intended for validation and small problems.
CMatrix sensing_matrix(const CMatrix& psi, const SteeringDictionary& bs_dict,
                       const SteeringDictionary& ms_dict,
                       const BlockageMask* bs_mask = nullptr,
                       const BlockageMask* ms_mask = nullptr);

/// Same matrix built from the codebook via the Kronecker factorization
/// Phi[(m,n), (g_ms,g_bs)] = (q_m^H B_MS a_ms) * (p_n^T conj(B_BS a_bs)).
/// One pass over the output; this is the production kernel.
CMatrix sensing_matrix_fast(const SoundingCodebook& codebook,
                            const SteeringDictionary& bs_dict,
                            const SteeringDictionary& ms_dict,
                            const BlockageMask* bs_mask = nullptr,
                            const BlockageMask* ms_mask = nullptr);

/// Fault-free baseline sensing matrix Psi_A * (conj(A_BS) kron A_MS), built
/// via the same factorization.
CMatrix baseline_sensing_matrix(const SoundingCodebook& codebook,
                                const SteeringDictionary& bs_dict,
                                const SteeringDictionary& ms_dict);

struct MeasurementBatch {
  CVector y;
  double noise_variance = 0.0;  // sigma^2 per combined sample
  double snr_db = 0.0;
};

/// sigma^2 for a requested SNR under the unit conventions used here
/// (unit-norm steering columns, beams and combiners): the ensemble-average
/// combined signal power E|q^H H p|^2 is exactly 1, so sigma^2 = 10^(-snr/10).
double noise_variance_for_snr_db(double snr_db);

/// Noisy downlink snapshots y[m*M + n] = q_m^H H p_{m*M+n} + q_m^H e, with
/// e iid CN(0, sigma^2 I) per snapshot (combined noise CN(0, sigma^2 |q_m|^2)).
MeasurementBatch simulate_measurements(Rng& rng,
                                       const SoundingCodebook& codebook,
                                       const CMatrix& h_effective,
                                       double snr_db);

/// Snapshots for the baseline sounding pattern (first beam group repeated per
/// combiner), row layout matching assemble_psi_baseline.
MeasurementBatch simulate_baseline_measurements(Rng& rng,
                                                const SoundingCodebook& codebook,
                                                const CMatrix& h_effective,
                                                double snr_db);

}  // namespace relaycs
