#pragma once

#include "relaycs/array_geometry.hpp"
#include "relaycs/channel_model.hpp"
#include "relaycs/impairments.hpp"
#include "relaycs/sounding.hpp"
#include "relaycs/sparse_recovery.hpp"
#include "relaycs/types.hpp"

namespace relaycs {

/// Which sensing operator the MS builds for recovery. The measurement data
/// itself always comes from the caller; regimes differ only in the operator
/// model (and, for the baseline, the sounding layout).
enum class EstimationRegime {
  fault_free,     // ideal operator, data from a fault-free channel
  fault_unaware,  // ideal operator, data from a corrupted channel (mismatch)
  relay_aided,    // operator corrected with the relay's estimated BS mask
  baseline_psi_a  // prior-art operator/formulation, fault-free data
};

inline SolverOptions estimator_solver_defaults() {
  SolverOptions options;
  // Keep weak paths: channel recovery is scored by NMSE, not exact support,
  // so the cutoff sits far below the diagnosis default.
  options.support_rule = SupportRule::relative(1e-3);
  return options;
}

struct EstimatorConfig {
  SolverOptions solver = estimator_solver_defaults();
  double lambda_scale = 1.0;
  double lambda_max_fraction = 1e-3;
  // A support atom is re-fit without shrinkage only when its solver magnitude
  // exceeds this many per-atom refit noise deviations (sigma over the mean
  // column norm); weaker atoms keep their shrunk values, which beats an
  // unregularized fit of coefficients that noise can explain. Zero noise makes
  // the gate vanish, so noiseless recovery still re-fits the whole support.
  double refit_gate = 3.0;
};

struct ChannelEstimate {
  CMatrix channel;          // n_ms x n_bs reconstruction
  RecoveryResult recovery;  // debiased sparse estimate + diagnostics
};

/// Recover the sparse coefficients from a measurement batch with the
/// regime's sensing matrix, re-fit the atoms that clear the refit gate on the
/// detected support, and synthesize the channel estimate. relay_aided
/// requires `bs_mask_estimate`.
ChannelEstimate estimate_channel(const MeasurementBatch& batch,
                                 const SoundingCodebook& codebook,
                                 const SteeringDictionary& bs_dict,
                                 const SteeringDictionary& ms_dict,
                                 EstimationRegime regime,
                                 const BlockageMask* bs_mask_estimate = nullptr,
                                 const EstimatorConfig& config = {});

/// ||truth - estimate||_F^2 / ||truth||_F^2.
double nmse(const CMatrix& truth, const CMatrix& estimate);

}  // namespace relaycs
