#include "relaycs/ms_estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace relaycs {

ChannelEstimate estimate_channel(const MeasurementBatch& batch,
                                 const SoundingCodebook& codebook,
                                 const SteeringDictionary& bs_dict,
                                 const SteeringDictionary& ms_dict,
                                 EstimationRegime regime,
                                 const BlockageMask* bs_mask_estimate,
                                 const EstimatorConfig& config) {
  if (batch.y.size() != codebook.num_beams()) {
    throw std::invalid_argument(
        "estimate_channel: measurement length does not match the codebook");
  }

  CMatrix phi;
  switch (regime) {
    case EstimationRegime::fault_free:
    case EstimationRegime::fault_unaware:
      phi = sensing_matrix_fast(codebook, bs_dict, ms_dict);
      break;
    case EstimationRegime::relay_aided:
      if (bs_mask_estimate == nullptr) {
        throw std::invalid_argument(
            "estimate_channel: relay_aided needs a BS mask estimate");
      }
      phi = sensing_matrix_fast(codebook, bs_dict, ms_dict, bs_mask_estimate);
      break;
    case EstimationRegime::baseline_psi_a:
      phi = baseline_sensing_matrix(codebook, bs_dict, ms_dict);
      break;
  }

  const double sigma = std::sqrt(batch.noise_variance);
  const double lambda = default_lambda(phi, batch.y, sigma, config.lambda_scale,
                                       config.lambda_max_fraction);

  ChannelEstimate out;
  out.recovery = lasso_solve(phi, batch.y, lambda, config.solver);

  const std::vector<int> support =
      top_magnitude_support(out.recovery.estimate, out.recovery.support,
                            static_cast<int>(phi.rows()));
  if (support.empty()) {
    out.recovery.estimate = CVector::Zero(phi.cols());
    out.recovery.support.clear();
    out.recovery.threshold = 0.0;
    out.recovery.residual_norm = batch.y.norm();
  } else {
    const double mean_col = phi.colwise().norm().mean();
    // An unshrunk re-fit of an atom the dictionary can barely separate trades
    // the solver's shrinkage bias for refit noise of roughly sigma over the
    // atom's column norm, a bad trade below a few deviations. Gate the re-fit
    // on the solver magnitude and keep the shrunk value for the rest.
    CVector hybrid = CVector::Zero(phi.cols());
    std::vector<int> strong;
    const double gate = config.refit_gate * sigma / std::max(mean_col, 1e-300);
    for (int i : support) {
      hybrid(i) = out.recovery.estimate(i);
      if (std::abs(out.recovery.estimate(i)) >= gate) strong.push_back(i);
    }
    if (!strong.empty()) {
      // Few-combiner codebooks make sensing columns that share a BS grid
      // index exactly dependent, and masked dictionaries add
      // near-dependencies, so the re-fit also truncates ill-conditioned
      // directions instead of amplifying them. A direction with
      // orthogonalized norm p picks up refit noise of roughly sigma/p; the
      // floor keeps that below a tenth of the signal scale, which ||y|| over
      // the mean column norm estimates.
      const double signal_scale = batch.y.norm() / std::max(mean_col, 1e-300);
      const double pivot_floor =
          signal_scale > 0.0 ? 10.0 * sigma / signal_scale : 0.0;
      const CVector refit =
          debias_rank_truncated(phi, batch.y, strong, pivot_floor);
      for (int i : strong) hybrid(i) = refit(i);
    }
    out.recovery.estimate = std::move(hybrid);
    out.recovery.support =
        detect_support(out.recovery.estimate, SupportRule::absolute(0.0));
    out.recovery.threshold = 0.0;
    out.recovery.residual_norm =
        (batch.y - phi * out.recovery.estimate).norm();
  }

  out.channel = regime == EstimationRegime::baseline_psi_a
                    ? channel_of_sparse_baseline(out.recovery.estimate, bs_dict,
                                                 ms_dict)
                    : channel_of_sparse(out.recovery.estimate, bs_dict,
                                        ms_dict);
  return out;
}

double nmse(const CMatrix& truth, const CMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw std::invalid_argument("nmse: shapes differ");
  }
  const double denom = truth.squaredNorm();
  if (denom == 0.0) {
    throw std::domain_error("nmse: true channel has zero norm");
  }
  return (truth - estimate).squaredNorm() / denom;
}

}  // namespace relaycs
