#include "relaycs/relay_diagnosis.hpp"

#include <algorithm>
#include <cmath>

#include "relaycs/array_geometry.hpp"
#include "relaycs/sounding.hpp"

namespace relaycs {

namespace {

void check_link(const CMatrix& beams, const RelayLink& link) {
  if (link.response.size() == 0) {
    throw std::invalid_argument("relay: link response is empty");
  }
  if (beams.rows() != link.response.size()) {
    throw std::invalid_argument(
        "relay: beam matrix rows do not match the link response length");
  }
}

void check_invertible(const RelayLink& link) {
  for (Eigen::Index i = 0; i < link.response.size(); ++i) {
    if (std::abs(link.response(i)) < 1e-12) {
      throw DegenerateLinkError(
          "relay: link response entry too small to invert");
    }
  }
}

}  // namespace

RelayLink make_relay_link(int n_bs, double aod, double snr_db, double gain,
                          Complex path_gain) {
  RelayLink link;
  link.gain = gain;
  link.path_gain = path_gain;
  link.aod = aod;
  link.response = path_gain * steering_vector(n_bs, aod);
  link.snr_db = snr_db;
  return link;
}

RelayLink sample_relay_link(Rng& rng, int n_bs, double snr_db, double gain,
                            Complex path_gain) {
  const double aod = std::asin(rng.uniform(-1.0, 1.0));
  return make_relay_link(n_bs, aod, snr_db, gain, path_gain);
}

double relay_noise_variance(const RelayLink& link) {
  const double received = link.gain * link.gain * std::norm(link.path_gain) /
                          static_cast<double>(link.num_elements());
  return received * std::pow(10.0, -link.snr_db / 10.0);
}

CVector simulate_relay_measurements(Rng& rng, const CMatrix& beams,
                                    const RelayLink& link,
                                    const BlockageMask& bs_mask) {
  check_link(beams, link);
  if (bs_mask.size() != link.response.size()) {
    throw std::invalid_argument(
        "relay: mask size does not match the link response length");
  }
  const CVector blocked =
      bs_mask.coefficients.cwiseProduct(link.response);  // B_BS h_r
  CVector y = link.gain * (beams.adjoint() * blocked);
  const double sigma = std::sqrt(relay_noise_variance(link));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) += sigma * rng.cnormal();
  }
  return y;
}

Innovation innovation(const CVector& y_star, const CMatrix& beams,
                      const RelayLink& link) {
  check_link(beams, link);
  if (y_star.size() != beams.cols()) {
    throw std::invalid_argument(
        "relay: measurement length does not match the beam count");
  }
  Innovation out;
  out.sensing = link.gain * beams.adjoint();
  out.y_s = y_star - out.sensing * link.response;
  return out;
}

BlockageMask mask_from_innovation(const CVector& g, const RelayLink& link,
                                  const std::vector<int>& support) {
  if (g.size() != link.response.size()) {
    throw std::invalid_argument(
        "relay: innovation length does not match the link response");
  }
  check_invertible(link);
  BlockageMask mask;
  mask.coefficients = CVector::Ones(g.size());
  mask.support = support;
  std::sort(mask.support.begin(), mask.support.end());
  mask.kind = BlockageKind::mixed;
  for (int i : mask.support) {
    if (i < 0 || i >= g.size()) {
      throw std::invalid_argument("relay: support index out of range");
    }
    mask.coefficients(i) = g(i) / link.response(i) + Complex(1.0, 0.0);
  }
  return mask;
}

DiagnosisResult recover_mask(const CVector& y_s, const CMatrix& beams,
                             const RelayLink& link,
                             const DiagnosisConfig& config) {
  check_link(beams, link);
  check_invertible(link);
  if (y_s.size() != beams.cols()) {
    throw std::invalid_argument(
        "relay: innovation length does not match the beam count");
  }

  const CMatrix sensing = link.gain * beams.adjoint();
  const double sigma = std::sqrt(relay_noise_variance(link));
  const double lambda = default_lambda(sensing, y_s, sigma, config.lambda_scale,
                                       config.lambda_max_fraction);

  DiagnosisResult result;
  result.recovery = lasso_solve(sensing, y_s, lambda, config.solver);

  // Shrinkage would bias the inverted coefficients, so always re-fit on the
  // detected support (capped so the re-fit stays overdetermined).
  std::vector<int> support =
      top_magnitude_support(result.recovery.estimate, result.recovery.support,
                            static_cast<int>(sensing.rows()));
  if (support.empty()) {
    result.innovation = CVector::Zero(link.response.size());
  } else {
    // Truncate re-fit directions whose noise pickup (sigma over the
    // orthogonalized column norm) would rival the innovation scale, so an
    // ill-conditioned beam selection degrades gracefully instead of blowing
    // up the inverted coefficients.
    const double mean_col = sensing.colwise().norm().mean();
    const double signal_scale = y_s.norm() / std::max(mean_col, 1e-300);
    const double pivot_floor =
        signal_scale > 0.0 ? 10.0 * sigma / signal_scale : 0.0;
    result.innovation =
        debias_rank_truncated(sensing, y_s, support, pivot_floor);
    support = detect_support(result.innovation, SupportRule::absolute(0.0));
  }
  result.estimated_mask = mask_from_innovation(result.innovation, link, support);
  return result;
}

SupportScore score_success(const BlockageMask& estimated,
                           const BlockageMask& truth) {
  if (estimated.size() != truth.size()) {
    throw std::invalid_argument("score_success: mask sizes differ");
  }
  SupportScore score;
  for (int i : truth.support) {
    if (!std::binary_search(estimated.support.begin(), estimated.support.end(),
                            i)) {
      ++score.missed;
    }
  }
  for (int i : estimated.support) {
    if (!std::binary_search(truth.support.begin(), truth.support.end(), i)) {
      ++score.false_alarm;
    }
  }
  score.success = score.missed == 0 && score.false_alarm == 0;
  return score;
}

DiagnosisResult diagnose(Rng& rng, const CMatrix& beams, const RelayLink& link,
                         const BlockageMask& truth,
                         const DiagnosisConfig& config) {
  const CVector y_star = simulate_relay_measurements(rng, beams, link, truth);
  const Innovation inn = innovation(y_star, beams, link);
  DiagnosisResult result = recover_mask(inn.y_s, beams, link, config);
  const SupportScore score = score_success(result.estimated_mask, truth);
  result.success = score.success;
  result.missed = score.missed;
  result.false_alarm = score.false_alarm;
  return result;
}

}  // namespace relaycs
