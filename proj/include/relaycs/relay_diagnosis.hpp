#pragma once

#include <stdexcept>
#include <vector>

#include "relaycs/impairments.hpp"
#include "relaycs/rng.hpp"
#include "relaycs/sparse_recovery.hpp"
#include "relaycs/types.hpp"

namespace relaycs {

/// Thrown when a relay response entry is too small to invert.
struct DegenerateLinkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Line-of-sight BS-relay link. The relay knows the fault-free response and
/// the link SNR.
struct RelayLink {
  double gain = 1.0;                    // gamma
  Complex path_gain = Complex(1.0, 0.0);  // alpha_r
  double aod = 0.0;                     // phi_r, radians
  CVector response;                     // h_r = alpha_r * a_BS(phi_r)
  double snr_db = 30.0;

  int num_elements() const { return static_cast<int>(response.size()); }
};

RelayLink make_relay_link(int n_bs, double aod, double snr_db,
                          double gain = 1.0,
                          Complex path_gain = Complex(1.0, 0.0));

/// Link with a uniformly random spatial direction (sin(aod) ~ U[-1, 1)).
RelayLink sample_relay_link(Rng& rng, int n_bs, double snr_db,
                            double gain = 1.0,
                            Complex path_gain = Complex(1.0, 0.0));

/// Per-measurement noise power at the relay: the average received power over
/// the beam alphabet is gain^2 |alpha_r|^2 / N_BS, so that times 10^(-snr/10).
double relay_noise_variance(const RelayLink& link);

/// Relay-side snapshots of the BS sounding beams:
/// y* = gain * P^H * B_BS * h_r + eps, eps iid CN(0, sigma_r^2).
CVector simulate_relay_measurements(Rng& rng, const CMatrix& beams,
                                    const RelayLink& link,
                                    const BlockageMask& bs_mask);

/// Innovation y_s = y* - gain * P^H * h_r together with the sensing operator
/// gain * P^H, so that y_s = sensing * g + eps with g = (B_BS - I) h_r.
struct Innovation {
  CVector y_s;
  CMatrix sensing;
};

Innovation innovation(const CVector& y_star, const CMatrix& beams,
                      const RelayLink& link);

struct DiagnosisConfig {
  SolverOptions solver;  // default support rule: relative, rho = 0.1
  double lambda_scale = 1.0;
  double lambda_max_fraction = 1e-3;
};

struct DiagnosisResult {
  BlockageMask estimated_mask;
  CVector innovation;      // debiased estimate of g, zeros off the support
  bool success = false;    // filled by score_success / diagnose
  int missed = 0;
  int false_alarm = 0;
  RecoveryResult recovery;  // raw solver diagnostics
};

/// Element-wise inversion b_i = g_i / h_r[i] + 1 on `support`, 1 elsewhere.
BlockageMask mask_from_innovation(const CVector& g, const RelayLink& link,
                                  const std::vector<int>& support);

/// Sparse-recover g from the innovation, debias it, and invert to the mask
/// estimate. Entries of h_r below 1e-12 modulus raise DegenerateLinkError.
DiagnosisResult recover_mask(const CVector& y_s, const CMatrix& beams,
                             const RelayLink& link,
                             const DiagnosisConfig& config = {});

struct SupportScore {
  bool success = false;  // estimated support == true support, exactly
  int missed = 0;
  int false_alarm = 0;
};

SupportScore score_success(const BlockageMask& estimated,
                           const BlockageMask& truth);

/// Full diagnosis round: simulate the relay snapshots for `truth`, form the
/// innovation, recover the mask, and score it against the truth.
DiagnosisResult diagnose(Rng& rng, const CMatrix& beams, const RelayLink& link,
                         const BlockageMask& truth,
                         const DiagnosisConfig& config = {});

}  // namespace relaycs
