#pragma once

#include <vector>

#include "relaycs/rng.hpp"
#include "relaycs/types.hpp"

namespace relaycs {

/// complete: blocked elements are fully absorbed (b_i = 0).
/// partial:  blocked elements keep a uniform magnitude but a fixed pi/4
///           phase shift (the fault-detection study's second scenario).
/// mixed:    magnitude ~ U[0,1] and phase ~ U[0,2*pi) (the NMSE studies).
enum class BlockageKind { complete, partial, mixed };

/// Diagonal per-element fault coefficients. Unblocked elements are exactly 1;
/// blocked elements have |b_i| <= 1.
struct BlockageMask {
  CVector coefficients;
  std::vector<int> support;  // blocked element indices, ascending
  BlockageKind kind = BlockageKind::mixed;

  int size() const { return static_cast<int>(coefficients.size()); }
  bool is_identity() const { return support.empty(); }
};

BlockageMask identity_mask(int num_elements);

/// Mask with the given blocked indices and coefficients (one per index).
BlockageMask make_mask(int num_elements, std::vector<int> support,
                       const CVector& values, BlockageKind kind);

/// Uniformly chosen fault support of size `num_blocked`, coefficients drawn
/// per `kind`.
BlockageMask sample_blockage(Rng& rng, int num_elements, int num_blocked,
                             BlockageKind kind);

/// Faulty channel: H_hat = B_MS * H * B_BS^H, i.e. entry (r, c) scaled by
/// b_ms[r] * conj(b_bs[c]).
CMatrix corrupt_channel(const CMatrix& channel, const BlockageMask& bs_mask,
                        const BlockageMask& ms_mask);

}  // namespace relaycs
