#pragma once

#include <vector>

#include "relaycs/array_geometry.hpp"
#include "relaycs/rng.hpp"
#include "relaycs/types.hpp"

namespace relaycs {

/// L scatterer paths: complex gains plus AoD/AoA grid indices. The (aod, aoa)
/// index pairs are pairwise distinct so the sparse coefficient vector has
/// exactly L nonzeros.
struct PathSet {
  CVector gains;
  std::vector<int> aod_indices;
  std::vector<int> aoa_indices;

  int size() const { return static_cast<int>(gains.size()); }
};

struct ChannelRealization {
  PathSet paths;
  CMatrix matrix;        // H, n_ms x n_bs
  CVector sparse_coeffs; // z, length g_bs * g_ms
};

/// Deterministic synthesis of an on-grid channel from given paths:
/// H = sqrt(n_bs*n_ms/L) * sum_l gain_l * a_ms(aoa_l) * a_bs(aod_l)^H.
ChannelRealization channel_from_paths(const PathSet& paths,
                                      const SteeringDictionary& bs_dict,
                                      const SteeringDictionary& ms_dict);

/// Draws gains iid CN(0,1) and distinct (aod, aoa) pairs uniformly over the
/// grid, then synthesizes the channel.
ChannelRealization sample_channel(Rng& rng, int num_paths,
                                  const SteeringDictionary& bs_dict,
                                  const SteeringDictionary& ms_dict);

/// Sparse coefficient vector z of length g_bs*g_ms, entry aod + g_bs*aoa =
/// sqrt(n_bs*n_ms/L) * gain. This layout pairs with the column-stacked
/// vec(H^T) identity used by the sounding operators:
/// vec(H^T) = (A_MS kron conj(A_BS)) * z.
CVector sparse_vector_of(const PathSet& paths,
                         const SteeringDictionary& bs_dict,
                         const SteeringDictionary& ms_dict);

/// Dense channel synthesized from a (not necessarily sparse) coefficient
/// vector in the layout above.
CMatrix channel_of_sparse(const CVector& z, const SteeringDictionary& bs_dict,
                          const SteeringDictionary& ms_dict);

/// Same, for the baseline formulation's layout: entry aoa + g_ms*aod pairs
/// with vec(H) = (conj(A_BS) kron A_MS) * z.
CMatrix channel_of_sparse_baseline(const CVector& z,
                                   const SteeringDictionary& bs_dict,
                                   const SteeringDictionary& ms_dict);

}  // namespace relaycs
