#include "relaycs/channel_model.hpp"

#include <cmath>
#include <stdexcept>

namespace relaycs {

namespace {

void check_paths(const PathSet& paths, int g_bs, int g_ms) {
  const int num = paths.size();
  if (num < 1) throw std::invalid_argument("PathSet: needs at least one path");
  if (static_cast<int>(paths.aod_indices.size()) != num ||
      static_cast<int>(paths.aoa_indices.size()) != num)
    throw std::invalid_argument("PathSet: index/gain length mismatch");
  for (int l = 0; l < num; ++l) {
    if (paths.aod_indices[l] < 0 || paths.aod_indices[l] >= g_bs)
      throw std::invalid_argument("PathSet: aod index out of range");
    if (paths.aoa_indices[l] < 0 || paths.aoa_indices[l] >= g_ms)
      throw std::invalid_argument("PathSet: aoa index out of range");
    for (int m = 0; m < l; ++m)
      if (paths.aod_indices[m] == paths.aod_indices[l] &&
          paths.aoa_indices[m] == paths.aoa_indices[l])
        throw std::invalid_argument("PathSet: duplicate (aod, aoa) pair");
  }
}

double path_scale(const PathSet& paths, const SteeringDictionary& bs_dict,
                  const SteeringDictionary& ms_dict) {
  return std::sqrt(static_cast<double>(bs_dict.num_elements) *
                   static_cast<double>(ms_dict.num_elements) / paths.size());
}

}  // namespace

ChannelRealization channel_from_paths(const PathSet& paths,
                                      const SteeringDictionary& bs_dict,
                                      const SteeringDictionary& ms_dict) {
  check_paths(paths, bs_dict.grid_size(), ms_dict.grid_size());
  const double scale = path_scale(paths, bs_dict, ms_dict);
  ChannelRealization chan;
  chan.paths = paths;
  chan.matrix = CMatrix::Zero(ms_dict.num_elements, bs_dict.num_elements);
  for (int l = 0; l < paths.size(); ++l) {
    chan.matrix.noalias() += (scale * paths.gains[l]) *
                             ms_dict.matrix.col(paths.aoa_indices[l]) *
                             bs_dict.matrix.col(paths.aod_indices[l]).adjoint();
  }
  chan.sparse_coeffs = sparse_vector_of(paths, bs_dict, ms_dict);
  return chan;
}

ChannelRealization sample_channel(Rng& rng, int num_paths,
                                  const SteeringDictionary& bs_dict,
                                  const SteeringDictionary& ms_dict) {
  const int g_bs = bs_dict.grid_size();
  const int g_ms = ms_dict.grid_size();
  if (num_paths < 1 || num_paths > g_bs * g_ms)
    throw std::invalid_argument("sample_channel: num_paths out of range");
  PathSet paths;
  // Distinct flat indices over the grid product; flat = aod + g_bs * aoa
  // matches the sparse vector layout.
  const std::vector<int> flat = rng.sample_without_replacement(g_bs * g_ms, num_paths);
  paths.gains.resize(num_paths);
  paths.aod_indices.resize(static_cast<std::size_t>(num_paths));
  paths.aoa_indices.resize(static_cast<std::size_t>(num_paths));
  for (int l = 0; l < num_paths; ++l) {
    paths.gains[l] = rng.cnormal();
    paths.aod_indices[static_cast<std::size_t>(l)] = flat[static_cast<std::size_t>(l)] % g_bs;
    paths.aoa_indices[static_cast<std::size_t>(l)] = flat[static_cast<std::size_t>(l)] / g_bs;
  }
  return channel_from_paths(paths, bs_dict, ms_dict);
}

CVector sparse_vector_of(const PathSet& paths, const SteeringDictionary& bs_dict,
                         const SteeringDictionary& ms_dict) {
  const int g_bs = bs_dict.grid_size();
  const int g_ms = ms_dict.grid_size();
  check_paths(paths, g_bs, g_ms);
  const double scale = path_scale(paths, bs_dict, ms_dict);
  CVector z = CVector::Zero(static_cast<Eigen::Index>(g_bs) * g_ms);
  for (int l = 0; l < paths.size(); ++l)
    z[paths.aod_indices[l] + static_cast<Eigen::Index>(g_bs) * paths.aoa_indices[l]] =
        scale * paths.gains[l];
  return z;
}

CMatrix channel_of_sparse(const CVector& z, const SteeringDictionary& bs_dict,
                          const SteeringDictionary& ms_dict) {
  const int g_bs = bs_dict.grid_size();
  const int g_ms = ms_dict.grid_size();
  if (z.size() != static_cast<Eigen::Index>(g_bs) * g_ms)
    throw std::invalid_argument("channel_of_sparse: coefficient length mismatch");
  // H = A_MS * Z * A_BS^H with Z[aoa, aod] = z[aod + g_bs*aoa].
  Eigen::Map<const CMatrix> zt(z.data(), g_bs, g_ms);  // Z^T
  CMatrix left = ms_dict.matrix * zt.transpose();
  return left * bs_dict.matrix.adjoint();
}

CMatrix channel_of_sparse_baseline(const CVector& z,
                                   const SteeringDictionary& bs_dict,
                                   const SteeringDictionary& ms_dict) {
  const int g_bs = bs_dict.grid_size();
  const int g_ms = ms_dict.grid_size();
  if (z.size() != static_cast<Eigen::Index>(g_bs) * g_ms)
    throw std::invalid_argument("channel_of_sparse_baseline: coefficient length mismatch");
  Eigen::Map<const CMatrix> zmat(z.data(), g_ms, g_bs);  // Z[aoa, aod]
  CMatrix left = ms_dict.matrix * zmat;
  return left * bs_dict.matrix.adjoint();
}

}  // namespace relaycs
