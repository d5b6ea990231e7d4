#include "relaycs/impairments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relaycs {

BlockageMask identity_mask(int num_elements) {
  BlockageMask mask;
  mask.coefficients = CVector::Ones(num_elements);
  mask.kind = BlockageKind::mixed;
  return mask;
}

BlockageMask make_mask(int num_elements, std::vector<int> support,
                       const CVector& values, BlockageKind kind) {
  if (values.size() != static_cast<Eigen::Index>(support.size()))
    throw std::invalid_argument("make_mask: support/value length mismatch");
  BlockageMask mask;
  mask.coefficients = CVector::Ones(num_elements);
  mask.kind = kind;
  std::vector<char> seen(static_cast<std::size_t>(num_elements), 0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const int idx = support[static_cast<std::size_t>(i)];
    if (idx < 0 || idx >= num_elements)
      throw std::invalid_argument("make_mask: support index out of range");
    if (seen[static_cast<std::size_t>(idx)])
      throw std::invalid_argument("make_mask: duplicate support index");
    seen[static_cast<std::size_t>(idx)] = 1;
    if (std::abs(values[i]) > 1.0 + 1e-12)
      throw std::invalid_argument("make_mask: |coefficient| > 1");
    mask.coefficients[idx] = values[i];
  }
  mask.support = std::move(support);
  std::sort(mask.support.begin(), mask.support.end());
  return mask;
}

BlockageMask sample_blockage(Rng& rng, int num_elements, int num_blocked,
                             BlockageKind kind) {
  if (num_elements < 1)
    throw std::invalid_argument("sample_blockage: num_elements must be >= 1");
  if (num_blocked < 0 || num_blocked > num_elements)
    throw std::invalid_argument("sample_blockage: num_blocked out of range");
  std::vector<int> support = rng.sample_without_replacement(num_elements, num_blocked);
  CVector values(num_blocked);
  for (int i = 0; i < num_blocked; ++i) {
    switch (kind) {
      case BlockageKind::complete:
        values[i] = Complex(0.0, 0.0);
        break;
      case BlockageKind::partial:
        values[i] = std::polar(rng.uniform(), std::numbers::pi / 4.0);
        break;
      case BlockageKind::mixed:
        values[i] = std::polar(rng.uniform(),
                               rng.uniform(0.0, 2.0 * std::numbers::pi));
        break;
    }
  }
  return make_mask(num_elements, std::move(support), values, kind);
}

CMatrix corrupt_channel(const CMatrix& channel, const BlockageMask& bs_mask,
                        const BlockageMask& ms_mask) {
  if (bs_mask.size() != channel.cols())
    throw std::invalid_argument("corrupt_channel: BS mask length != columns");
  if (ms_mask.size() != channel.rows())
    throw std::invalid_argument("corrupt_channel: MS mask length != rows");
  return ms_mask.coefficients.asDiagonal() * channel *
         bs_mask.coefficients.conjugate().asDiagonal();
}

}  // namespace relaycs
