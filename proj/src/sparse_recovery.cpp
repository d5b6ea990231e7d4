#include "relaycs/sparse_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>

#include "relaycs/rng.hpp"

namespace relaycs {

namespace {

void check_system(const CMatrix& a, const CVector& y, const char* where) {
  if (a.rows() != y.size()) {
    throw std::invalid_argument(std::string(where) +
                                ": row count does not match the measurement "
                                "vector");
  }
}

/// Largest eigenvalue of A^H A by power iteration (fixed internal seed, so
/// the solver stays deterministic), within ~1e-4 relative accuracy.
double squared_spectral_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Rng rng(0x9e3779b97f4a7c15ull);
  CVector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
  const double vn = v.norm();
  if (vn == 0.0) {
    v.setOnes();
  } else {
    v /= vn;
  }
  double estimate = 0.0;
  for (int it = 0; it < 100; ++it) {
    CVector w = a.adjoint() * (a * v);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (it > 0 && std::abs(wn - estimate) <= 1e-4 * wn) return wn;
    estimate = wn;
  }
  return estimate;
}

Complex soft_threshold(Complex v, double t) {
  const double m = std::abs(v);
  if (m <= t) return Complex(0.0, 0.0);
  return v * ((m - t) / m);
}

double lasso_objective(const CVector& residual, const CVector& x,
                       double lambda) {
  return 0.5 * residual.squaredNorm() + lambda * x.cwiseAbs().sum();
}

}  // namespace

double support_threshold(const CVector& estimate, const SupportRule& rule) {
  if (rule.kind == SupportRule::Kind::absolute) return rule.value;
  const double peak =
      estimate.size() > 0 ? estimate.cwiseAbs().maxCoeff() : 0.0;
  return rule.value * peak;
}

std::vector<int> detect_support(const CVector& estimate,
                                const SupportRule& rule) {
  const double threshold = support_threshold(estimate, rule);
  std::vector<int> support;
  for (Eigen::Index i = 0; i < estimate.size(); ++i) {
    if (std::abs(estimate(i)) > threshold) {
      support.push_back(static_cast<int>(i));
    }
  }
  return support;
}

std::vector<int> top_magnitude_support(const CVector& estimate,
                                       const std::vector<int>& support,
                                       int max_size) {
  if (max_size < 0) {
    throw std::invalid_argument("top_magnitude_support: max_size must be >= 0");
  }
  if (static_cast<int>(support.size()) <= max_size) return support;
  std::vector<int> kept = support;
  std::stable_sort(kept.begin(), kept.end(), [&](int lhs, int rhs) {
    return std::abs(estimate(lhs)) > std::abs(estimate(rhs));
  });
  kept.resize(static_cast<size_t>(max_size));
  std::sort(kept.begin(), kept.end());
  return kept;
}

RecoveryResult lasso_solve(const CMatrix& a, const CVector& y, double lambda,
                           const SolverOptions& options) {
  check_system(a, y, "lasso_solve");
  if (lambda < 0.0) {
    throw std::invalid_argument("lasso_solve: lambda must be >= 0");
  }
  RecoveryResult result;
  result.lambda = lambda;

  const Eigen::Index n = a.cols();
  if (n == 0) {
    result.estimate.resize(0);
    result.residual_norm = y.norm();
    result.threshold = support_threshold(result.estimate, options.support_rule);
    return result;
  }

  double lipschitz = 1.05 * squared_spectral_norm(a);
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) lipschitz = 1.0;

  // Monotone accelerated proximal gradient. x is the best iterate so far,
  // w the extrapolated point; the matrix only ever enters through one adjoint
  // and one forward product per iteration (products of accepted iterates are
  // carried along as linear combinations).
  CVector x = CVector::Zero(n);
  CVector ax = CVector::Zero(y.size());
  CVector w = x;
  CVector aw = ax;
  double fx = lasso_objective(y, x, lambda);  // residual at x=0 is y
  double t = 1.0;
  int reject_streak = 0;

  if (options.track_objective) result.objective_trace.push_back(fx);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;

    const CVector grad = a.adjoint() * (aw - y);
    CVector z = w - grad / lipschitz;
    const double shrink = lambda / lipschitz;
    for (Eigen::Index i = 0; i < n; ++i) z(i) = soft_threshold(z(i), shrink);
    const CVector az = a * z;
    const double fz = lasso_objective(az - y, z, lambda);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));

    if (fz <= fx) {
      reject_streak = 0;
      const double ratio = (t - 1.0) / t_next;
      w = z + ratio * (z - x);
      aw = az + ratio * (az - ax);
      const double drop = fx - fz;
      x = z;
      ax = az;
      fx = fz;
      t = t_next;
      if (options.track_objective) result.objective_trace.push_back(fx);
      if (drop <= options.tolerance * std::max(1.0, fx)) {
        result.converged = true;
        break;
      }
    } else {
      // The quadratic model failed (step too long): restart the momentum and,
      // on repeat, inflate the Lipschitz estimate.
      if (options.track_objective) result.objective_trace.push_back(fx);
      w = x;
      aw = ax;
      t = 1.0;
      if (++reject_streak >= 2) {
        lipschitz *= 1.5;
        reject_streak = 0;
      }
      result.converged = false;
      continue;
    }
    result.converged = false;
  }
  // A clean exhaustion of max_iterations leaves converged false; a break out
  // of the loop leaves it true.

  result.estimate = std::move(x);
  result.residual_norm = (ax - y).norm();
  result.threshold = support_threshold(result.estimate, options.support_rule);
  result.support = detect_support(result.estimate, options.support_rule);
  return result;
}

RecoveryResult omp_solve(const CMatrix& a, const CVector& y, int sparsity) {
  check_system(a, y, "omp_solve");
  const Eigen::Index n = a.cols();
  if (sparsity < 1 || sparsity > n) {
    throw std::invalid_argument("omp_solve: sparsity must lie in [1, cols]");
  }

  const RVector column_norms = a.colwise().norm();
  CVector residual = y;
  std::vector<int> selected;
  std::vector<char> used(static_cast<size_t>(n), 0);
  CMatrix sub(a.rows(), sparsity);
  CVector coeffs;
  const double stop = 1e-12 * std::max(1.0, y.norm());

  for (int it = 0; it < sparsity; ++it) {
    if (residual.norm() <= stop) break;
    const CVector corr = a.adjoint() * residual;
    int best = -1;
    double best_value = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[static_cast<size_t>(i)] || column_norms(i) == 0.0) continue;
      const double value = std::abs(corr(i)) / column_norms(i);
      if (value > best_value) {
        best_value = value;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    used[static_cast<size_t>(best)] = 1;
    selected.push_back(best);
    sub.col(it) = a.col(best);

    Eigen::ColPivHouseholderQR<CMatrix> qr(sub.leftCols(it + 1));
    if (qr.rank() < it + 1) {
      throw RankError("omp_solve: selected atoms are numerically rank "
                      "deficient");
    }
    coeffs = qr.solve(y);
    residual = y - sub.leftCols(it + 1) * coeffs;
  }

  RecoveryResult result;
  result.estimate = CVector::Zero(n);
  for (size_t k = 0; k < selected.size(); ++k) {
    result.estimate(selected[k]) = coeffs(static_cast<Eigen::Index>(k));
  }
  result.iterations = static_cast<int>(selected.size());
  result.residual_norm = residual.norm();
  result.threshold = 0.0;
  result.support = detect_support(result.estimate, SupportRule::absolute(0.0));
  result.converged = true;
  return result;
}

namespace {

CMatrix support_submatrix(const CMatrix& a, const CVector& y,
                          const std::vector<int>& support) {
  check_system(a, y, "debias");
  if (support.empty()) {
    throw std::invalid_argument("debias: support must be non-empty");
  }
  if (static_cast<Eigen::Index>(support.size()) > a.rows()) {
    throw std::invalid_argument(
        "debias: support is larger than the measurement count");
  }
  std::vector<char> seen(static_cast<size_t>(a.cols()), 0);
  CMatrix sub(a.rows(), static_cast<Eigen::Index>(support.size()));
  for (size_t k = 0; k < support.size(); ++k) {
    const int i = support[k];
    if (i < 0 || i >= a.cols()) {
      throw std::invalid_argument("debias: support index out of range");
    }
    if (seen[static_cast<size_t>(i)]) {
      throw std::invalid_argument("debias: duplicate support index");
    }
    seen[static_cast<size_t>(i)] = 1;
    sub.col(static_cast<Eigen::Index>(k)) = a.col(i);
  }
  return sub;
}

}  // namespace

CVector debias(const CMatrix& a, const CVector& y,
               const std::vector<int>& support) {
  const CMatrix sub = support_submatrix(a, y, support);
  Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
  if (qr.rank() < static_cast<Eigen::Index>(support.size())) {
    throw RankError("debias: support columns are numerically rank deficient");
  }
  const CVector coeffs = qr.solve(y);

  CVector out = CVector::Zero(a.cols());
  for (size_t k = 0; k < support.size(); ++k) {
    out(support[k]) = coeffs(static_cast<Eigen::Index>(k));
  }
  return out;
}

CVector debias_rank_truncated(const CMatrix& a, const CVector& y,
                              const std::vector<int>& support,
                              double pivot_floor) {
  if (pivot_floor < 0.0) {
    throw std::invalid_argument(
        "debias_rank_truncated: pivot_floor must be >= 0");
  }
  const CMatrix sub = support_submatrix(a, y, support);
  const Eigen::Index k = sub.cols();
  const Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
  const auto& factor = qr.matrixQR();

  // Column-pivoted Householder leaves |R(i,i)| non-increasing, so the kept
  // rank is the first diagonal entry at or below the floor. The relative term
  // guards against pivots at roundoff scale even when pivot_floor is zero
  // (Eigen's own solve() would happily invert those).
  const double floor = std::max(pivot_floor, 1e-9 * qr.maxPivot());
  Eigen::Index rank = 0;
  while (rank < k && std::abs(factor(rank, rank)) > floor) ++rank;

  CVector out = CVector::Zero(a.cols());
  if (rank == 0) return out;

  CVector head = (qr.householderQ().adjoint() * y).head(rank);
  factor.topLeftCorner(rank, rank)
      .triangularView<Eigen::Upper>()
      .solveInPlace(head);
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < rank; ++i) {
    out(support[static_cast<size_t>(perm(i))]) = head(i);
  }
  return out;
}

double default_lambda(const CMatrix& a, const CVector& y, double noise_std,
                      double scale, double lambda_max_fraction) {
  check_system(a, y, "default_lambda");
  if (noise_std < 0.0) {
    throw std::invalid_argument("default_lambda: noise_std must be >= 0");
  }
  if (a.cols() == 0) return 0.0;
  const double mean_norm = a.colwise().norm().mean();
  const double universal =
      scale * noise_std * mean_norm *
      std::sqrt(2.0 * std::log(static_cast<double>(a.cols())));
  const double lambda_max = (a.adjoint() * y).cwiseAbs().maxCoeff();
  return std::max(universal, lambda_max_fraction * lambda_max);
}

double lasso_kkt_residual(const CMatrix& a, const CVector& y, const CVector& x,
                          double lambda) {
  check_system(a, y, "lasso_kkt_residual");
  if (a.cols() != x.size()) {
    throw std::invalid_argument(
        "lasso_kkt_residual: estimate length does not match the columns");
  }
  const CVector g = a.adjoint() * (a * x - y);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double m = std::abs(x(i));
    const double r = m > 0.0
                         ? std::abs(g(i) + lambda * x(i) / m)
                         : std::max(0.0, std::abs(g(i)) - lambda);
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace relaycs
