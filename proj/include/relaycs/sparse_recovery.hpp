#pragma once

#include <stdexcept>
#include <vector>

#include "relaycs/types.hpp"

namespace relaycs {

/// Thrown when a least-squares subproblem is numerically rank deficient.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Threshold rule mapping a solver estimate to a detected support.
struct SupportRule {
  enum class Kind { absolute, relative };
  Kind kind = Kind::relative;
  double value = 0.1;  // tau for absolute, rho (fraction of peak) for relative

  static SupportRule absolute(double tau) {
    return SupportRule{Kind::absolute, tau};
  }
  static SupportRule relative(double rho) {
    return SupportRule{Kind::relative, rho};
  }
};

struct SolverOptions {
  int max_iterations = 2000;
  double tolerance = 1e-8;  // relative objective change at convergence
  SupportRule support_rule = SupportRule::relative(0.1);
  bool track_objective = false;
};

struct RecoveryResult {
  CVector estimate;
  std::vector<int> support;     // { i : |estimate[i]| > threshold }
  int iterations = 0;
  double residual_norm = 0.0;   // ||y - A*estimate||_2 at return
  double lambda = 0.0;
  double threshold = 0.0;
  bool converged = true;
  std::vector<double> objective_trace;  // filled when track_objective is set
};

/// min_x 1/2 ||y - A x||_2^2 + lambda * sum_i |x_i| over complex x, solved by
/// monotone accelerated proximal gradient (complex soft-threshold prox). The
/// step size comes from a power-iteration estimate of ||A||_2^2; rejected
/// steps restart the momentum and, if repeated, inflate the Lipschitz bound.
RecoveryResult lasso_solve(const CMatrix& a, const CVector& y, double lambda,
                           const SolverOptions& options = {});

/// Orthogonal matching pursuit: greedy atom selection by normalized residual
/// correlation with a full least-squares refit per iteration. Stops early
/// once the residual is negligible.
RecoveryResult omp_solve(const CMatrix& a, const CVector& y, int sparsity);

/// Least-squares re-fit restricted to `support`, zeros elsewhere. Throws
/// RankError when the support columns are numerically rank deficient.
CVector debias(const CMatrix& a, const CVector& y,
               const std::vector<int>& support);

/// Like debias, but tolerant of ill-conditioned support columns: the fit is
/// truncated in rank-revealing pivot order, and coefficients of directions
/// whose orthogonalized column norm falls below pivot_floor (or below 1e-9 of
/// the largest pivot) are left at exactly zero instead of being amplified or
/// raising RankError. Passing the per-measurement noise standard deviation as
/// pivot_floor drops exactly the directions that carry less than unit SNR.
CVector debias_rank_truncated(const CMatrix& a, const CVector& y,
                              const std::vector<int>& support,
                              double pivot_floor = 0.0);

std::vector<int> detect_support(const CVector& estimate,
                                const SupportRule& rule);
/// The numeric threshold a rule resolves to for a given estimate.
double support_threshold(const CVector& estimate, const SupportRule& rule);

/// Keeps at most max_size support indices, preferring larger |estimate[i]|
/// (ties keep the lower index). Result is sorted ascending. Callers use this
/// to keep least-squares re-fits overdetermined.
std::vector<int> top_magnitude_support(const CVector& estimate,
                                       const std::vector<int>& support,
                                       int max_size);

/// Regularization default: scale * sigma * (mean column norm) * sqrt(2 ln C),
/// floored at lambda_max_fraction * ||A^H y||_inf so that noiseless problems
/// still get a small positive weight instead of lambda = 0.
double default_lambda(const CMatrix& a, const CVector& y, double noise_std,
                      double scale = 1.0, double lambda_max_fraction = 1e-3);

/// Infinity norm of the first-order optimality residual of the LASSO problem
/// at x: |g_i + lambda*x_i/|x_i|| on the support and max(0, |g_i| - lambda)
/// off it, where g = A^H (A x - y). Zero at an exact minimizer.
double lasso_kkt_residual(const CMatrix& a, const CVector& y, const CVector& x,
                          double lambda);

}  // namespace relaycs
