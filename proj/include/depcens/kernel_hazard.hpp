#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <vector>

#include "depcens/cox_fit.hpp"
#include "depcens/data_model.hpp"

namespace depcens {

enum class KernelType { gaussian2d };

// Two-dimensional smoothing configuration. The bandwidth defaults to
// bandwidth_scale * n^(-1/3) when not given explicitly.
struct KernelConfig {
  std::optional<double> bandwidth;
  double bandwidth_scale = 1.0;
  KernelType kernel = KernelType::gaussian2d;

  double resolve_bandwidth(std::size_t n) const {
    if (bandwidth) return *bandwidth;
    return bandwidth_scale * std::pow(static_cast<double>(n), -1.0 / 3.0);
  }
};

// K(x1, x2) = exp(-(x1^2 + x2^2)); symmetric, maximum 1 at the origin.
double kernel_eval(const KernelConfig& cfg, double x1, double x2);

// Per-record reduced covariates (beta'L_i, gamma'L_i).
struct ReducedCovariates {
  std::vector<double> z1;  // beta' L
  std::vector<double> z2;  // gamma' L

  std::size_t size() const { return z1.size(); }
};

ReducedCovariates reduce_covariates(const SurvivalData& data, const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& gamma);
ReducedCovariates reduce_covariates(const Dataset& ds, const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& gamma);

// Kernel-weighted conditional cumulative hazard at the point z:
//   H(y|z) = sum_{Y_j <= y, active j} K((Z_j - z)/a) / sum_{Y_m >= Y_j} K((Z_m - z)/a),
// active meaning R_j = 1 (failure role) or R_j = 0 (censoring role). Tied
// times contribute one aggregated jump.
StepFunction cond_cum_hazard(const SurvivalData& data, const ReducedCovariates& z_all,
                             std::pair<double, double> z, const KernelConfig& cfg,
                             EventRole role);
StepFunction cond_cum_hazard(const Dataset& ds, const ReducedCovariates& z_all,
                             std::pair<double, double> z, const KernelConfig& cfg,
                             EventRole role);

// Product-limit transform S(t) = prod_{s <= t} (1 - dH(s)). Factors below
// zero clamp the curve to 0, which then stays frozen.
StepFunction cond_survival(const StepFunction& cum_hazard);

namespace detail {

// Both-role conditional hazards sharing one set of kernel weights.
// u2[j] holds the squared scaled distance ((Z_j - z)/a)^2 summed over the two
// coordinates; weights are exp(-u2[j]), accumulated with a running shift so
// that far-away evaluation points cannot underflow every risk-set sum.
struct HazardPair {
  StepFunction failure;
  StepFunction censoring;
};

HazardPair cond_hazards_both(const TimeIndex& ti, const std::vector<int>& event,
                             const std::vector<double>& u2);

// Squared scaled distances from z to every reduced covariate.
std::vector<double> scaled_sq_distances(const ReducedCovariates& z_all,
                                        std::pair<double, double> z, double bandwidth);

}  // namespace detail

}  // namespace depcens
