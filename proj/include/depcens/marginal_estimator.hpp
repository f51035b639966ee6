#pragma once

#include <Eigen/Core>
#include <vector>

#include "depcens/cox_fit.hpp"
#include "depcens/data_model.hpp"
#include "depcens/kernel_hazard.hpp"

namespace depcens {

struct EstimatorConfig {
  KernelConfig kernel;
  std::vector<double> grid;  // reporting times, sorted, within [0, tau]
  CoxOptions cox;
};

// Builds the default reporting grid (i-1)*tau/count, i = 1..count.
std::vector<double> default_grid(double tau, int count = 50);

struct SurvivalCurve {
  StepFunction survival;  // initial value 1, nonincreasing, in [0, 1]
  std::size_t n = 0;
  Eigen::VectorXd coefficients_t;  // fitted beta (empty for Kaplan-Meier)
  Eigen::VectorXd coefficients_c;  // fitted gamma (empty for Kaplan-Meier)
};

// Everything one estimation pass produces; the variance machinery consumes
// the per-record conditional hazards and the fits.
struct FittedEstimator {
  SurvivalData data;
  TimeIndex time_index;
  KernelConfig kernel;
  double bandwidth = 0.0;
  CoxModelFit fit_t;
  CoxModelFit fit_c;
  ReducedCovariates z;
  SurvivalCurve curve;
  std::vector<StepFunction> hazard_t;  // H_T(.|Z_i) per record
  std::vector<StepFunction> hazard_c;  // H_C(.|Z_i) per record
};

// Full pipeline: fit both working models, reduce covariates, average the
// kernel product-limit conditional survivals over the sample. Throws
// NotConvergedError when either fit fails to converge.
FittedEstimator fit_estimator(const SurvivalData& data, const EstimatorConfig& cfg,
                              bool keep_hazards = true, int threads = 1);

SurvivalCurve estimate_survival(const Dataset& ds, const EstimatorConfig& cfg);
SurvivalCurve estimate_survival(const SurvivalData& data, const EstimatorConfig& cfg);

// Same pipeline with the Cox fits skipped and (beta, gamma) used verbatim.
SurvivalCurve survival_at_fixed_coeffs(const Dataset& ds, const Eigen::VectorXd& beta,
                                       const Eigen::VectorXd& gamma, const EstimatorConfig& cfg);
SurvivalCurve survival_at_fixed_coeffs(const SurvivalData& data, const Eigen::VectorXd& beta,
                                       const Eigen::VectorXd& gamma, const EstimatorConfig& cfg);

// Marginal curve for given reduced covariates; the shared core of the
// estimators above.
StepFunction marginal_curve(const SurvivalData& data, const TimeIndex& ti,
                            const ReducedCovariates& z, double bandwidth, int threads = 1);

// Product-limit estimator with tied event times aggregated.
SurvivalCurve kaplan_meier(const Dataset& ds);
SurvivalCurve kaplan_meier(const SurvivalData& data);

// Kaplan-Meier with the Greenwood cumulative variance sum
// V(t) = sum_{s <= t} d_s / (m_s (m_s - d_s)); se(t) = S(t) sqrt(V(t)).
struct KaplanMeierGreenwood {
  SurvivalCurve curve;
  StepFunction greenwood_cumvar;
  double se(double t) const;
};

KaplanMeierGreenwood kaplan_meier_greenwood(const SurvivalData& data);

}  // namespace depcens
