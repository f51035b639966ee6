#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "depcens/cox_fit.hpp"
#include "depcens/data_model.hpp"
#include "depcens/marginal_estimator.hpp"

namespace depcens {

// Finite-difference step for the coefficient-sensitivity estimates. Defaults
// to epsilon_scale * n^(-5/12).
struct PerturbationConfig {
  std::optional<double> epsilon;
  double epsilon_scale = 1.0;

  double resolve_epsilon(std::size_t n) const {
    if (epsilon) return *epsilon;
    return epsilon_scale * std::pow(static_cast<double>(n), -5.0 / 12.0);
  }
};

// The step should be small relative to the bandwidth; returns a message when
// it is not.
std::optional<std::string> perturbation_warning(const PerturbationConfig& pcfg,
                                                const KernelConfig& kcfg, std::size_t n);

// Per-record influence estimates for the fitted working-model coefficients:
// inverse observed information applied to the four-term empirical bracket.
// The role substitutes R vs 1-R and beta vs gamma throughout.
Eigen::VectorXd score_influence(const Dataset& ds, const CoxModelFit& fit, EventRole role,
                                const ObservedRecord& record);

// Precomputed evaluation over a whole sample. Row i is the influence vector
// of record i.
class ScoreInfluenceTable {
 public:
  ScoreInfluenceTable(const SurvivalData& data, const TimeIndex& ti, const CoxModelFit& fit,
                      EventRole role);

  Eigen::VectorXd evaluate(double y, int event, const Eigen::VectorXd& covariates) const;
  const Eigen::MatrixXd& rows() const { return rows_; }

 private:
  Eigen::MatrixXd rows_;
  const TimeIndex* ti_;
  EventRole role_;
  Eigen::VectorXd coef_;
  double shift_;
  std::vector<double> s0_suffix_;          // risk-set kernel-free sums per group
  Eigen::MatrixXd s1_suffix_;              // groups x p
  std::vector<double> a_prefix_;           // prefix of active-count / s0
  Eigen::MatrixXd b_prefix_;               // prefix of active-count * s1 / s0^2
  Eigen::LLT<Eigen::MatrixXd> info_llt_;
};

// Marginal curves recomputed at coefficient perturbations along canonical
// directions; the forward differences estimate the curve's coefficient
// sensitivities.
struct PerturbedCurves {
  double epsilon = 0.0;
  StepFunction base;
  std::vector<StepFunction> beta_curves;   // one per failure-model coordinate
  std::vector<StepFunction> gamma_curves;  // one per censoring-model coordinate

  // (V_beta, V_gamma) at time t.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> derivative_at(double t) const;
};

PerturbedCurves perturbed_curves(const FittedEstimator& est, const PerturbationConfig& pcfg,
                                 int threads = 1);

std::pair<Eigen::VectorXd, Eigen::VectorXd> perturbation_derivative(
    const Dataset& ds, const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& gamma_hat,
    const EstimatorConfig& cfg, const PerturbationConfig& pcfg, double t);

struct InfluenceBundle {
  double t = 0.0;
  std::vector<double> a_values;   // influence estimate per record
  Eigen::VectorXd v_beta;
  Eigen::VectorXd v_gamma;
};

// All fitted quantities the influence assembly needs beyond the estimator
// itself.
struct VarianceState {
  PerturbedCurves curves;
  Eigen::MatrixXd score_t_rows;  // n x p
  Eigen::MatrixXd score_c_rows;  // n x p'
};

VarianceState make_variance_state(const FittedEstimator& est, const PerturbationConfig& pcfg,
                                  int threads = 1);

InfluenceBundle influence_at(const FittedEstimator& est, const VarianceState& state, double t);

struct IntervalEstimate {
  double se = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// se = sqrt(mean(a^2)/n); Wald interval around s_hat clipped to [0, 1].
IntervalEstimate pointwise_se_ci(const InfluenceBundle& bundle, double s_hat, double level);

// Inverse standard normal CDF, |error| < 1e-10 (rational approximation plus
// one Halley refinement); z(0.975) = 1.959964.
double normal_quantile(double p);

}  // namespace depcens
