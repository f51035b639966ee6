#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "depcens/data_model.hpp"

namespace depcens {

// Which working model a computation serves. The failure model weights terms
// by R, the censoring model by 1 - R.
enum class EventRole { failure, censoring };

inline int role_indicator(EventRole role, int event) {
  return role == EventRole::failure ? event : 1 - event;
}

// Columnar sample with one design matrix per working model. The two matrices
// coincide when both models use the same covariates (the Dataset case); they
// differ when the models are built on different covariate sets.
struct SurvivalData {
  std::vector<double> time;
  std::vector<int> event;
  Eigen::MatrixXd design_t;  // n x p, failure model
  Eigen::MatrixXd design_c;  // n x p', censoring model

  std::size_t size() const { return time.size(); }
  const Eigen::MatrixXd& design(EventRole role) const {
    return role == EventRole::failure ? design_t : design_c;
  }
};

SurvivalData make_survival_data(const Dataset& ds);

// Sorted view of the observation times: distinct times ascending, with the
// record ids of each tie group. Risk sets are suffixes of this ordering.
struct TimeIndex {
  std::vector<int> order;        // record ids, time ascending
  std::vector<double> times;     // distinct times ascending
  std::vector<int> group_begin;  // size times.size()+1; group g spans order[group_begin[g], group_begin[g+1])
  std::vector<int> group_of;     // record id -> group index

  static TimeIndex build(const std::vector<double>& time);

  std::size_t group_count() const { return times.size(); }
  // Index of the largest distinct time <= t, or -1 when t precedes all times.
  int group_le(double t) const;
  // Index of the smallest distinct time >= t, or group_count() when t exceeds all times.
  int group_ge(double t) const;
};

struct CoxOptions {
  double tol = 1e-8;   // convergence: gradient max-norm below tol
  int max_iter = 100;
  int max_halvings = 30;
};

struct CoxModelFit {
  Eigen::VectorXd coefficients;
  double log_likelihood = 0.0;
  Eigen::MatrixXd information;  // negative Hessian of the per-sample loglik
  bool converged = false;
  int iterations = 0;
};

// Pseudolog partial likelihood (1/n) sum_i ind_i [beta'L_i - log sum_{Y_j >= Y_i} e^{beta'L_j}]
// with ind = R for the failure role and 1-R for the censoring role. Subjects
// belong to their own risk set; ties enter the risk-set sum whole.
double partial_loglik(const SurvivalData& data, const Eigen::VectorXd& beta, EventRole role);
double partial_loglik(const Dataset& ds, const Eigen::VectorXd& beta, EventRole role);

// Exact analytic gradient and negative Hessian of partial_loglik, both with
// the 1/n factor included.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> partial_score_info(const SurvivalData& data,
                                                               const Eigen::VectorXd& beta,
                                                               EventRole role);
std::pair<Eigen::VectorXd, Eigen::MatrixXd> partial_score_info(const Dataset& ds,
                                                               const Eigen::VectorXd& beta,
                                                               EventRole role);

// Newton-Raphson with step-halving from beta = 0. Returns the last iterate;
// converged is false when max_iter ran out or a step could not improve the
// objective (monotone likelihood). Throws NoEventsForRoleError and
// SingularInformationError.
CoxModelFit fit_cox(const SurvivalData& data, EventRole role, const CoxOptions& opts = {});
CoxModelFit fit_cox(const Dataset& ds, EventRole role, const CoxOptions& opts = {});

}  // namespace depcens
