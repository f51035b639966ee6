#include "depcens/marginal_estimator.hpp"

#include <algorithm>
#include <cmath>

#include "depcens/parallel.hpp"

namespace depcens {

std::vector<double> default_grid(double tau, int count) {
  std::vector<double> grid(count);
  for (int i = 1; i <= count; ++i) grid[i - 1] = (i - 1) * tau / count;
  return grid;
}

namespace {

void check_bandwidth(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error("bandwidth must be positive and finite");
}

// Conditional survival values at the failure-time groups for one evaluation
// point, as a dense row aligned with `failure_groups`.
void conditional_survival_row(const TimeIndex& ti, const std::vector<int>& event,
                              const std::vector<double>& u2,
                              const std::vector<int>& failure_groups, std::vector<double>& row) {
  const detail::HazardPair hp = detail::cond_hazards_both(ti, event, u2);
  const StepFunction surv = cond_survival(hp.failure);
  // hp.failure has exactly one jump per failure group, in ascending order.
  for (std::size_t k = 0; k < failure_groups.size(); ++k) row[k] = surv.jump_values[k];
}

}  // namespace

StepFunction marginal_curve(const SurvivalData& data, const TimeIndex& ti,
                            const ReducedCovariates& z, double bandwidth, int threads) {
  check_bandwidth(bandwidth);
  const std::size_t n = data.size();

  std::vector<int> failure_groups;
  for (std::size_t g = 0; g < ti.group_count(); ++g) {
    for (int pos = ti.group_begin[g]; pos < ti.group_begin[g + 1]; ++pos)
      if (data.event[ti.order[pos]] == 1) {
        failure_groups.push_back(static_cast<int>(g));
        break;
      }
  }

  // Per-record conditional curves are stored, then reduced in record order so
  // the result does not depend on the thread count.
  std::vector<std::vector<double>> rows(n, std::vector<double>(failure_groups.size()));
  parallel_for(n, threads, [&](std::size_t i) {
    const auto u2 = detail::scaled_sq_distances(z, {z.z1[i], z.z2[i]}, bandwidth);
    conditional_survival_row(ti, data.event, u2, failure_groups, rows[i]);
  });

  StepFunction curve;
  curve.initial_value = 1.0;
  curve.jump_times.resize(failure_groups.size());
  curve.jump_values.assign(failure_groups.size(), 0.0);
  for (std::size_t k = 0; k < failure_groups.size(); ++k)
    curve.jump_times[k] = ti.times[failure_groups[k]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < failure_groups.size(); ++k) curve.jump_values[k] += rows[i][k];
  for (auto& v : curve.jump_values) v /= static_cast<double>(n);
  return curve;
}

FittedEstimator fit_estimator(const SurvivalData& data, const EstimatorConfig& cfg,
                              bool keep_hazards, int threads) {
  FittedEstimator est;
  est.data = data;
  est.time_index = TimeIndex::build(data.time);
  est.kernel = cfg.kernel;
  est.bandwidth = cfg.kernel.resolve_bandwidth(data.size());
  check_bandwidth(est.bandwidth);

  est.fit_t = fit_cox(data, EventRole::failure, cfg.cox);
  if (!est.fit_t.converged) throw NotConvergedError("failure working model did not converge");
  est.fit_c = fit_cox(data, EventRole::censoring, cfg.cox);
  if (!est.fit_c.converged) throw NotConvergedError("censoring working model did not converge");

  est.z = reduce_covariates(data, est.fit_t.coefficients, est.fit_c.coefficients);
  est.curve.survival = marginal_curve(data, est.time_index, est.z, est.bandwidth, threads);
  est.curve.n = data.size();
  est.curve.coefficients_t = est.fit_t.coefficients;
  est.curve.coefficients_c = est.fit_c.coefficients;

  if (keep_hazards) {
    const std::size_t n = data.size();
    est.hazard_t.resize(n);
    est.hazard_c.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
      const auto u2 =
          detail::scaled_sq_distances(est.z, {est.z.z1[i], est.z.z2[i]}, est.bandwidth);
      detail::HazardPair hp = detail::cond_hazards_both(est.time_index, data.event, u2);
      est.hazard_t[i] = std::move(hp.failure);
      est.hazard_c[i] = std::move(hp.censoring);
    });
  }
  return est;
}

SurvivalCurve estimate_survival(const SurvivalData& data, const EstimatorConfig& cfg) {
  return fit_estimator(data, cfg, false).curve;
}

SurvivalCurve estimate_survival(const Dataset& ds, const EstimatorConfig& cfg) {
  return estimate_survival(make_survival_data(ds), cfg);
}

SurvivalCurve survival_at_fixed_coeffs(const SurvivalData& data, const Eigen::VectorXd& beta,
                                       const Eigen::VectorXd& gamma, const EstimatorConfig& cfg) {
  const double a = cfg.kernel.resolve_bandwidth(data.size());
  const TimeIndex ti = TimeIndex::build(data.time);
  const ReducedCovariates z = reduce_covariates(data, beta, gamma);
  SurvivalCurve curve;
  curve.survival = marginal_curve(data, ti, z, a);
  curve.n = data.size();
  curve.coefficients_t = beta;
  curve.coefficients_c = gamma;
  return curve;
}

SurvivalCurve survival_at_fixed_coeffs(const Dataset& ds, const Eigen::VectorXd& beta,
                                       const Eigen::VectorXd& gamma, const EstimatorConfig& cfg) {
  return survival_at_fixed_coeffs(make_survival_data(ds), beta, gamma, cfg);
}

KaplanMeierGreenwood kaplan_meier_greenwood(const SurvivalData& data) {
  const TimeIndex ti = TimeIndex::build(data.time);
  const int ngroups = static_cast<int>(ti.group_count());

  KaplanMeierGreenwood km;
  km.curve.n = data.size();
  km.curve.survival.initial_value = 1.0;
  km.greenwood_cumvar.initial_value = 0.0;

  int at_risk = static_cast<int>(data.size());
  double surv = 1.0;
  double cumvar = 0.0;
  for (int g = 0; g < ngroups; ++g) {
    int deaths = 0;
    const int group_size = ti.group_begin[g + 1] - ti.group_begin[g];
    for (int pos = ti.group_begin[g]; pos < ti.group_begin[g + 1]; ++pos)
      deaths += data.event[ti.order[pos]];
    if (deaths > 0) {
      const double m = static_cast<double>(at_risk);
      surv *= 1.0 - static_cast<double>(deaths) / m;
      cumvar += at_risk > deaths
                    ? static_cast<double>(deaths) / (m * static_cast<double>(at_risk - deaths))
                    : 0.0;
      km.curve.survival.jump_times.push_back(ti.times[g]);
      km.curve.survival.jump_values.push_back(surv);
      km.greenwood_cumvar.jump_times.push_back(ti.times[g]);
      km.greenwood_cumvar.jump_values.push_back(cumvar);
    }
    at_risk -= group_size;
  }
  return km;
}

double KaplanMeierGreenwood::se(double t) const {
  const double s = curve.survival(t);
  if (s <= 0.0) return 0.0;
  return s * std::sqrt(greenwood_cumvar(t));
}

SurvivalCurve kaplan_meier(const SurvivalData& data) {
  return kaplan_meier_greenwood(data).curve;
}

SurvivalCurve kaplan_meier(const Dataset& ds) { return kaplan_meier(make_survival_data(ds)); }

}  // namespace depcens
