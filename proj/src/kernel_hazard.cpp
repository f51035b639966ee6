#include "depcens/kernel_hazard.hpp"

#include <algorithm>
#include <limits>

namespace depcens {

double kernel_eval(const KernelConfig& cfg, double x1, double x2) {
  switch (cfg.kernel) {
    case KernelType::gaussian2d:
      return std::exp(-(x1 * x1 + x2 * x2));
  }
  return 0.0;  // unreachable
}

ReducedCovariates reduce_covariates(const SurvivalData& data, const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& gamma) {
  if (beta.size() != data.design_t.cols())
    throw DimensionMismatchError("beta length does not match failure-model covariates");
  if (gamma.size() != data.design_c.cols())
    throw DimensionMismatchError("gamma length does not match censoring-model covariates");
  const Eigen::VectorXd zt = data.design_t * beta;
  const Eigen::VectorXd zc = data.design_c * gamma;
  ReducedCovariates z;
  z.z1.assign(zt.data(), zt.data() + zt.size());
  z.z2.assign(zc.data(), zc.data() + zc.size());
  return z;
}

ReducedCovariates reduce_covariates(const Dataset& ds, const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& gamma) {
  return reduce_covariates(make_survival_data(ds), beta, gamma);
}

namespace detail {

std::vector<double> scaled_sq_distances(const ReducedCovariates& z_all,
                                        std::pair<double, double> z, double bandwidth) {
  const std::size_t n = z_all.size();
  std::vector<double> u2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d1 = (z_all.z1[j] - z.first) / bandwidth;
    const double d2 = (z_all.z2[j] - z.second) / bandwidth;
    u2[j] = d1 * d1 + d2 * d2;
  }
  return u2;
}

HazardPair cond_hazards_both(const TimeIndex& ti, const std::vector<int>& event,
                             const std::vector<double>& u2) {
  const int ngroups = static_cast<int>(ti.group_count());

  // Jump masses per group, filled descending. Every kernel weight is
  // exp(shift - u2[j]) with shift = min u2 over the current risk set, so the
  // denominator always holds a term equal to 1; the shift cancels in the
  // ratio.
  std::vector<double> mass_t(ngroups, 0.0), mass_c(ngroups, 0.0);
  std::vector<bool> has_t(ngroups, false), has_c(ngroups, false);

  double shift = std::numeric_limits<double>::infinity();
  double denom = 0.0;
  for (int g = ngroups - 1; g >= 0; --g) {
    double group_min = std::numeric_limits<double>::infinity();
    for (int pos = ti.group_begin[g]; pos < ti.group_begin[g + 1]; ++pos)
      group_min = std::min(group_min, u2[ti.order[pos]]);
    if (group_min < shift) {
      if (std::isfinite(shift)) denom *= std::exp(group_min - shift);
      shift = group_min;
    }
    double num_t = 0.0, num_c = 0.0;
    for (int pos = ti.group_begin[g]; pos < ti.group_begin[g + 1]; ++pos) {
      const int id = ti.order[pos];
      const double w = std::exp(shift - u2[id]);
      denom += w;
      if (event[id] == 1) {
        num_t += w;
        has_t[g] = true;
      } else {
        num_c += w;
        has_c[g] = true;
      }
    }
    if ((has_t[g] || has_c[g]) && !(denom > 0.0)) throw DegenerateRiskSetError();
    if (has_t[g]) mass_t[g] = num_t / denom;
    if (has_c[g]) mass_c[g] = num_c / denom;
  }

  HazardPair out;
  double cum_t = 0.0, cum_c = 0.0;
  for (int g = 0; g < ngroups; ++g) {
    if (has_t[g]) {
      cum_t += mass_t[g];
      out.failure.jump_times.push_back(ti.times[g]);
      out.failure.jump_values.push_back(cum_t);
    }
    if (has_c[g]) {
      cum_c += mass_c[g];
      out.censoring.jump_times.push_back(ti.times[g]);
      out.censoring.jump_values.push_back(cum_c);
    }
  }
  return out;
}

}  // namespace detail

StepFunction cond_cum_hazard(const SurvivalData& data, const ReducedCovariates& z_all,
                             std::pair<double, double> z, const KernelConfig& cfg,
                             EventRole role) {
  if (z_all.size() != data.size())
    throw DimensionMismatchError("reduced covariates do not match sample size");
  const double a = cfg.resolve_bandwidth(data.size());
  const TimeIndex ti = TimeIndex::build(data.time);
  const auto u2 = detail::scaled_sq_distances(z_all, z, a);
  detail::HazardPair pair = detail::cond_hazards_both(ti, data.event, u2);
  return role == EventRole::failure ? std::move(pair.failure) : std::move(pair.censoring);
}

StepFunction cond_cum_hazard(const Dataset& ds, const ReducedCovariates& z_all,
                             std::pair<double, double> z, const KernelConfig& cfg,
                             EventRole role) {
  return cond_cum_hazard(make_survival_data(ds), z_all, z, cfg, role);
}

StepFunction cond_survival(const StepFunction& cum_hazard) {
  StepFunction surv;
  surv.initial_value = 1.0;
  surv.jump_times = cum_hazard.jump_times;
  surv.jump_values.resize(cum_hazard.jump_count());
  double value = 1.0;
  for (std::size_t k = 0; k < cum_hazard.jump_count(); ++k) {
    if (value > 0.0) {
      const double factor = 1.0 - cum_hazard.jump_mass(k);
      value = factor <= 0.0 ? 0.0 : value * factor;
    }
    surv.jump_values[k] = value;
  }
  return surv;
}

}  // namespace depcens
