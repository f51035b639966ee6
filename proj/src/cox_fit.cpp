#include "depcens/cox_fit.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace depcens {

SurvivalData make_survival_data(const Dataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t p = ds.covariate_dim;
  SurvivalData data;
  data.time.resize(n);
  data.event.resize(n);
  data.design_t.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    data.time[i] = ds.records[i].time;
    data.event[i] = ds.records[i].event;
    for (std::size_t j = 0; j < p; ++j)
      data.design_t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          ds.records[i].covariates[j];
  }
  data.design_c = data.design_t;
  return data;
}

TimeIndex TimeIndex::build(const std::vector<double>& time) {
  const int n = static_cast<int>(time.size());
  TimeIndex ti;
  ti.order.resize(n);
  std::iota(ti.order.begin(), ti.order.end(), 0);
  std::sort(ti.order.begin(), ti.order.end(),
            [&](int a, int b) { return time[a] < time[b]; });
  ti.group_of.resize(n);
  for (int pos = 0; pos < n; ++pos) {
    const int id = ti.order[pos];
    if (ti.times.empty() || time[id] > ti.times.back()) {
      ti.times.push_back(time[id]);
      ti.group_begin.push_back(pos);
    }
    ti.group_of[id] = static_cast<int>(ti.times.size()) - 1;
  }
  ti.group_begin.push_back(n);
  return ti;
}

int TimeIndex::group_le(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  return static_cast<int>(it - times.begin()) - 1;
}

int TimeIndex::group_ge(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  return static_cast<int>(it - times.begin());
}

namespace {

struct CoxEval {
  double loglik;
  Eigen::VectorXd grad;
  Eigen::MatrixXd info;
};

// Single pass over groups in descending time: the risk-set sums
// sum_{Y_j >= t} e^{eta_j} (and their first/second moments in L) grow as
// suffixes, so each group's contribution is read right after its records are
// absorbed. Exponents are shifted by max eta, a mathematical no-op.
CoxEval evaluate_partial(const SurvivalData& data, const TimeIndex& ti,
                         const Eigen::VectorXd& beta, EventRole role, bool want_derivs) {
  const int n = static_cast<int>(data.size());
  const Eigen::MatrixXd& X = data.design(role);
  const int p = static_cast<int>(X.cols());
  if (beta.size() != p)
    throw DimensionMismatchError("coefficient length " + std::to_string(beta.size()) +
                                 " does not match covariate dimension " + std::to_string(p));

  const Eigen::VectorXd eta = X * beta;
  const double shift = eta.size() > 0 ? eta.maxCoeff() : 0.0;
  Eigen::VectorXd ee(n);
  for (int i = 0; i < n; ++i) ee[i] = std::exp(eta[i] - shift);

  CoxEval out;
  out.loglik = 0.0;
  if (want_derivs) {
    out.grad = Eigen::VectorXd::Zero(p);
    out.info = Eigen::MatrixXd::Zero(p, p);
  }

  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd zbar(p);

  const int ngroups = static_cast<int>(ti.group_count());
  for (int g = ngroups - 1; g >= 0; --g) {
    for (int pos = ti.group_begin[g]; pos < ti.group_begin[g + 1]; ++pos) {
      const int id = ti.order[pos];
      s0 += ee[id];
      if (want_derivs) {
        const auto x = X.row(id).transpose();
        s1.noalias() += ee[id] * x;
        s2.noalias() += ee[id] * x * x.transpose();
      }
    }
    for (int pos = ti.group_begin[g]; pos < ti.group_begin[g + 1]; ++pos) {
      const int id = ti.order[pos];
      if (role_indicator(role, data.event[id]) == 0) continue;
      out.loglik += eta[id] - shift - std::log(s0);
      if (want_derivs) {
        zbar = s1 / s0;
        out.grad += X.row(id).transpose() - zbar;
        out.info += s2 / s0 - zbar * zbar.transpose();
      }
    }
  }

  out.loglik /= n;
  if (want_derivs) {
    out.grad /= n;
    out.info /= n;
  }
  return out;
}

Eigen::VectorXd solve_newton_step(const Eigen::MatrixXd& info, const Eigen::VectorXd& grad) {
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd step = llt.solve(grad);
    if (step.allFinite()) return step;
  }
  // collinear covariates: one ridge attempt, then give up
  Eigen::MatrixXd ridged = info;
  ridged.diagonal().array() += 1e-10;
  Eigen::LLT<Eigen::MatrixXd> llt2(ridged);
  if (llt2.info() == Eigen::Success) {
    Eigen::VectorXd step = llt2.solve(grad);
    if (step.allFinite()) return step;
  }
  throw SingularInformationError();
}

}  // namespace

double partial_loglik(const SurvivalData& data, const Eigen::VectorXd& beta, EventRole role) {
  const TimeIndex ti = TimeIndex::build(data.time);
  return evaluate_partial(data, ti, beta, role, false).loglik;
}

double partial_loglik(const Dataset& ds, const Eigen::VectorXd& beta, EventRole role) {
  return partial_loglik(make_survival_data(ds), beta, role);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> partial_score_info(const SurvivalData& data,
                                                               const Eigen::VectorXd& beta,
                                                               EventRole role) {
  const TimeIndex ti = TimeIndex::build(data.time);
  CoxEval ev = evaluate_partial(data, ti, beta, role, true);
  return {std::move(ev.grad), std::move(ev.info)};
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> partial_score_info(const Dataset& ds,
                                                               const Eigen::VectorXd& beta,
                                                               EventRole role) {
  return partial_score_info(make_survival_data(ds), beta, role);
}

CoxModelFit fit_cox(const SurvivalData& data, EventRole role, const CoxOptions& opts) {
  const int n = static_cast<int>(data.size());
  const int p = static_cast<int>(data.design(role).cols());
  if (p < 1) throw DimensionMismatchError("model needs at least one covariate");

  int active = 0;
  for (int i = 0; i < n; ++i) active += role_indicator(role, data.event[i]);
  if (active == 0)
    throw NoEventsForRoleError(role == EventRole::failure
                                   ? "no failure events in sample"
                                   : "no censored observations in sample");

  const TimeIndex ti = TimeIndex::build(data.time);

  CoxModelFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(p);
  CoxEval cur = evaluate_partial(data, ti, fit.coefficients, role, true);

  for (int iter = 0;; ++iter) {
    const double grad_max = cur.grad.lpNorm<Eigen::Infinity>();
    if (grad_max < opts.tol) {
      fit.converged = true;
      fit.iterations = iter;
      break;
    }
    if (iter >= opts.max_iter) {
      fit.converged = false;
      fit.iterations = iter;
      break;
    }

    const Eigen::VectorXd direction = solve_newton_step(cur.info, cur.grad);
    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      const Eigen::VectorXd candidate = fit.coefficients + scale * direction;
      CoxEval trial = evaluate_partial(data, ti, candidate, role, true);
      if (std::isfinite(trial.loglik) && trial.loglik >= cur.loglik) {
        fit.coefficients = candidate;
        cur = std::move(trial);
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      fit.converged = false;
      fit.iterations = iter;
      break;
    }
  }

  fit.log_likelihood = cur.loglik;
  fit.information = std::move(cur.info);
  return fit;
}

CoxModelFit fit_cox(const Dataset& ds, EventRole role, const CoxOptions& opts) {
  return fit_cox(make_survival_data(ds), role, opts);
}

}  // namespace depcens
