#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "depcens/errors.hpp"

namespace depcens {

// One subject: follow-up time Y = min(T, C), event indicator R = I(T <= C),
// and the covariate vector L.
struct ObservedRecord {
  double time = 0.0;
  int event = 0;  // 1 = failure observed, 0 = censored
  std::vector<double> covariates;
};

// Validated sample. Records keep input order; estimators must not depend on it.
struct Dataset {
  std::vector<ObservedRecord> records;
  std::size_t covariate_dim = 0;
  double tau = 0.0;  // study end time; >= max observed time

  std::size_t size() const { return records.size(); }
};

// Checks all record invariants. tau defaults to the maximum observed time.
// Throws EmptyDatasetError, NegativeTimeError, NonBinaryEventError,
// RaggedCovariatesError, NonFiniteValueError.
Dataset validate_dataset(const std::vector<ObservedRecord>& raw);
Dataset validate_dataset(const std::vector<ObservedRecord>& raw, double tau);

// Right-continuous piecewise-constant function on [0, tau]: f(t) equals the
// value attached to the largest jump_time <= t, or initial_value before the
// first jump.
struct StepFunction {
  std::vector<double> jump_times;   // strictly increasing
  std::vector<double> jump_values;  // value right after each jump
  double initial_value = 0.0;

  double operator()(double t) const;

  std::size_t jump_count() const { return jump_times.size(); }

  // Increment at jump k: value after minus value before.
  double jump_mass(std::size_t k) const {
    return jump_values[k] - (k == 0 ? initial_value : jump_values[k - 1]);
  }
};

double step_eval(const StepFunction& f, double t);

// CSV ingestion: header `time,status,x1,...,xp`, decimal-point reals, one
// record per row. Empty fields, short rows, and non-numeric cells are errors.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

}  // namespace depcens
