#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace depcens {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- dataset validation ---

struct EmptyDatasetError : Error {
  EmptyDatasetError() : Error("dataset is empty") {}
};

struct RecordError : Error {
  std::size_t index;
  RecordError(const std::string& what, std::size_t idx)
      : Error(what + " at record " + std::to_string(idx)), index(idx) {}
};

struct NegativeTimeError : RecordError {
  explicit NegativeTimeError(std::size_t idx) : RecordError("negative follow-up time", idx) {}
};

struct NonBinaryEventError : RecordError {
  explicit NonBinaryEventError(std::size_t idx) : RecordError("event indicator not in {0,1}", idx) {}
};

struct RaggedCovariatesError : RecordError {
  explicit RaggedCovariatesError(std::size_t idx) : RecordError("covariate length mismatch", idx) {}
};

struct NonFiniteValueError : RecordError {
  explicit NonFiniteValueError(std::size_t idx) : RecordError("non-finite value", idx) {}
};

struct CsvParseError : Error {
  std::size_t row;  // 1-based line number in the file
  CsvParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), row(line) {}
};

// --- model fitting ---

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct NoEventsForRoleError : Error {
  using Error::Error;
};

struct SingularInformationError : Error {
  SingularInformationError() : Error("information matrix is singular (after ridge fallback)") {}
};

// Thrown by pipeline entry points when a working-model fit did not converge.
// fit_cox itself returns the last iterate with converged=false.
struct NotConvergedError : Error {
  using Error::Error;
};

// --- kernel estimation ---

struct DegenerateRiskSetError : Error {
  DegenerateRiskSetError() : Error("kernel risk-set sum is zero") {}
};

}  // namespace depcens
