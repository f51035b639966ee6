#include "depcens/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace depcens {

Dataset validate_dataset(const std::vector<ObservedRecord>& raw) {
  double max_time = 0.0;
  for (const auto& rec : raw) max_time = std::max(max_time, rec.time);
  return validate_dataset(raw, max_time);
}

Dataset validate_dataset(const std::vector<ObservedRecord>& raw, double tau) {
  if (raw.empty()) throw EmptyDatasetError();
  const std::size_t p = raw.front().covariates.size();
  double max_time = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& rec = raw[i];
    if (!std::isfinite(rec.time)) throw NonFiniteValueError(i);
    if (rec.time < 0.0) throw NegativeTimeError(i);
    if (rec.event != 0 && rec.event != 1) throw NonBinaryEventError(i);
    if (rec.covariates.size() != p) throw RaggedCovariatesError(i);
    for (double x : rec.covariates)
      if (!std::isfinite(x)) throw NonFiniteValueError(i);
    max_time = std::max(max_time, rec.time);
  }
  if (!std::isfinite(tau) || tau < max_time)
    throw Error("tau must be finite and >= the maximum observed time");
  Dataset ds;
  ds.records = raw;
  ds.covariate_dim = p;
  ds.tau = tau;
  return ds;
}

double StepFunction::operator()(double t) const {
  // largest jump_time <= t
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  if (it == jump_times.begin()) return initial_value;
  return jump_values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

double step_eval(const StepFunction& f, double t) { return f(t); }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& field, std::size_t line) {
  const std::string s = trimmed(field);
  if (s.empty()) throw CsvParseError("empty field", line);
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw CsvParseError("malformed number '" + s + "'", line);
    return v;
  } catch (const CsvParseError&) {
    throw;
  } catch (const std::exception&) {
    throw CsvParseError("malformed number '" + s + "'", line);
  }
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw CsvParseError("missing header row", 1);
  ++lineno;
  const auto header = split_csv_line(line);
  if (header.size() < 2 || trimmed(header[0]) != "time" || trimmed(header[1]) != "status")
    throw CsvParseError("header must start with 'time,status'", lineno);
  const std::size_t ncol = header.size();

  std::vector<ObservedRecord> raw;
  while (std::getline(in, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != ncol)
      throw CsvParseError("expected " + std::to_string(ncol) + " fields, found " +
                              std::to_string(fields.size()),
                          lineno);
    ObservedRecord rec;
    rec.time = parse_real(fields[0], lineno);
    const double status = parse_real(fields[1], lineno);
    if (status != 0.0 && status != 1.0) throw CsvParseError("status must be 0 or 1", lineno);
    rec.event = static_cast<int>(status);
    rec.covariates.reserve(ncol - 2);
    for (std::size_t j = 2; j < ncol; ++j) rec.covariates.push_back(parse_real(fields[j], lineno));
    raw.push_back(std::move(rec));
  }
  return validate_dataset(raw);
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  return read_csv(in);
}

}  // namespace depcens
