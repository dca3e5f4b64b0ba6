#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "sacovest/engine.hpp"
#include "sacovest/numerics.hpp"

namespace sacovest {

/// "%.17g"; enough digits for a bit-exact round trip.
std::string format_real(double x);

/// Deterministic JSON: sorted keys, two-space indent, reals via format_real,
/// non-finite reals as null.
std::string to_canonical_json(const nlohmann::json& j);

struct RateRow {
  std::int64_t n = 0;
  std::int64_t rep = 0;
  double error = 0.0;
};

struct StudyRow {
  std::int64_t n = 0;
  std::int64_t rep = 0;
  double error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool covered = false;
};

/// Each writer throws IoError naming the path when the file cannot be written.
void write_text(const std::string& path, const std::string& text);
void write_trace_csv(const std::string& path, const RunResult& result);
void write_matrix_csv(const std::string& path, const Matrix& m);
void write_rate_csv(const std::string& path, const std::vector<RateRow>& rows);
void write_coverage_csv(const std::string& path, const std::vector<StudyRow>& rows);
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace sacovest
