#include "sacovest/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sacovest/errors.hpp"

namespace sacovest {

using nlohmann::json;

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void emit(const json& j, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      // nlohmann::json objects are std::map backed, so iteration is key-sorted.
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << inner << json(it.key()).dump() << ": ";
        emit(it.value(), out, indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << ", ";
        first = false;
        emit(e, out, indent + 1);
      }
      out << "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out << (std::isfinite(x) ? format_real(x) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void close_or_throw(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

std::string to_canonical_json(const json& j) {
  std::ostringstream out;
  emit(j, out, 0);
  out << "\n";
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_or_throw(path);
  out << text;
  close_or_throw(out, path);
}

void write_trace_csv(const std::string& path, const RunResult& result) {
  auto out = open_or_throw(path);
  out << "k,dist_to_star_sq,shadow_sq_dist\n";
  for (std::size_t i = 0; i < result.dist_to_star.size(); ++i) {
    out << result.dist_to_star[i].k << ',' << format_real(result.dist_to_star[i].value) << ','
        << format_real(result.shadow_sq_dist[i].value) << '\n';
  }
  close_or_throw(out, path);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = open_or_throw(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_real(m(i, j));
    out << '\n';
  }
  close_or_throw(out, path);
}

void write_rate_csv(const std::string& path, const std::vector<RateRow>& rows) {
  auto out = open_or_throw(path);
  out << "n,rep,opnorm_error\n";
  for (const auto& r : rows) out << r.n << ',' << r.rep << ',' << format_real(r.error) << '\n';
  close_or_throw(out, path);
}

void write_coverage_csv(const std::string& path, const std::vector<StudyRow>& rows) {
  auto out = open_or_throw(path);
  out << "n,rep,error,ci_lo,ci_hi,covered\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.rep << ',' << format_real(r.error) << ',' << format_real(r.ci_lo) << ','
        << format_real(r.ci_hi) << ',' << (r.covered ? 1 : 0) << '\n';
  }
  close_or_throw(out, path);
}

void write_json(const std::string& path, const json& j) { write_text(path, to_canonical_json(j)); }

}  // namespace sacovest
