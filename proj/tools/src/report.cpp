#include "todacli/report.hpp"

#include <cmath>
#include <stdexcept>

namespace todacli {

using nlohmann::json;

const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Abs: return "abs";
    case MetricKind::Rel: return "rel";
    case MetricKind::UpperBound: return "upper_bound";
    case MetricKind::LowerBound: return "lower_bound";
    case MetricKind::Info: return "info";
  }
  return "info";
}

MetricKind metric_kind_from(const std::string& s) {
  if (s == "abs") return MetricKind::Abs;
  if (s == "rel") return MetricKind::Rel;
  if (s == "upper_bound") return MetricKind::UpperBound;
  if (s == "lower_bound") return MetricKind::LowerBound;
  if (s == "info") return MetricKind::Info;
  throw std::invalid_argument("unknown metric kind '" + s + "'");
}

// NaN compares false everywhere, so a NaN value fails every bounded metric.
Metric Metric::abs(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, expected, tol, MetricKind::Abs, std::abs(value - expected) <= tol};
}

Metric Metric::rel(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, expected, tol, MetricKind::Rel,
          std::abs(value - expected) <= tol * std::abs(expected)};
}

Metric Metric::upper(std::string name, double value, double tol) {
  return {std::move(name), value, std::nullopt, tol, MetricKind::UpperBound, value <= tol};
}

Metric Metric::lower(std::string name, double value, double tol) {
  return {std::move(name), value, std::nullopt, tol, MetricKind::LowerBound, value >= tol};
}

Metric Metric::info(std::string name, double value, double drift) {
  return {std::move(name), value, std::nullopt, drift, MetricKind::Info, true};
}

bool Check::passed() const {
  if (error) return false;
  for (const auto& m : metrics)
    if (!m.passed) return false;
  return true;
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return true;
}

std::vector<std::string> Report::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (c.error) out.push_back(c.name + ": " + *c.error);
    for (const auto& m : c.metrics)
      if (!m.passed) out.push_back(c.name + "/" + m.name);
  }
  return out;
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const Metric& m) {
  json j{{"name", m.name},
         {"value", number(m.value)},
         {"tol", m.tol},
         {"kind", to_string(m.kind)},
         {"passed", m.passed}};
  if (m.expected) j["expected"] = number(*m.expected);
  return j;
}

json to_json(const Check& c) {
  json ms = json::array();
  for (const auto& m : c.metrics) ms.push_back(to_json(m));
  json j{{"name", c.name}, {"passed", c.passed()}, {"metrics", ms}, {"data", c.data}};
  if (c.error) j["error"] = *c.error;
  return j;
}

json to_json(const Report& r) {
  json cs = json::array();
  for (const auto& c : r.checks) cs.push_back(to_json(c));
  return json{{"schema_version", kReportSchemaVersion},
              {"config", r.config},
              {"passed", r.passed()},
              {"checks", cs}};
}

}  // namespace todacli
