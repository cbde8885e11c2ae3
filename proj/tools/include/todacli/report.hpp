#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace todacli {

// abs:         |value - expected| <= tol
// rel:         |value - expected| <= tol |expected|
// upper_bound: value <= tol
// lower_bound: value >= tol
// info:        always passes; tol is the relative drift allowed by `diff`
enum class MetricKind { Abs, Rel, UpperBound, LowerBound, Info };

const char* to_string(MetricKind k);
MetricKind metric_kind_from(const std::string& s);

struct Metric {
  std::string name;
  double value = 0.0;
  std::optional<double> expected;
  double tol = 0.0;
  MetricKind kind = MetricKind::Info;
  bool passed = true;

  static Metric abs(std::string name, double value, double expected, double tol);
  static Metric rel(std::string name, double value, double expected, double tol);
  static Metric upper(std::string name, double value, double tol);
  static Metric lower(std::string name, double value, double tol);
  static Metric info(std::string name, double value, double drift = 1e-6);
};

struct Check {
  std::string name;
  std::vector<Metric> metrics;
  nlohmann::json data = nlohmann::json::object();
  std::optional<std::string> error;  // an exception stopped the check

  bool passed() const;
  void add(Metric m) { metrics.push_back(std::move(m)); }
};

struct Report {
  nlohmann::json config;
  std::vector<Check> checks;

  bool passed() const;
  std::vector<std::string> failing() const;  // "check/metric" entries
};

nlohmann::json to_json(const Metric& m);
nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const Report& r);

inline constexpr int kReportSchemaVersion = 1;

}  // namespace todacli
