#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace todacli {

// The two reports do not have the same structure; `field` names the first difference.
class SchemaMismatch : public std::runtime_error {
 public:
  SchemaMismatch(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct DiffResult {
  std::vector<std::string> lines;  // one per drifted metric
  bool drifted() const { return !lines.empty(); }
};

// Metric-by-metric comparison. Allowed drift of a value is its tolerance for
// abs and upper_bound metrics and tol * max(|a|, |b|) for rel and info
// metrics; lower_bound values are not compared. Every pass/fail flag must agree.
// The config echo is not compared.
DiffResult diff_reports(const nlohmann::json& a, const nlohmann::json& b);

// Reads both files and prints the diff. Returns 0 (no drift), 1 (drift),
// 2 (unreadable or unparsable file) or 3 (schema mismatch).
int diff_command(const std::string& path_a, const std::string& path_b, std::ostream& out);

}  // namespace todacli
