#include "todacli/runner.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>

#include "toda/errors.hpp"

namespace todacli {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig resolve(RunConfig cfg, const RunOptions& opt) {
  if (opt.precision) cfg.precision = *opt.precision;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.subcommand != "all") {
    const auto& all = all_checks();
    if (std::find(all.begin(), all.end(), opt.subcommand) == all.end())
      throw ConfigParseError("unknown subcommand '" + opt.subcommand + "'");
    cfg.checks = {opt.subcommand};
  }
  return cfg;
}

RunResult run_checks(const RunConfig& cfg, const Prepared& prepared) {
  auto sol = std::make_shared<const toda::TodaSolution>(prepared.cd, prepared.params, cfg.precision);
  const Context ctx{cfg, prepared.cd, sol};
  std::vector<std::future<CheckOutput>> jobs;
  for (const auto& name : all_checks()) {
    if (std::find(cfg.checks.begin(), cfg.checks.end(), name) == cfg.checks.end()) continue;
    jobs.push_back(std::async(std::launch::async, [&ctx, name] { return run_check(name, ctx); }));
  }
  RunResult out;
  out.report.config = to_json(cfg);
  json coerced = prepared.coerced;
  out.report.config["coerced"] = coerced;
  out.report.config["lambda_used"] = prepared.params.lambda;
  for (auto& j : jobs) {
    auto r = j.get();
    out.report.checks.push_back(std::move(r.check));
    for (auto& f : r.files) out.files.push_back(std::move(f));
  }
  return out;
}

namespace {

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run_command(const std::string& config_path, const std::string& out_dir, const RunOptions& opt,
                std::ostream& log) {
  RunConfig cfg;
  Prepared prepared;
  try {
    cfg = resolve(parse_config_file(config_path), opt);
  } catch (const ConfigParseError& e) {
    log << "config error: " << e.what() << '\n';
    return kParseError;
  }
  try {
    prepared = prepare(cfg);
  } catch (const toda::ValidationError& e) {
    log << "validation error [" << e.field() << "]: " << e.what() << '\n';
    return kValidationError;
  }

  const auto start = std::chrono::steady_clock::now();
  const auto result = run_checks(cfg, prepared);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", to_json(result.report).dump(2) + "\n");
  for (const auto& f : result.files) write_file(dir / f.name, f.content);
  json meta{{"generated_at", utc_now()},
            {"runtime_seconds", seconds},
            {"config_path", config_path},
            {"files", json::array()}};
  meta["files"].push_back("report.json");
  for (const auto& f : result.files) meta["files"].push_back(f.name);
  write_file(dir / "metadata.json", meta.dump(2) + "\n");

  for (const auto& c : result.report.checks)
    log << (c.passed() ? "PASS " : "FAIL ") << c.name << '\n';
  const auto failing = result.report.failing();
  for (const auto& f : failing) log << "  failing: " << f << '\n';
  return failing.empty() ? kPass : kCheckFailed;
}

}  // namespace todacli
