#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "todacli/config.hpp"
#include "todacli/report.hpp"

namespace todacli {

struct Context {
  const RunConfig& cfg;
  const toda::CartanData& cd;
  std::shared_ptr<const toda::TodaSolution> sol;
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct CheckOutput {
  Check check;
  std::vector<OutputFile> files;
};

// Independent stream per check so results do not depend on which checks run.
std::mt19937_64 check_rng(std::uint64_t seed, const std::string& check);
double uniform01(std::mt19937_64& rng);
// |z| log-uniform in [r_min, r_max], arg uniform.
std::complex<double> sample_point(std::mt19937_64& rng, double r_min, double r_max);

CheckOutput check_construct(const Context& ctx);
CheckOutput check_residual(const Context& ctx);
CheckOutput check_mass(const Context& ctx);
CheckOutput check_expand(const Context& ctx);
CheckOutput check_linearize(const Context& ctx);
CheckOutput check_identities(const Context& ctx);

// Dispatch by name; exceptions are caught and recorded in Check::error.
CheckOutput run_check(const std::string& name, const Context& ctx);

}  // namespace todacli
