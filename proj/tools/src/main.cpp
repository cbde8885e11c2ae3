#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "todacli/diff.hpp"
#include "todacli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"toda: checks for exact solutions of the singular SU(n+1) Toda system"};
  app.require_subcommand(1);

  std::string config, out_dir = "out", precision;
  std::uint64_t seed = 0;
  std::vector<CLI::App*> runs;
  for (const auto& name : todacli::all_checks()) runs.push_back(app.add_subcommand(name, "run the " + name + " check"));
  runs.push_back(app.add_subcommand("all", "run every check listed in the config"));
  for (auto* sub : runs) {
    sub->add_option("--config", config, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--precision", precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
    sub->add_option("--seed", seed, "seed for sampled points");
  }
  std::string a, b;
  auto* diff = app.add_subcommand("diff", "compare two report.json files");
  diff->add_option("a", a)->required();
  diff->add_option("b", b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : todacli::kParseError;
  }

  if (diff->parsed()) return todacli::diff_command(a, b, std::cout);

  for (auto* sub : runs) {
    if (!sub->parsed()) continue;
    todacli::RunOptions opt;
    opt.subcommand = sub->get_name();
    if (!precision.empty())
      opt.precision = precision == "double" ? toda::Precision::Double : toda::Precision::Extended;
    if (sub->count("--seed") > 0) opt.seed = seed;
    return todacli::run_command(config, out_dir, opt, std::cerr);
  }
  return todacli::kParseError;
}
