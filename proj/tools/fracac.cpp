// Command line front end: one subcommand per experiment pipeline.
//
//   fracac layer --s 0.5 --output_dir out
//   fracac scaling --config scaling.cfg --radii 2,4,8
//
// Exit status: 0 all checks pass, 1 a check failed, 2 configuration error,
// 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fracac/errors.hpp"
#include "fracac/runner.hpp"

namespace {

const char* const kKeys[] = {"n",      "s",    "h",    "box_radius", "potential", "epsilon", "epsilon_list", "radii",
                             "scheme", "max_iterations", "tol", "seed", "fields", "output_dir", "inputs", "svg"};

struct Sub {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::optional<std::string>> overrides;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Nonlocal Allen-Cahn experiments"};
  cli.require_subcommand(1);
  cli.set_help_flag("--help", "print help");
  std::map<std::string, Sub> subs;
  for (const auto& name : fracac::experiment_names()) {
    Sub& sub = subs[name];
    sub.app = cli.add_subcommand(name, "run the " + name + " experiment");
    sub.app->set_help_flag("--help", "print help");
    sub.app->add_option("--config", sub.config_path, "key = value file");
    for (const char* key : kKeys) sub.app->add_option(std::string("--") + key, sub.overrides[key]);
  }
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [name, sub] : subs) {
      if (!sub.app->parsed()) continue;
      fracac::RunConfig config = fracac::RunConfig::defaults(name);
      if (!sub.config_path.empty()) config.apply_file(sub.config_path);
      for (const char* key : kKeys)
        if (sub.overrides[key]) config.set(key, *sub.overrides[key]);
      const fracac::RunReport report = fracac::run(config);
      for (const auto& c : report.checks) {
        std::cout << (c.relation == "report" ? "INFO" : (c.pass ? "PASS" : "FAIL")) << ' ' << c.name;
        if (!c.criterion.empty()) std::cout << " [criterion " << c.criterion << "]";
        std::cout << " value=" << c.value;
        if (c.relation != "report") std::cout << ' ' << c.relation << ' ' << c.expected;
        if (c.relation == "within") std::cout << " +- " << c.tolerance;
        std::cout << '\n';
      }
      for (const auto& w : report.warnings) std::cout << "WARN " << w << '\n';
      std::cout << (report.pass() ? "overall PASS" : "overall FAIL") << " (" << config.output_dir << "/"
                << config.experiment << ")\n";
      return report.pass() ? 0 : 1;
    }
  } catch (const fracac::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const fracac::SingularityError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const fracac::Error& e) {
    // configuration, domain, dimension and precondition errors
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
