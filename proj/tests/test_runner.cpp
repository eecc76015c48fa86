#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "doctest.h"

#include "fracac/errors.hpp"
#include "fracac/runner.hpp"

using namespace fracac;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fracac_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config errors name the field") {
  RunConfig c;
  CHECK(message_of([&] { c.set("bogus", "1"); }).find("bogus") != std::string::npos);
  CHECK(message_of([&] { c.set("s", "half"); }).find("'s'") != std::string::npos);
  CHECK(message_of([&] { c.set("svg", "maybe"); }).find("svg") != std::string::npos);
  c.set("h", "0.07");
  CHECK(message_of([&] { c.validate(); }).find("'h'") != std::string::npos);
  CHECK(message_of([&] { RunConfig::defaults("nope"); }).find("nope") != std::string::npos);
}

TEST_CASE("config files") {
  const fs::path dir = scratch_dir("config");
  {
    std::ofstream f(dir / "a.cfg");
    f << "# layer run\nexperiment = layer\ns = 0.3   # order\nradii = 1, 2, 3\n";
  }
  const RunConfig c = RunConfig::from_file((dir / "a.cfg").string());
  CHECK(c.experiment == "layer");
  CHECK(c.s == 0.3);
  CHECK(c.radii == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(c.echo().at("s") == "0.3");
  RunConfig other = RunConfig::defaults("energy");
  CHECK_THROWS_AS(other.apply_file((dir / "a.cfg").string()), ConfigError);
  CHECK(experiment_names().size() == 10);
}

TEST_CASE("report merge and JSON round trip") {
  RunReport a;
  a.experiments = {"layer"};
  a.config = {{"s", "0.5"}};
  a.checks.push_back({"residual", "4", 1e-9, 1e-8, 0.0, "<=", true});
  RunReport b;
  b.experiments = {"energy"};
  b.checks.push_back({"el", "2", 1e-3, 1e-6, 0.0, "<=", false});
  const RunReport m = report_merge({a, b});
  CHECK(m.experiments == std::vector<std::string>{"layer", "energy"});
  CHECK(m.config.at("layer.s") == "0.5");
  CHECK(m.checks.size() == 2);
  CHECK_FALSE(m.pass());
  CHECK_THROWS_AS(report_merge({a, a}), ConfigError);
  const RunReport empty = report_merge({});
  CHECK(empty.pass());
  CHECK(empty.warnings.size() == 1);

  const RunReport back = RunReport::from_json(m.to_json());
  CHECK(back.to_json() == m.to_json());
  CHECK(back.checks[0].value == 1e-9);
}

TEST_CASE("svg chart") {
  const std::string svg = svg_line_chart("t", {1.0, 2.0, 4.0}, {1.0, 4.0, 16.0}, true, true);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK_THROWS_AS(svg_line_chart("t", {1.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("pipelines write their outputs") {
  const fs::path dir = scratch_dir("run");
  RunConfig c = RunConfig::defaults("op-check");
  c.output_dir = dir.string();
  const RunReport r = run(c);
  CHECK(r.pass());
  CHECK(fs::exists(dir / "op-check" / "report.json"));
  CHECK(fs::exists(dir / "op-check" / "checks.csv"));
  CHECK(fs::exists(dir / "op-check" / "timing.json"));

  RunConfig l = RunConfig::defaults("layer");
  l.output_dir = dir.string();
  l.box_radius = 20.0;
  l.h = 0.1;
  CHECK(run(l).pass());

  RunConfig m = RunConfig::defaults("report");
  m.output_dir = dir.string();
  m.inputs = {(dir / "op-check").string(), (dir / "layer").string()};
  const RunReport merged = run(m);
  CHECK(merged.experiments.size() == 2);
  CHECK(merged.pass());
}
