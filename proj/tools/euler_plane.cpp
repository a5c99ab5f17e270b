// euler-plane: Euler numbers of surface-group actions on the plane.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "euler_plane/check.hpp"
#include "euler_plane/report.hpp"

using namespace euler_plane;
using namespace euler_plane::cli;

namespace {

int run_command(const std::string& scene_path, const std::string& report_path, const std::string& svg_path,
                const std::optional<std::uint64_t>& seed, const std::string& method, bool verbose) {
  std::ifstream in(scene_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << scene_path << "\n";
    return kIoFailure;
  }
  std::stringstream text;
  text << in.rdbuf();

  SceneFile scene;
  try {
    scene = parse_scene(text.str());
  } catch (const Error& e) {
    std::cerr << scene_path << ":" << e.what() << "\n";
    return exit_code_for(e.code());
  }

  RunSettings settings;
  if (!method.empty()) settings.method = method;
  settings.seed = seed;
  const std::string report_out = !report_path.empty() ? report_path : scene.output.report.value_or("");
  const std::string svg_out = !svg_path.empty() ? svg_path : scene.output.svg.value_or("");
  settings.figure = !svg_out.empty();
  if (verbose) settings.log = &std::cerr;

  ReportDocument doc;
  try {
    doc = run_scene(scene, settings);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string hint = remediation_hint(e.code());
    if (!hint.empty()) std::cerr << "hint: " << hint << "\n";
    return exit_code_for(e.code());
  }

  try {
    if (!report_out.empty())
      write_atomic(report_out, doc.text());
    else
      std::cout << doc.text();
    if (!svg_out.empty()) write_atomic(svg_out, render_svg(doc.figure));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  }

  // one summary line per method on stderr (--verbose has logged them already)
  if (!verbose)
    for (const auto& [name, r] : doc.body["results"].items()) {
      std::cerr << name << ": ";
      if (r["status"] == "ok")
        std::cerr << r["value"].get<int>() << (r["certified"].get<bool>() ? "" : " (not certified)");
      else
        std::cerr << r["status"].get<std::string>() << " - " << r["message"].get<std::string>();
      if (r.contains("hint")) std::cerr << " [" << r["hint"].get<std::string>() << "]";
      std::cerr << "\n";
    }
  if (doc.body.contains("agreement") && !doc.body["agreement"]["agree"].get<bool>()) std::cerr << "methods disagree\n";
  return doc.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler numbers of surface-group actions on the plane"};
  app.require_subcommand(1);

  std::string scene_path, report_path, svg_path, method;
  std::uint64_t seed_value = 0;
  bool verbose = false;
  CLI::App* run = app.add_subcommand("run", "compute the Euler number of a scene");
  run->add_option("scene", scene_path, "scene file")->required();
  run->add_option("--report", report_path, "write the report here instead of stdout");
  run->add_option("--svg", svg_path, "write an SVG figure");
  CLI::Option* seed_opt = run->add_option("--seed", seed_value, "seed for perturbations and samples");
  run->add_option("--method", method, "method to run")
      ->check(CLI::IsMember({"lift", "graphical", "signed-sum", "writhe-diff", "all"}));
  run->add_flag("--verbose", verbose, "progress on stderr");

  CLI::App* zoo_cmd = app.add_subcommand("zoo", "the built-in actions");
  zoo_cmd->require_subcommand(1);
  CLI::App* zoo_list = zoo_cmd->add_subcommand("list", "list recipes and their parameters");

  CLI::App* check_cmd = app.add_subcommand("check", "run the built-in property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }

  if (run->parsed()) {
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) seed = seed_value;
    return run_command(scene_path, report_path, svg_path, seed, method, verbose);
  }
  if (zoo_list->parsed()) {
    for (const zoo::CatalogEntry& e : zoo::catalog()) {
      std::cout << e.name << "(";
      bool first = true;
      for (const auto& [k, v] : e.defaults) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        std::cout << (first ? "" : ", ") << k << "=" << buf;
        first = false;
      }
      std::cout << ")\n    " << e.summary << "\n";
    }
    return 0;
  }
  if (check_cmd->parsed()) return check::run_suite(std::cout) ? 0 : kIdentityViolation;
  return 0;
}
