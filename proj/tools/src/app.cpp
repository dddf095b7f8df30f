#include "orthokin/cli/app.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "orthokin/singularity.hpp"

namespace orthokin::cli {

namespace {

void add_design_flags(CLI::App* sc, Options& o) {
  sc->add_option("--d2", o.params.d2, "Link length d2")->capture_default_str();
  sc->add_option("--d3", o.params.d3, "Link length d3")->required();
  sc->add_option("--d4", o.params.d4, "Link length d4")->required();
  sc->add_option("--r2", o.params.r2, "Joint offset r2")->required();
}

void add_output_flags(CLI::App* sc, Options& o) {
  sc->add_option("--out", o.out, "Output file (default: stdout)");
  sc->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
  sc->add_flag("--degrees", o.degrees, "Angle-valued inputs are in degrees");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workspace topology of orthogonal 3R positioning manipulators", "orthokin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ORTHOKIN_VERSION);
  Options o;

  auto* classify = app.add_subcommand("classify", "Domain, cusps and cuspidality of one design");
  add_design_flags(classify, o);
  add_output_flags(classify, o);
  classify->add_option("--samples", o.samples, "Samples per curve component for the cusp search");
  classify->add_option("--resolution", o.resolution, "Oracle grid per axis (with --empirical)");
  classify->add_flag("--empirical", o.empirical, "Also label the design with the brute-force oracle");

  auto* joint = app.add_subcommand("plot-jointspace", "Singular curves and lines in (theta2, theta3)");
  auto* work = app.add_subcommand("plot-workspace", "Half cross-section boundaries, cusps, isolated points");
  for (auto* sc : {joint, work}) {
    add_design_flags(sc, o);
    add_output_flags(sc, o);
    sc->add_option("--samples", o.samples, "Samples per curve component");
    sc->add_option("--config", o.config, "Mark a configuration: theta1 theta2 theta3")->expected(3);
  }

  auto* sweep = app.add_subcommand("sweep", "Domain labels over a (d3, d4) grid at fixed d2, r2");
  o.params.r2 = 1.0;
  sweep->add_option("--d2", o.params.d2, "Link length d2")->capture_default_str();
  sweep->add_option("--r2", o.params.r2, "Joint offset r2")->capture_default_str();
  add_output_flags(sweep, o);
  sweep->add_option("--resolution", o.resolution, "Cells per axis (>= 32, default 200)");
  sweep->add_option("--d3-max", o.d3_max, "Upper end of the d3 range")->capture_default_str();
  sweep->add_option("--d4-max", o.d4_max, "Upper end of the d4 range")->capture_default_str();
  sweep->add_flag("--empirical", o.empirical, "Label cells with the brute-force oracle (slow)");
  sweep->add_option("--samples", o.samples, "Oracle grid per axis with --empirical (default 512)");

  auto* check = app.add_subcommand("check", "Oracle agreement suite on seeded random draws");
  add_output_flags(check, o);
  check->add_option("--draws", o.draws, "Number of random designs")->capture_default_str();
  check->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  check->add_option("--resolution", o.resolution, "Oracle grid per axis (default 512)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (o.degrees) {
    for (double& a : o.config) a *= std::numbers::pi / 180.0;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (classify->parsed()) code = cmd_classify(o, out, err);
    else if (joint->parsed()) code = cmd_plot_jointspace(o, out, err);
    else if (work->parsed()) code = cmd_plot_workspace(o, out, err);
    else if (sweep->parsed()) code = cmd_sweep(o, out, err);
    else code = cmd_check(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.message << '\n';
    return kExitUsage;
  } catch (const NonGenericError& e) {
    err << "non-generic: " << e.what() << '\n';
    return kExitNonGeneric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall time: %.3f s\n", seconds);
  err << buf;
  return code;
}

}  // namespace orthokin::cli
