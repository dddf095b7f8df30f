#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orthokin/kinematics.hpp"

namespace orthokin::cli {

struct Options {
  DhParams params{1.0, 0.0, 0.0, 0.0};
  std::string out;                  // empty: stdout
  std::optional<std::string> format;
  std::optional<int> samples;
  std::optional<int> resolution;
  bool empirical = false;
  int draws = 50;
  std::uint64_t seed = 1;
  bool degrees = false;
  std::vector<double> config;       // theta1 theta2 theta3, marked on plots
  double d3_max = 4.0;
  double d4_max = 4.0;
};

/// Thrown for bad flag values found after parsing; maps to exit code 1.
struct UsageError {
  std::string message;
};

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err);
int cmd_plot_jointspace(const Options& o, std::ostream& out, std::ostream& err);
int cmd_plot_workspace(const Options& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err);
int cmd_check(const Options& o, std::ostream& out, std::ostream& err);

/// %.17g
std::string num(double v);

}  // namespace orthokin::cli
