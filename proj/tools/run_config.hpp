#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdmspec/interval.hpp"

namespace pdmspec::cli {

enum class Format { json, csv };

struct GridArg {
  double a = 0.0;
  double b = 0.0;
  int N = 0;
};

struct RunConfig {
  std::string subcommand;
  std::string model;
  std::optional<double> v1;
  double v2 = 2.5;
  int epsilon = +1;
  double eta = 2.0;
  std::optional<GridArg> grid;
  double ratio_tol = 1e-4;
  double tol = 5e-3;
  int levels = 4;

  std::string f_expr;
  std::string g_expr;
  std::string mass_expr;
  std::string reference = "scarf2";
  std::optional<Interval> qrange;
  Interval domain;
  int branch = +1;
  double anchor = 0.0;
  int N = 600;
  int samples = 41;

  std::vector<std::string> checks;
  std::optional<int> ladder;

  std::vector<double> v2_grid;

  Format format = Format::json;
  std::string out;
};

/// Parses "a:b:N"; a and b are constant expressions such as -pi or tan(1.2).
GridArg parse_grid(const std::string& text);
/// Parses "a:b"; ends may also be inf / -inf.
Interval parse_range(const std::string& text);
double parse_constant(const std::string& text);

/// Throws BadParams describing the first invalid field.
void validate(const RunConfig& cfg);

}  // namespace pdmspec::cli
