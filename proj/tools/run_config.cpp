#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pdmspec/error.hpp"
#include "pdmspec/expr.hpp"

namespace pdmspec::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

double parse_constant(const std::string& text) {
  std::string t;
  std::copy_if(text.begin(), text.end(), std::back_inserter(t), [](char c) { return c != ' '; });
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  // No identifier can match "#", so variables are rejected by the parser.
  return expr::eval(expr::parse(t, "#"), 0.0);
}

GridArg parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw BadParams("grid must look like a:b:N, got '" + text + "'");
  GridArg g;
  g.a = parse_constant(parts[0]);
  g.b = parse_constant(parts[1]);
  std::size_t used = 0;
  try {
    g.N = std::stoi(parts[2], &used);
  } catch (const std::exception&) {
    throw BadParams("grid point count must be an integer, got '" + parts[2] + "'");
  }
  if (used != parts[2].size()) throw BadParams("grid point count must be an integer");
  if (!std::isfinite(g.a) || !std::isfinite(g.b) || !(g.a < g.b))
    throw BadParams("grid needs finite ends with a < b");
  if (g.N < 16) throw BadParams("grid needs N >= 16");
  return g;
}

Interval parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw BadParams("range must look like a:b, got '" + text + "'");
  Interval r{parse_constant(parts[0]), parse_constant(parts[1])};
  if (!(r.lo < r.hi)) throw BadParams("range needs a < b");
  return r;
}

void validate(const RunConfig& cfg) {
  static const std::set<std::string> models{"scarf2", "periodic", "morse"};
  static const std::set<std::string> checks{"intertwine", "hermiticity", "reality", "pseudonorm"};
  if (cfg.subcommand == "model" || cfg.subcommand == "verify") {
    if (!models.count(cfg.model)) throw BadParams("unknown model '" + cfg.model + "'");
  }
  if (cfg.subcommand == "model" || cfg.subcommand == "verify" || cfg.subcommand == "map") {
    if (!std::isfinite(cfg.v2) || cfg.v2 == 0.0) throw BadParams("--v2 must be finite and nonzero");
    if (cfg.v1 && !(*cfg.v1 > 0.0)) throw BadParams("--v1 must be positive");
    if (cfg.epsilon != 1 && cfg.epsilon != -1) throw BadParams("--eps must be +1 or -1");
    if (!std::isfinite(cfg.eta)) throw BadParams("--eta must be finite");
  }
  if (cfg.grid && (!std::isfinite(cfg.grid->a) || !std::isfinite(cfg.grid->b) ||
                   !(cfg.grid->a < cfg.grid->b) || cfg.grid->N < 16))
    throw BadParams("grid needs finite ends with a < b and N >= 16");
  if (!(cfg.ratio_tol > 0.0) || !(cfg.tol > 0.0)) throw BadParams("tolerances must be positive");
  if (cfg.levels < 1) throw BadParams("--levels must be positive");
  if (cfg.subcommand == "map") {
    const int given = !cfg.f_expr.empty() + !cfg.g_expr.empty() + !cfg.mass_expr.empty();
    if (given != 1) throw BadParams("map needs exactly one of --f, --g, --mass");
    if (cfg.reference != "scarf2" && cfg.reference != "periodic")
      throw BadParams("--reference must be scarf2 or periodic");
    if (cfg.qrange && !cfg.qrange->finite()) throw BadParams("--qrange must be finite");
    if (cfg.branch != 1 && cfg.branch != -1) throw BadParams("--branch must be +1 or -1");
    if (cfg.N < 16) throw BadParams("--N must be at least 16");
    if (cfg.samples < 2) throw BadParams("--samples must be at least 2");
  }
  if (cfg.subcommand == "verify") {
    for (const auto& c : cfg.checks)
      if (!checks.count(c)) throw BadParams("unknown check '" + c + "'");
    if (cfg.ladder && *cfg.ladder < 16) throw BadParams("--ladder must be at least 16");
  }
  if (cfg.subcommand == "crossings") {
    if (cfg.v2_grid.empty()) throw BadParams("crossings needs --v2 values");
    for (double v : cfg.v2_grid)
      if (!std::isfinite(v) || !(v > 0.5)) throw BadParams("crossing grid values must exceed 1/2");
  }
}

}  // namespace pdmspec::cli
