#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "commands.hpp"
#include "pdmspec/error.hpp"
#include "run_config.hpp"

namespace {

using pdmspec::cli::Json;
using pdmspec::cli::RunConfig;

int exit_code_for(pdmspec::ErrorCode code) {
  switch (code) {
    case pdmspec::ErrorCode::no_convergence:
    case pdmspec::ErrorCode::quadrature_failure:
    case pdmspec::ErrorCode::singular_shift:
      return 3;
    default:
      return 2;
  }
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string to_csv(const Json& payload) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << "re,im,residual,bound\n";
  for (const auto& e : payload["eigenvalues"]) {
    s << e["re"].get<double>() << ',' << e["im"].get<double>() << ',';
    if (!e["residual"].is_null()) s << e["residual"].get<double>();
    s << ',' << (e["bound"].get<bool>() ? 1 : 0) << '\n';
  }
  return s.str();
}

void honor_thread_cap() {
  if (const char* env = std::getenv("PDMSPEC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  honor_thread_cap();
  RunConfig cfg;
  CLI::App app{"PDM eta-weak-pseudo-Hermitian Hamiltonian toolkit"};
  app.require_subcommand(1);

  std::string grid, qrange, domain, format = "json";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "Output path (stdout if omitted)");
    sub->add_option("--tol", cfg.tol, "Eigenvalue match tolerance");
    sub->add_option("--ratio-tol", cfg.ratio_tol, "Boundary amplitude ratio for bound states");
    sub->add_option("--levels", cfg.levels, "Number of low-lying levels compared");
  };
  auto add_model_params = [&](CLI::App* sub) {
    sub->add_option("name", cfg.model, "scarf2, periodic or morse")->required();
    sub->add_option("--v1", cfg.v1, "Scarf II V1 (default V2^2)");
    sub->add_option("--v2", cfg.v2, "Scarf II V2");
    sub->add_option("--eps", cfg.epsilon, "Scarf II epsilon branch");
    sub->add_option("--eta", cfg.eta, "Morse eta");
    sub->add_option("--grid", grid, "Grid a:b:N");
  };

  CLI::App* model = app.add_subcommand("model", "Spectrum of a reference model with analytic comparison");
  add_model_params(model);
  add_common(model);

  CLI::App* map = app.add_subcommand("map", "Build a PDM target and compare it with its reference");
  map->add_option("--f", cfg.f_expr, "Generator f(x) with q = +-ln f");
  map->add_option("--g", cfg.g_expr, "Generator g(x) with q = arctan g");
  map->add_option("--mass", cfg.mass_expr, "Mass profile m(x)");
  map->add_option("--reference", cfg.reference, "scarf2 or periodic");
  map->add_option("--v2", cfg.v2, "Scarf II V2");
  map->add_option("--qrange", qrange, "Reference interval a:b in q");
  map->add_option("--domain", domain, "Mass domain a:b in x (inf allowed)");
  map->add_option("--branch", cfg.branch, "Sign of q = +-ln f");
  map->add_option("--anchor", cfg.anchor, "q(anchor) = 0 for raw masses");
  map->add_option("--N", cfg.N, "Interior grid points of both operators");
  map->add_option("--samples", cfg.samples, "Samples of M, q and the target potential");
  add_common(map);

  CLI::App* verify = app.add_subcommand("verify", "Intertwining, Hermiticity, reality and pseudo-norm checks");
  add_model_params(verify);
  verify->add_option("--checks", cfg.checks, "Subset of intertwine,hermiticity,reality,pseudonorm")
      ->delimiter(',');
  verify->add_option("--ladder", cfg.ladder, "Coarsest N of the N, 2N, 4N ladder");
  verify->add_option("--qrange", qrange, "Reference interval a:b in q for target checks");
  add_common(verify);

  CLI::App* crossings = app.add_subcommand("crossings", "Scarf II level crossings on a V2 grid");
  crossings->add_option("--v2", cfg.v2_grid, "Comma-separated V2 values")->delimiter(',')->required();
  add_common(crossings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format = format == "csv" ? pdmspec::cli::Format::csv : pdmspec::cli::Format::json;
    if (!grid.empty()) cfg.grid = pdmspec::cli::parse_grid(grid);
    if (!qrange.empty()) cfg.qrange = pdmspec::cli::parse_range(qrange);
    if (!domain.empty()) cfg.domain = pdmspec::cli::parse_range(domain);
    pdmspec::cli::validate(cfg);

    pdmspec::cli::Outcome res;
    if (cfg.subcommand == "model") res = pdmspec::cli::cmd_model(cfg);
    else if (cfg.subcommand == "map") res = pdmspec::cli::cmd_map(cfg);
    else if (cfg.subcommand == "verify") res = pdmspec::cli::cmd_verify(cfg);
    else res = pdmspec::cli::cmd_crossings(cfg);

    std::string text;
    if (cfg.format == pdmspec::cli::Format::csv) {
      text = to_csv(res.payload);
    } else {
      Json doc = res.payload;
      doc["metadata"] = {{"generated_at", timestamp()}};
      text = doc.dump(2) + "\n";
    }
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out);
      if (!f) {
        std::cerr << "error: cannot write " << cfg.out << "\n";
        return 2;
      }
      f << text;
    }
    return res.exit_code;
  } catch (const pdmspec::Error& e) {
    std::cerr << "error [" << pdmspec::to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
