#pragma once

#include <functional>
#include <string>

#include "pdmspec/discretize.hpp"
#include "pdmspec/maps.hpp"
#include "pdmspec/potentials.hpp"
#include "pdmspec/verify.hpp"

namespace pdmspec::models {

/// PDM target assembled from a generator and a mass/map pair.
struct TargetModel {
  potentials::GeneratorSpec gen;
  maps::MassProfile profile;
  maps::CoordinateMap map;
  potentials::ComplexPotential potential;
  std::function<double(double)> F_x;
};

TargetModel make_target(const potentials::GeneratorSpec& gen, const maps::MassProfile& profile,
                        const maps::CoordinateMap& map);

/// Scarf II generator with V1 = V2^2 pushed through q = branch * ln f(x).
TargetModel scarf2_target(double V2, const expr::Expr& f, Interval domain = Interval::real_line(),
                          int branch = +1);
/// The asinh map f = x + sqrt(x^2 + 1), M = 1/(1 + x^2).
TargetModel scarf2_asinh_target(double V2);

/// Periodic generator pushed through q = arctan g(x).
TargetModel periodic_target(const expr::Expr& g, Interval domain = Interval::real_line());
/// g = x, M = (1 + x^2)^-2.
TargetModel periodic_arctan_target();

/// Deliberate defects for negative controls.
struct Variation {
  /// Use V - iW instead of V + iW in H.
  bool flip_w = false;
  /// G1 = g1_scale * mu'/2 in eta1.
  double g1_scale = 1.0;
};

verify::OperatorPair assemble_pair(const TargetModel& t, const discretize::GridSpec& grid,
                                   const Variation& var = {});

/// x-interval whose image under q is (qa, qb).
Interval matched_interval(const maps::CoordinateMap& map, double qa, double qb);

}  // namespace pdmspec::models
