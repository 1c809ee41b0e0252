#include "pdmspec/models.hpp"

namespace pdmspec::models {

TargetModel make_target(const potentials::GeneratorSpec& gen, const maps::MassProfile& profile,
                        const maps::CoordinateMap& map) {
  return {gen, profile, map, potentials::target_potential(gen, profile, map),
          potentials::generator_in_x(gen, map)};
}

TargetModel scarf2_target(double V2, const expr::Expr& f, Interval domain, int branch) {
  const maps::MassAndMap mm = maps::mass_from_f(f, domain, branch);
  return make_target(potentials::scarf2_generator(V2), mm.profile, mm.map);
}

TargetModel scarf2_asinh_target(double V2) {
  return scarf2_target(V2, expr::parse("x+sqrt(x^2+1)"));
}

TargetModel periodic_target(const expr::Expr& g, Interval domain) {
  const maps::MassAndMap mm = maps::mass_from_g(g, domain);
  return make_target(potentials::periodic_generator(), mm.profile, mm.map);
}

TargetModel periodic_arctan_target() { return periodic_target(expr::parse("x")); }

verify::OperatorPair assemble_pair(const TargetModel& t, const discretize::GridSpec& grid,
                                   const Variation& var) {
  const potentials::ComplexPotential pot =
      var.flip_w ? potentials::conjugated(t.potential) : t.potential;
  std::optional<std::function<double(double)>> g1;
  if (var.g1_scale != 1.0) {
    g1 = [p = t.profile, s = var.g1_scale](double x) { return 0.5 * s * p.mu_d2(x).d1; };
  }
  return {discretize::assemble_eta1(t.profile, t.F_x, grid, g1),
          discretize::assemble_target(t.profile, pot, grid)};
}

Interval matched_interval(const maps::CoordinateMap& map, double qa, double qb) {
  return {map.x(qa), map.x(qb)};
}

}  // namespace pdmspec::models
