#include "orthokin/topology.hpp"

namespace orthokin {

TopologyReport analyze(const DhParams& params, const TopologyOptions& options) {
  params.validate();
  TopologyReport out;
  out.params = params;
  out.analytic = classify_domain(params, options.form);
  out.cuspidal = is_cuspidal(params, options.form);
  out.surfaces = surfaces(params.d2, params.d3, params.r2, options.form);
  out.nearest = distance_to_nearest_surface(params, options.form);
  try {
    out.cusps = find_cusps(params, options.cusp_samples);
  } catch (const NonGenericError&) {
    out.cusps.non_generic = true;
  }
  if (options.empirical) {
    out.empirical = empirical_domain(params, options.grid);
    if (out.analytic.domain && out.empirical->domain)
      out.agreement = *out.analytic.domain == *out.empirical->domain;
  }
  return out;
}

}  // namespace orthokin
