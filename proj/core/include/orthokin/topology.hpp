#pragma once

#include <optional>

#include "orthokin/classification.hpp"
#include "orthokin/oracle.hpp"
#include "orthokin/singularity.hpp"

namespace orthokin {

struct TopologyOptions {
  bool empirical = false;  // also run the brute-force labelling (slow)
  GridSpec grid;
  int cusp_samples = 2048;
  C1Form form = kDefaultC1Form;
};

/// Everything known about one design.
struct TopologyReport {
  DhParams params;
  DomainClassification analytic;
  std::optional<EmpiricalDomain> empirical;
  CuspSearchResult cusps;
  CuspidalityVerdict cuspidal;
  SeparatingSurfaces surfaces;
  SurfaceGap nearest;
  /// Set when both labels exist.
  std::optional<bool> agreement;

  bool generic() const { return !analytic.non_generic && !cusps.non_generic; }
};

/// Classifies, counts cusps and, on request, labels the design empirically.
/// r2 = 0 is reported as non-generic with an empty cusp list.
TopologyReport analyze(const DhParams& params, const TopologyOptions& options = {});

}  // namespace orthokin
