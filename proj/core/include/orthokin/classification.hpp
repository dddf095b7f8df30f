#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "orthokin/kinematics.hpp"

namespace orthokin {

/// Two closed forms are in use for the first separating surface; they
/// differ in the numerator of the radical:
///   FourEqualRoots: (d3^2 + r2^2)^2 - d2^2 (d3^2 - r2^2)
///   ExpandedGeneral: (d3^2 + r2^2)^2 - d2^2 (d3^2 + r2^2)
/// Bisection on the appearance of cusps agrees with FourEqualRoots, which is
/// the shipped default; the other form is kept for the diagnostic check.
enum class C1Form { FourEqualRoots, ExpandedGeneral };

inline constexpr C1Form kDefaultC1Form = C1Form::FourEqualRoots;

std::string_view to_string(C1Form form);

/// d4 values of the four separating surfaces for given (d2, d3, r2).
struct SeparatingSurfaces {
  double a = 0.0;  // sqrt((d3 + d2)^2 + r2^2)
  double b = 0.0;  // sqrt((d3 - d2)^2 + r2^2)
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> c3;  // only for d3 > d2
  std::optional<double> c4;  // only for d3 < d2
};

SeparatingSurfaces surfaces(double d2, double d3, double r2, C1Form form = kDefaultC1Form);

/// Value of the first surface in a given form.
double c1_value(double d2, double d3, double r2, C1Form form);

enum class SurfaceId { C1, C2, C3, C4 };

std::string_view to_string(SurfaceId id);

enum class DomainId { D1, D2, D3, D4, D5 };

std::string_view to_string(DomainId id);
std::optional<DomainId> parse_domain(std::string_view s);

enum class SolutionArity { Binary, Quaternary };

/// What every manipulator of a domain looks like. Unset optionals mean the
/// feature does not distinguish the domain.
struct DomainSemantics {
  SolutionArity arity;
  int cusp_count;
  std::optional<bool> cusps_split_across_boundaries;
  std::optional<bool> has_hole;
};

const DomainSemantics& semantics(DomainId id);

/// Relative distance from a surface under which a design counts as a transition.
inline constexpr double kGenericityMargin = 1e-5;

struct SurfaceGap {
  SurfaceId id = SurfaceId::C1;
  double gap = 0.0;  // d4 - c_i (signed)
};

/// Nearest defined surface in |d4 - c_i|.
SurfaceGap distance_to_nearest_surface(const DhParams& params, C1Form form = kDefaultC1Form);

struct DomainClassification {
  std::optional<DomainId> domain;  // empty when non-generic
  bool non_generic = false;
  std::string reason;
};

/// Domain from the position of d4 relative to the surfaces at (d2, d3, r2):
/// D1 below C1, D2 between C1 and C2, D3 between C2 and C3 (d3 > d2) or C2
/// and C4 (d3 < d2), D4 above C3, D5 above C4.
DomainClassification classify_domain(const DhParams& params, C1Form form = kDefaultC1Form);

struct CuspidalityVerdict {
  bool cuspidal = false;
  bool non_generic = false;
};

/// Explicit cuspidality test: d4 > C1 and (d3 >= d2 or d4 < C4).
CuspidalityVerdict is_cuspidal(const DhParams& params, C1Form form = kDefaultC1Form);

}  // namespace orthokin
