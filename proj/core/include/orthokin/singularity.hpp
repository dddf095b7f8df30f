#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "orthokin/kinematics.hpp"

namespace orthokin {

/// Raised when an analysis is asked about parameters on which the generic
/// picture does not hold (r2 = 0, coincident features, four equal roots).
class NonGenericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class BranchKind { CurvePlus, CurveMinus, LinePlus, LineMinus };

std::string_view to_string(BranchKind kind);

struct JointSample {
  double theta2 = 0.0;
  double theta3 = 0.0;
};

struct SingularLines {
  std::vector<double> theta3;      // +arccos(-d3/d4), -arccos(-d3/d4); empty when d3 > d4
  bool tangent_degenerate = false;  // d3 == d4: both lines collapse onto theta3 = pi
};

/// Joint-space lines on which d3 + c3 d4 = 0 (end point on the second joint axis).
SingularLines singular_lines(const DhParams& params);

/// Second factor of the Jacobian determinant, s3 d2 + c2 (s3 d3 - c3 r2).
double curve_factor(const DhParams& params, double theta2, double theta3);

/// theta3 interval [begin, end] (end > begin, end - begin < 2 pi) on which
/// |h(theta3)| <= 1 with h = -d2 s3 / (s3 d3 - c3 r2). Each window carries
/// one closed component of the curve part of the singular set.
struct CurveWindow {
  double theta3_begin = 0.0;
  double theta3_end = 0.0;
};

/// Windows of the curve factor, located on an n_samples sweep of theta3 and
/// refined by bisection. Throws NonGenericError for r2 = 0.
std::vector<CurveWindow> curve_windows(const DhParams& params, int n_samples = 1024);

/// Smooth closed parametrisation of one component, phi in [0, 2 pi):
/// theta3 = b + (e - b)(1 - cos phi) / 2, theta2 = +-arccos(h(theta3)) with the
/// sign of sin(phi). phi in [0, pi] is the CurvePlus half.
JointSample curve_point(const DhParams& params, const CurveWindow& window, double phi);

struct SingularBranch {
  BranchKind kind = BranchKind::CurvePlus;
  int component = 0;  // window index for curves, line index for lines
  std::vector<JointSample> samples;
  std::vector<CrossSectionPoint> image;
};

/// Curve branches (two per window) and, when d3 <= d4, the two singular lines.
/// Requires n_samples >= 256.
std::vector<SingularBranch> trace_singularity_curves(const DhParams& params, int n_samples = 1024);

/// Pointwise (rho, z) image of joint samples.
std::vector<CrossSectionPoint> map_to_workspace(const DhParams& params,
                                                std::span<const JointSample> samples);

enum class BoundaryRole { Internal, External };

std::string_view to_string(BoundaryRole role);

/// Pairs of IK counts seen on the two sides of a polyline.
struct ProbeTally {
  int zero_two = 0;
  int two_four = 0;
  int other = 0;
};

struct BoundaryCurve {
  int component = 0;
  BoundaryRole role = BoundaryRole::Internal;
  std::vector<CrossSectionPoint> polyline;  // closed: CurvePlus then CurveMinus image
  ProbeTally probes;
  /// Probes saw both {0,2} and {2,4} crossings along this curve.
  bool ambiguous = false;
};

struct WorkspaceBoundarySet {
  std::vector<BoundaryCurve> internal;  // WS1
  std::vector<BoundaryCurve> external;  // WS2
  std::vector<CrossSectionPoint> isolated_points;
  /// The two isolated points coincide (d3 == d4).
  bool isolated_coincide = false;

  BoundaryRole role_of(int component) const;
};

/// Splits the traced curve components into the external boundary (the
/// component reaching the largest rho) and the internal boundary, probes the
/// IK count on both sides of each, and collects the isolated images of the
/// singular lines.
WorkspaceBoundarySet classify_boundaries(const DhParams& params,
                                         std::span<const SingularBranch> branches);

struct CuspPoint {
  CrossSectionPoint location;
  double theta2 = 0.0;
  double theta3 = 0.0;
  BoundaryRole boundary = BoundaryRole::Internal;
  BranchKind branch = BranchKind::CurvePlus;
  int component = 0;
};

/// A tangent reversal of the boundary image that did not certify as a triple root.
struct CuspCandidateFailure {
  CrossSectionPoint location;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double velocity = 0.0;
  int max_multiplicity = 0;
};

struct CuspSearchResult {
  std::vector<CuspPoint> cusps;
  std::vector<CuspCandidateFailure> failures;
  /// A four-fold root was met: the manipulator sits on a transition.
  bool non_generic = false;

  int count() const { return static_cast<int>(cusps.size()); }
  int count_on(BoundaryRole role) const;
};

/// Cusps of the workspace boundary: zeros of the image velocity along each
/// curve component, refined by bisection and certified by a root cluster of
/// multiplicity >= 3 in the IK quartic at the image point.
CuspSearchResult find_cusps(const DhParams& params, int n_samples = 2048);

struct IkCount {
  int count = 0;
  bool boundary_proximity = false;  // near-double roots: point within tolerance of a boundary
};

/// Number of inverse kinematic solutions at a cross-section point.
IkCount ik_count_at(const DhParams& params, const CrossSectionPoint& point,
                    double tol_cluster = kRootClusterTolerance);

}  // namespace orthokin
