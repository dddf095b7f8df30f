#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orthokin/classification.hpp"
#include "orthokin/kinematics.hpp"
#include "orthokin/singularity.hpp"

// Brute-force validators. Nothing here uses the closed-form determinant, the
// curve windows or the separating surfaces. The singular curves are the
// sign-change set, on a torus grid, of the finite-difference Jacobian
// determinant divided by the (also finite-difference) singular-line factor.

namespace orthokin {

struct GridSpec {
  int resolution = 512;  // samples per axis

  /// Throws std::invalid_argument for resolution < 64.
  void validate() const;
};

enum class OracleStatus { Ok, UnstableCount, NoMatch };

std::string_view to_string(OracleStatus status);

struct BruteIkResult {
  int count = 0;
  std::vector<JointConfig> solutions;
  /// Seeds whose Newton run did not reach the residual tolerance.
  int nonconverged_seeds = 0;
};

inline constexpr int kNewtonIterations = 50;
inline constexpr double kNewtonTolerance = 1e-12;
inline constexpr double kDuplicateDistance = 1e-6;

/// IK count by damped Newton on (rho^2, z) from the centre of every cell of a
/// (theta2, theta3) grid, keeping converged runs with |FK - point| small and
/// merging those within kDuplicateDistance on the torus.
BruteIkResult ik_count_brute(const DhParams& params, const CartesianPoint& point,
                             const GridSpec& grid = {});

/// One point of the numerical singular curves, found on a grid edge.
struct SingularSample {
  double theta2 = 0.0;
  double theta3 = 0.0;
  CrossSectionPoint image;
  int component = 0;
};

struct BruteCusp {
  CrossSectionPoint location;
  double theta2 = 0.0;
  double theta3 = 0.0;
  int component = 0;
  BoundaryRole boundary = BoundaryRole::Internal;
};

struct BruteCuspResult {
  OracleStatus status = OracleStatus::Ok;
  int count = 0;
  std::vector<BruteCusp> cusps;
  std::vector<double> tolerances;         // cluster radii of the stability sweep
  std::vector<int> count_per_tolerance;   // same order
  int components = 0;                     // closed curve components found
  int external_component = -1;            // component reaching the largest rho
  bool four_fold = false;                 // a multiplicity-4 cluster was met
  std::vector<SingularSample> samples;

  int count_on(BoundaryRole role) const;
};

/// Cusps found as sign changes of E''(theta3) along the numerical singular set,
/// refined by bisection and certified as multiplicity >= 3 clusters of the IK
/// quartic at each cluster radius of the sweep.
BruteCuspResult cusp_brute(const DhParams& params, const GridSpec& grid = {});

struct DomainEvidence {
  SolutionArity arity = SolutionArity::Binary;
  int max_ik_count = 0;
  int cusp_count = 0;
  bool cusps_split = false;
  bool has_hole = false;
  int hole_cells = 0;
  int components = 0;
  OracleStatus cusp_status = OracleStatus::Ok;
  std::vector<int> count_per_tolerance;
};

struct EmpiricalDomain {
  OracleStatus status = OracleStatus::Ok;
  std::optional<DomainId> domain;
  DomainEvidence evidence;
};

/// Ground-truth domain label from the arity, the cusp count, the boundary
/// split and a hole test, matched against the semantics table.
EmpiricalDomain empirical_domain(const DhParams& params, const GridSpec& grid = {});

struct TransitionResult {
  double d4 = 0.0;  // midpoint of the final bracket
  double lower = 0.0;
  double upper = 0.0;
  DomainId below = DomainId::D1;
  DomainId above = DomainId::D1;
  int evaluations = 0;
};

inline constexpr double kTransitionWidth = 1e-4;

/// Bisects on empirical_domain for the d4 at which the label changes across
/// `surface`. Without an explicit bracket one is built halfway to the
/// neighbouring surfaces. Throws std::invalid_argument when the bracket ends
/// share a label and std::runtime_error when a third label shows up inside.
TransitionResult transition_bisect(double d2, double d3, double r2, SurfaceId surface,
                                   std::optional<std::pair<double, double>> bracket = std::nullopt,
                                   const GridSpec& grid = {});

struct C1Check {
  TransitionResult transition;
  double four_equal_roots = 0.0;
  double expanded_general = 0.0;
  std::optional<C1Form> matches;  // form within 1e-3 relative of the bisection
  bool shipped_form_matches = false;
};

/// Settles which form of C1 marks the appearance of cusps.
C1Check check_c1_form(double d2, double d3, double r2, const GridSpec& grid = {});

}  // namespace orthokin
