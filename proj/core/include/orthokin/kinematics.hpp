#pragma once

#include <array>
#include <vector>

#include "orthokin/polynomial.hpp"

namespace orthokin {

/**
 * Design lengths of one orthogonal 3R positioning manipulator.
 *
 * The twist angles are fixed by the family (alpha2 = -90 deg,
 * alpha3 = +90 deg), the last joint offset is zero and the joints are
 * unlimited. d2, d3, d4 are link lengths along the common normals, r2 is the
 * offset along the second joint axis.
 */
struct DhParams {
  double d2 = 1.0;
  double d3 = 1.0;
  double d4 = 1.0;
  double r2 = 0.0;

  /// Throws std::invalid_argument unless d2, d3, d4 > 0, r2 >= 0, all finite.
  void validate() const;
  /// Same manipulator scaled so that d2 = 1.
  DhParams normalized() const;
  DhParams scaled(double lambda) const;
  /// d2 + d3 + d4 + r2, an upper bound on the distance of the end point from the base.
  double reach() const { return d2 + d3 + d4 + r2; }

  friend bool operator==(const DhParams&, const DhParams&) = default;
};

/// Wraps an angle to [-pi, pi).
double wrap_angle(double a);

struct JointConfig {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  JointConfig wrapped() const;
};

/// Max over the three joints of the angular distance on the circle.
double torus_distance(const JointConfig& a, const JointConfig& b);

struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Point of the workspace half cross-section, rho = sqrt(x^2 + y^2).
struct CrossSectionPoint {
  double rho = 0.0;
  double z = 0.0;
};

CrossSectionPoint to_cross_section(const CartesianPoint& p);

/// Position of the end point. Modified DH chain
/// Rot(x, alpha_i) Trans(x, d_i) Rot(z, theta_i) Trans(z, r_i) with the end
/// point at distance d4 along x of frame 3:
///   x = c1 (c2 (d3 + c3 d4) + d2) - s1 (s3 d4 + r2)
///   y = s1 (c2 (d3 + c3 d4) + d2) + c1 (s3 d4 + r2)
///   z = -s2 (d3 + c3 d4)
CartesianPoint forward_kinematics(const DhParams& params, const JointConfig& q);

/// (rho, z) image of (theta2, theta3); theta1 only rotates about the base axis.
CrossSectionPoint cross_section_image(const DhParams& params, double theta2, double theta3);

/// Closed-form Jacobian determinant up to the constant factor d4:
/// (d3 + c3 d4)(s3 d2 + c2 (s3 d3 - c3 r2)).
double det_jacobian_analytic(const DhParams& params, const JointConfig& q);

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Determinant of the 3x3 position Jacobian by central differences of
/// forward_kinematics. Equals d4 * det_jacobian_analytic.
double det_jacobian_numeric(const DhParams& params, const JointConfig& q,
                            double step = kFiniteDifferenceStep);

/// 3x3 position Jacobian, analytic. Column j is d(x, y, z)/d theta_j.
std::array<std::array<double, 3>, 3> position_jacobian(const DhParams& params,
                                                       const JointConfig& q);

/**
 * The position equation left after eliminating theta1 and theta2, as a
 * function of theta3 for a fixed target (rho, z):
 *
 *   E(theta3) = U^2 + V^2 - rho^2,
 *   U = K - (d3 d4 c3 + r2 d4 s3) / d2,  V = r2 + d4 s3,
 *   K = (rho^2 + z^2 + d2^2 - d3^2 - d4^2 - r2^2) / (2 d2).
 *
 * Roots of E are the theta3 values of the inverse kinematic solutions; the
 * half-angle substitution t = tan(theta3 / 2) turns (1 + t^2)^2 E into the
 * IK quartic.
 */
struct IkAngleEquation {
  DhParams params;
  double rho2 = 0.0;
  double z = 0.0;

  double value(double theta3) const;
  double first_derivative(double theta3) const;
  double second_derivative(double theta3) const;
  /// U at theta3; equals c2 (d3 + c3 d4) + d2 for a solution.
  double u(double theta3) const;
  double v(double theta3) const;
};

IkAngleEquation ik_angle_equation(const DhParams& params, const CrossSectionPoint& target);

struct IkQuartic {
  QuarticCoeffs coeffs{};  // a4..a0 in t = tan(theta3 / 2)
  double rho2 = 0.0;
  double z = 0.0;
  DhParams params;
  /// |a4| negligible: theta3 = pi is (nearly) a solution, or the parameters
  /// are non-generic.
  bool degenerate_leading = false;

  double eval(double t) const { return polyval(coeffs, t); }
};

IkQuartic ik_quartic(const DhParams& params, const CrossSectionPoint& target);

/// The quartic rewritten in s = -1/t = tan((theta3 - pi) / 2). Roots with
/// |theta3| > pi/2 are better conditioned there.
QuarticCoeffs reversed_chart(const QuarticCoeffs& coeffs);

/// theta3 roots of the eliminated position equation, with multiplicities.
struct IkRootSet {
  std::vector<RootCluster> theta3;  // value is theta3 in (-pi, pi]
  bool theta3_at_pi = false;        // recovered from the pre-substitution equation
  bool degenerate = false;          // equation vanishes identically

  int count() const;
  bool has_multiple_root() const;
};

IkRootSet ik_roots(const DhParams& params, const CrossSectionPoint& target,
                   double tol_cluster = kRootClusterTolerance);

struct IkSolutions {
  std::vector<JointConfig> configs;  // one per distinct real root
  int real_root_count = 0;           // real roots counted with multiplicity
  /// Some solution has d3 + c3 d4 ~ 0, so theta2 is indeterminate (the point
  /// is the image of a singular line). theta2 = 0 is reported for it.
  bool near_singular = false;
  /// Two or more roots coincide within the cluster tolerance: the point lies
  /// on (or within tolerance of) a workspace boundary.
  bool double_root = false;
  /// theta3 = pi was recovered from the pre-substitution equation.
  bool theta3_at_pi = false;
};

/// All inverse kinematic solutions reaching p.
IkSolutions solve_ik(const DhParams& params, const CartesianPoint& p,
                     double tol_cluster = kRootClusterTolerance);

}  // namespace orthokin
