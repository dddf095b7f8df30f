#include "orthokin/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace orthokin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearSingularRatio = 1e-9;

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double distance(const CartesianPoint& a, const CartesianPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

// A few Gauss-Newton steps on forward_kinematics(q) = p; only improving steps are kept.
JointConfig polish_joint_solution(const DhParams& params, const CartesianPoint& p, JointConfig q) {
  double best = distance(forward_kinematics(params, q), p);
  for (int it = 0; it < 4 && best > 0.0; ++it) {
    const auto j = position_jacobian(params, q);
    const double det = det3(j);
    if (std::abs(det) < 1e-12 * std::pow(params.reach(), 3)) break;
    const auto f = forward_kinematics(params, q);
    const std::array<double, 3> r{p.x - f.x, p.y - f.y, p.z - f.z};
    // Cramer's rule for J dq = r.
    std::array<double, 3> dq{};
    for (int c = 0; c < 3; ++c) {
      auto m = j;
      for (int row = 0; row < 3; ++row) m[row][c] = r[row];
      dq[c] = det3(m) / det;
    }
    JointConfig next{q.theta1 + dq[0], q.theta2 + dq[1], q.theta3 + dq[2]};
    const double res = distance(forward_kinematics(params, next), p);
    if (!(res < best)) break;
    best = res;
    q = next;
  }
  return q.wrapped();
}

}  // namespace

void DhParams::validate() const {
  const bool finite = std::isfinite(d2) && std::isfinite(d3) && std::isfinite(d4) && std::isfinite(r2);
  if (!finite || !(d2 > 0.0) || !(d3 > 0.0) || !(d4 > 0.0) || !(r2 >= 0.0)) {
    throw std::invalid_argument("DhParams: need d2, d3, d4 > 0 and r2 >= 0 (got d2=" +
                                std::to_string(d2) + ", d3=" + std::to_string(d3) +
                                ", d4=" + std::to_string(d4) + ", r2=" + std::to_string(r2) + ")");
  }
}

DhParams DhParams::normalized() const { return scaled(1.0 / d2); }

DhParams DhParams::scaled(double lambda) const {
  return DhParams{d2 * lambda, d3 * lambda, d4 * lambda, r2 * lambda};
}

double wrap_angle(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  w -= kPi;
  // fmod can land exactly on +pi after the shift for inputs just below -pi.
  return w >= kPi ? w - 2.0 * kPi : w;
}

JointConfig JointConfig::wrapped() const {
  return JointConfig{wrap_angle(theta1), wrap_angle(theta2), wrap_angle(theta3)};
}

double torus_distance(const JointConfig& a, const JointConfig& b) {
  auto d = [](double x, double y) { return std::abs(wrap_angle(x - y)); };
  return std::max({d(a.theta1, b.theta1), d(a.theta2, b.theta2), d(a.theta3, b.theta3)});
}

CrossSectionPoint to_cross_section(const CartesianPoint& p) {
  return CrossSectionPoint{std::hypot(p.x, p.y), p.z};
}

CartesianPoint forward_kinematics(const DhParams& params, const JointConfig& q) {
  const double c1 = std::cos(q.theta1), s1 = std::sin(q.theta1);
  const double c2 = std::cos(q.theta2), s2 = std::sin(q.theta2);
  const double c3 = std::cos(q.theta3), s3 = std::sin(q.theta3);
  const double g = params.d3 + c3 * params.d4;
  const double v = s3 * params.d4 + params.r2;
  const double u = c2 * g + params.d2;
  return CartesianPoint{c1 * u - s1 * v, s1 * u + c1 * v, -s2 * g};
}

CrossSectionPoint cross_section_image(const DhParams& params, double theta2, double theta3) {
  const double c3 = std::cos(theta3), s3 = std::sin(theta3);
  const double g = params.d3 + c3 * params.d4;
  const double v = s3 * params.d4 + params.r2;
  const double u = std::cos(theta2) * g + params.d2;
  return CrossSectionPoint{std::hypot(u, v), -std::sin(theta2) * g};
}

double det_jacobian_analytic(const DhParams& params, const JointConfig& q) {
  const double c2 = std::cos(q.theta2);
  const double c3 = std::cos(q.theta3), s3 = std::sin(q.theta3);
  return (params.d3 + c3 * params.d4) *
         (s3 * params.d2 + c2 * (s3 * params.d3 - c3 * params.r2));
}

double det_jacobian_numeric(const DhParams& params, const JointConfig& q, double step) {
  std::array<std::array<double, 3>, 3> j{};
  for (int col = 0; col < 3; ++col) {
    JointConfig plus = q, minus = q;
    double* pp = col == 0 ? &plus.theta1 : col == 1 ? &plus.theta2 : &plus.theta3;
    double* pm = col == 0 ? &minus.theta1 : col == 1 ? &minus.theta2 : &minus.theta3;
    *pp += step;
    *pm -= step;
    const auto a = forward_kinematics(params, plus);
    const auto b = forward_kinematics(params, minus);
    j[0][col] = (a.x - b.x) / (2.0 * step);
    j[1][col] = (a.y - b.y) / (2.0 * step);
    j[2][col] = (a.z - b.z) / (2.0 * step);
  }
  return det3(j);
}

std::array<std::array<double, 3>, 3> position_jacobian(const DhParams& params,
                                                       const JointConfig& q) {
  const double c1 = std::cos(q.theta1), s1 = std::sin(q.theta1);
  const double c2 = std::cos(q.theta2), s2 = std::sin(q.theta2);
  const double c3 = std::cos(q.theta3), s3 = std::sin(q.theta3);
  const double g = params.d3 + c3 * params.d4;
  const double dg = -s3 * params.d4;
  const double v = s3 * params.d4 + params.r2;
  const double dv = c3 * params.d4;
  const double u = c2 * g + params.d2;
  const double du2 = -s2 * g;
  const double du3 = c2 * dg;
  return {{
      {-s1 * u - c1 * v, c1 * du2, c1 * du3 - s1 * dv},
      {c1 * u - s1 * v, s1 * du2, s1 * du3 + c1 * dv},
      {0.0, -c2 * g, -s2 * dg},
  }};
}

IkAngleEquation ik_angle_equation(const DhParams& params, const CrossSectionPoint& target) {
  return IkAngleEquation{params, target.rho * target.rho, target.z};
}

double IkAngleEquation::u(double theta3) const {
  const auto& p = params;
  const double k = (rho2 + z * z + p.d2 * p.d2 - p.d3 * p.d3 - p.d4 * p.d4 - p.r2 * p.r2) /
                   (2.0 * p.d2);
  return k - p.d4 * (p.d3 * std::cos(theta3) + p.r2 * std::sin(theta3)) / p.d2;
}

double IkAngleEquation::v(double theta3) const {
  return params.r2 + params.d4 * std::sin(theta3);
}

double IkAngleEquation::value(double theta3) const {
  const double uu = u(theta3), vv = v(theta3);
  return uu * uu + vv * vv - rho2;
}

double IkAngleEquation::first_derivative(double theta3) const {
  const auto& p = params;
  const double c = std::cos(theta3), s = std::sin(theta3);
  const double du = p.d4 * (p.d3 * s - p.r2 * c) / p.d2;
  const double dv = p.d4 * c;
  return 2.0 * (u(theta3) * du + v(theta3) * dv);
}

double IkAngleEquation::second_derivative(double theta3) const {
  const auto& p = params;
  const double c = std::cos(theta3), s = std::sin(theta3);
  const double du = p.d4 * (p.d3 * s - p.r2 * c) / p.d2;
  const double ddu = p.d4 * (p.d3 * c + p.r2 * s) / p.d2;
  const double dv = p.d4 * c;
  const double ddv = -p.d4 * s;
  return 2.0 * (du * du + u(theta3) * ddu + dv * dv + v(theta3) * ddv);
}

IkQuartic ik_quartic(const DhParams& params, const CrossSectionPoint& target) {
  if (!(target.rho >= 0.0)) throw std::invalid_argument("ik_quartic: rho must be >= 0");
  const auto& p = params;
  const double rho2 = target.rho * target.rho;
  const double k = (rho2 + target.z * target.z + p.d2 * p.d2 - p.d3 * p.d3 - p.d4 * p.d4 -
                    p.r2 * p.r2) /
                   (2.0 * p.d2);
  const double alpha = p.d3 * p.d4 / p.d2;
  const double beta = p.r2 * p.d4 / p.d2;
  // (1 + t^2) U = (k + alpha) t^2 - 2 beta t + (k - alpha)
  // (1 + t^2) V = r2 t^2 + 2 d4 t + r2
  const std::array<double, 3> uq{k + alpha, -2.0 * beta, k - alpha};
  const std::array<double, 3> vq{p.r2, 2.0 * p.d4, p.r2};
  auto square = [](const std::array<double, 3>& a) {
    return std::array<double, 5>{a[0] * a[0], 2.0 * a[0] * a[1], a[1] * a[1] + 2.0 * a[0] * a[2],
                                 2.0 * a[1] * a[2], a[2] * a[2]};
  };
  const auto u2 = square(uq);
  const auto v2 = square(vq);
  // rho^2 (1 + t^2)^2
  const std::array<double, 5> w2{rho2, 0.0, 2.0 * rho2, 0.0, rho2};

  IkQuartic out;
  out.rho2 = rho2;
  out.z = target.z;
  out.params = params;
  double scale = 0.0;
  for (int i = 0; i < 5; ++i) {
    out.coeffs[i] = u2[i] + v2[i] - w2[i];
    scale = std::max(scale, std::abs(out.coeffs[i]));
  }
  out.degenerate_leading = std::abs(out.coeffs[0]) < 1e-12 * scale;
  return out;
}

QuarticCoeffs reversed_chart(const QuarticCoeffs& c) {
  return QuarticCoeffs{c[4], -c[3], c[2], -c[1], c[0]};
}

int IkRootSet::count() const {
  int n = 0;
  for (const auto& r : theta3) n += r.multiplicity;
  return n;
}

bool IkRootSet::has_multiple_root() const {
  return std::any_of(theta3.begin(), theta3.end(),
                     [](const RootCluster& r) { return r.multiplicity >= 2; });
}

IkRootSet ik_roots(const DhParams& params, const CrossSectionPoint& target, double tol_cluster) {
  const auto quartic = ik_quartic(params, target);
  IkRootSet out;
  double coeff_scale = 0.0;
  for (double c : quartic.coeffs) coeff_scale = std::max(coeff_scale, std::abs(c));
  if (!(coeff_scale > 0.0)) {
    out.degenerate = true;
    return out;
  }
  const auto roots = quartic_real_roots(quartic.coeffs, tol_cluster);
  for (const auto& c : roots.clusters) {
    out.theta3.push_back(RootCluster{2.0 * std::atan(c.value), c.multiplicity});
  }
  // Roots lost to the half-angle substitution sit at t = infinity, i.e. theta3 = pi.
  if (roots.degree < 4) {
    const auto eq = ik_angle_equation(params, target);
    const double scale2 = params.reach() * params.reach();
    if (std::abs(eq.value(kPi)) <= 1e-9 * scale2) {
      out.theta3.push_back(RootCluster{kPi, 4 - roots.degree});
      out.theta3_at_pi = true;
    }
  }
  return out;
}

IkSolutions solve_ik(const DhParams& params, const CartesianPoint& p, double tol_cluster) {
  params.validate();
  const auto target = to_cross_section(p);
  const auto eq = ik_angle_equation(params, target);
  const auto roots = ik_roots(params, target, tol_cluster);

  IkSolutions out;
  out.theta3_at_pi = roots.theta3_at_pi;
  if (roots.degenerate) {
    // Every theta3 satisfies the eliminated equation; only possible on non-generic data.
    out.near_singular = true;
    return out;
  }

  const double phi_xy = std::atan2(p.y, p.x);
  for (const auto& root : roots.theta3) {
    const double theta3 = root.value;
    out.real_root_count += root.multiplicity;
    if (root.multiplicity >= 2) out.double_root = true;
    const double g = params.d3 + std::cos(theta3) * params.d4;
    const double u = eq.u(theta3);
    const double v = eq.v(theta3);
    const bool on_line = std::abs(g) < kNearSingularRatio * params.reach();
    const double theta2 = on_line ? 0.0 : std::atan2(-p.z / g, (u - params.d2) / g);
    out.near_singular = out.near_singular || on_line;
    JointConfig q{phi_xy - std::atan2(v, u), theta2, theta3};
    if (!on_line) q = polish_joint_solution(params, p, q);
    out.configs.push_back(q.wrapped());
  }
  return out;
}

}  // namespace orthokin
