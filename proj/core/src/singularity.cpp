#include "orthokin/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace orthokin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kProbesPerCurve = 10;

// Sign-definite form of |h| - 1: (d2 s3)^2 - (s3 d3 - c3 r2)^2, <= 0 inside a window.
double window_indicator(const DhParams& p, double theta3) {
  const double s3 = std::sin(theta3), c3 = std::cos(theta3);
  const double num = p.d2 * s3;
  const double den = s3 * p.d3 - c3 * p.r2;
  return num * num - den * den;
}

// Edge of {indicator <= 0} between an inside angle and an outside one; the
// inside end is returned so arccos stays defined.
double bisect_window_edge(const DhParams& p, double inside, double outside) {
  for (int it = 0; it < 100 && std::abs(outside - inside) > 1e-15; ++it) {
    const double m = 0.5 * (inside + outside);
    if (window_indicator(p, m) <= 0.0) inside = m;
    else outside = m;
  }
  return inside;
}

void require_generic_offset(const DhParams& p) {
  if (!(p.r2 > 1e-9 * p.reach())) {
    throw NonGenericError("r2 = 0: the curve part of the singular set degenerates into lines");
  }
}

struct ImageDerivative {
  CrossSectionPoint point;
  double rho2_dt2, rho2_dt3, z_dt2, z_dt3;
};

ImageDerivative image_derivative(const DhParams& p, double theta2, double theta3) {
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double c3 = std::cos(theta3), s3 = std::sin(theta3);
  const double g = p.d3 + c3 * p.d4;
  const double dg = -s3 * p.d4;
  const double v = s3 * p.d4 + p.r2;
  const double u = c2 * g + p.d2;
  return ImageDerivative{CrossSectionPoint{std::hypot(u, v), -s2 * g},
                         2.0 * u * (-s2 * g), 2.0 * (u * c2 * dg + v * c3 * p.d4),
                         -c2 * g, -s2 * dg};
}

// Velocity of the (rho^2, z) image along a component, for the unit joint-space
// tangent oriented with increasing phi. Using rho^2 keeps it smooth where the
// image crosses the base axis.
struct ImageVelocity {
  double rho2_rate;
  double z_rate;
  CrossSectionPoint point;
  JointSample sample;
};

ImageVelocity image_velocity(const DhParams& p, const CurveWindow& w, double phi) {
  const auto q = curve_point(p, w, phi);
  const double c2 = std::cos(q.theta2), s2 = std::sin(q.theta2);
  const double c3 = std::cos(q.theta3), s3 = std::sin(q.theta3);
  const double f2 = -s2 * (s3 * p.d3 - c3 * p.r2);
  const double f3 = c3 * p.d2 + c2 * (c3 * p.d3 + s3 * p.r2);
  double t2 = f3, t3 = -f2;
  const double norm = std::hypot(t2, t3);
  t2 /= norm;
  t3 /= norm;
  constexpr double kOrientStep = 1e-6;
  const auto ahead = curve_point(p, w, phi + kOrientStep);
  const auto behind = curve_point(p, w, phi - kOrientStep);
  const double dq2 = wrap_angle(ahead.theta2 - behind.theta2);
  const double dq3 = wrap_angle(ahead.theta3 - behind.theta3);
  if (t2 * dq2 + t3 * dq3 < 0.0) {
    t2 = -t2;
    t3 = -t3;
  }
  const auto d = image_derivative(p, q.theta2, q.theta3);
  return ImageVelocity{d.rho2_dt2 * t2 + d.rho2_dt3 * t3, d.z_dt2 * t2 + d.z_dt3 * t3, d.point, q};
}

double dot(const ImageVelocity& a, const ImageVelocity& b) {
  return a.rho2_rate * b.rho2_rate + a.z_rate * b.z_rate;
}

// |(d rho / ds, dz / ds)|.
double speed(const ImageVelocity& v) {
  const double rho = std::max(v.point.rho, 1e-300);
  return std::hypot(v.rho2_rate / (2.0 * rho), v.z_rate);
}

}  // namespace

std::string_view to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::CurvePlus: return "curve_plus";
    case BranchKind::CurveMinus: return "curve_minus";
    case BranchKind::LinePlus: return "line_plus";
    case BranchKind::LineMinus: return "line_minus";
  }
  return "unknown";
}

std::string_view to_string(BoundaryRole role) {
  return role == BoundaryRole::Internal ? "internal" : "external";
}

SingularLines singular_lines(const DhParams& params) {
  params.validate();
  SingularLines out;
  if (params.d3 > params.d4) return out;
  const double a = std::acos(std::clamp(-params.d3 / params.d4, -1.0, 1.0));
  out.theta3 = {a, -a};
  out.tangent_degenerate = params.d3 == params.d4;
  return out;
}

double curve_factor(const DhParams& p, double theta2, double theta3) {
  const double s3 = std::sin(theta3), c3 = std::cos(theta3);
  return s3 * p.d2 + std::cos(theta2) * (s3 * p.d3 - c3 * p.r2);
}

std::vector<CurveWindow> curve_windows(const DhParams& params, int n_samples) {
  params.validate();
  require_generic_offset(params);
  const int n = std::max(n_samples, 16);
  const double step = kTwoPi / n;
  std::vector<bool> inside(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inside[i] = window_indicator(params, -kPi + step * i) <= 0.0;

  // Start the cyclic scan on an outside sample; one exists where s3 d3 = c3 r2.
  int start = -1;
  for (int i = 0; i < n; ++i) {
    if (!inside[i]) {
      start = i;
      break;
    }
  }
  if (start < 0) throw NonGenericError("curve window covers the whole theta3 circle");

  // Unwrapped sample index j maps to angle -pi + step * j; runs never wrap past start.
  auto angle = [&](int j) { return -kPi + step * j; };
  std::vector<CurveWindow> out;
  int run_begin = -1;
  for (int j = start + 1; j <= start + n; ++j) {
    const bool in = inside[j % n];
    const bool was_in = inside[(j - 1) % n];
    if (in && !was_in) run_begin = j;
    if (!in && was_in && run_begin >= 0) {
      double begin = bisect_window_edge(params, angle(run_begin), angle(run_begin - 1));
      double end = bisect_window_edge(params, angle(j - 1), angle(j));
      if (begin >= kPi) {
        begin -= kTwoPi;
        end -= kTwoPi;
      }
      out.push_back(CurveWindow{begin, end});
      run_begin = -1;
    }
  }
  return out;
}

JointSample curve_point(const DhParams& p, const CurveWindow& w, double phi) {
  const double theta3 = w.theta3_begin + (w.theta3_end - w.theta3_begin) * 0.5 * (1.0 - std::cos(phi));
  const double s3 = std::sin(theta3), c3 = std::cos(theta3);
  const double h = std::clamp(-p.d2 * s3 / (s3 * p.d3 - c3 * p.r2), -1.0, 1.0);
  const double sign = std::sin(phi) >= 0.0 ? 1.0 : -1.0;
  return JointSample{wrap_angle(sign * std::acos(h)), wrap_angle(theta3)};
}

std::vector<CrossSectionPoint> map_to_workspace(const DhParams& params,
                                                std::span<const JointSample> samples) {
  std::vector<CrossSectionPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(cross_section_image(params, s.theta2, s.theta3));
  return out;
}

std::vector<SingularBranch> trace_singularity_curves(const DhParams& params, int n_samples) {
  if (n_samples < 256) throw std::invalid_argument("trace_singularity_curves: n_samples must be >= 256");
  const auto windows = curve_windows(params, n_samples);
  std::vector<SingularBranch> out;
  const int half = n_samples / 2;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    for (int side = 0; side < 2; ++side) {
      SingularBranch b;
      b.kind = side == 0 ? BranchKind::CurvePlus : BranchKind::CurveMinus;
      b.component = static_cast<int>(k);
      for (int i = 0; i <= half; ++i) {
        const double phi = kPi * (side + static_cast<double>(i) / half);
        b.samples.push_back(curve_point(params, windows[k], phi));
      }
      b.image = map_to_workspace(params, b.samples);
      out.push_back(std::move(b));
    }
  }
  const auto lines = singular_lines(params);
  for (std::size_t k = 0; k < lines.theta3.size(); ++k) {
    SingularBranch b;
    b.kind = k == 0 ? BranchKind::LinePlus : BranchKind::LineMinus;
    b.component = static_cast<int>(k);
    for (int i = 0; i < n_samples; ++i) {
      b.samples.push_back(JointSample{-kPi + kTwoPi * i / n_samples, lines.theta3[k]});
    }
    b.image = map_to_workspace(params, b.samples);
    out.push_back(std::move(b));
  }
  return out;
}

BoundaryRole WorkspaceBoundarySet::role_of(int component) const {
  for (const auto& c : external) {
    if (c.component == component) return BoundaryRole::External;
  }
  return BoundaryRole::Internal;
}

WorkspaceBoundarySet classify_boundaries(const DhParams& params,
                                         std::span<const SingularBranch> branches) {
  WorkspaceBoundarySet out;
  std::vector<BoundaryCurve> curves;
  for (const auto& b : branches) {
    if (b.kind == BranchKind::LinePlus || b.kind == BranchKind::LineMinus) {
      if (!b.image.empty()) out.isolated_points.push_back(b.image.front());
      continue;
    }
    auto it = std::find_if(curves.begin(), curves.end(),
                           [&](const BoundaryCurve& c) { return c.component == b.component; });
    if (it == curves.end()) {
      curves.push_back(BoundaryCurve{});
      it = std::prev(curves.end());
      it->component = b.component;
    }
    // CurveMinus continues where CurvePlus ends; drop its duplicated first point.
    const bool skip_first = !it->polyline.empty();
    it->polyline.insert(it->polyline.end(), b.image.begin() + (skip_first ? 1 : 0), b.image.end());
  }
  if (out.isolated_points.size() == 2) {
    const auto& a = out.isolated_points[0];
    const auto& c = out.isolated_points[1];
    out.isolated_coincide = std::hypot(a.rho - c.rho, a.z - c.z) < 1e-9 * params.reach();
  }
  if (curves.empty()) return out;

  std::size_t outer = 0;
  double best_rho = -1.0;
  for (std::size_t k = 0; k < curves.size(); ++k) {
    for (const auto& pt : curves[k].polyline) {
      if (pt.rho > best_rho) {
        best_rho = pt.rho;
        outer = k;
      }
    }
  }

  const double delta = 1e-3 * 2.0 * params.reach();
  for (std::size_t k = 0; k < curves.size(); ++k) {
    auto& c = curves[k];
    c.role = k == outer ? BoundaryRole::External : BoundaryRole::Internal;
    const std::size_t n = c.polyline.size();
    if (n < 3) continue;
    // Probe pair straddling the polyline at index i, or nullopt when both
    // sides agree (both branches of a cusp fit between the two probes).
    auto probe = [&](std::size_t i, double d) -> std::optional<std::pair<int, int>> {
      const auto& a = c.polyline[std::max<std::size_t>(i, 1) - 1];
      const auto& b = c.polyline[std::min(i + 1, n - 1)];
      double tr = b.rho - a.rho, tz = b.z - a.z;
      const double len = std::hypot(tr, tz);
      if (!(len > 0.0)) return std::nullopt;
      tr /= len;
      tz /= len;
      const auto& m = c.polyline[i];
      const int l = ik_count_at(params, {std::abs(m.rho - d * tz), m.z + d * tr}).count;
      const int r = ik_count_at(params, {std::abs(m.rho + d * tz), m.z - d * tr}).count;
      if (l == r) return std::nullopt;
      return std::pair{std::min(l, r), std::max(l, r)};
    };
    const std::size_t stride = n / kProbesPerCurve;
    for (int j = 0; j < kProbesPerCurve; ++j) {
      // Offset by half a stride so probes avoid the z = 0 turning points.
      const std::size_t centre = (n * (2 * j + 1)) / (2 * kProbesPerCurve);
      // Near a cusp, slide along the stride and shrink the offset.
      int lo = 0, hi = 0;
      bool found = false;
      for (int s = 0; s <= 6 && !found; ++s) {
        const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(stride) * ((s + 1) / 2) / 8 * (s % 2 ? 1 : -1);
        const std::size_t i = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(centre) + shift);
        for (double d = delta; d > delta / 20.0 && !found; d /= 4.0) {
          if (const auto pr = probe(i, d)) {
            lo = pr->first;
            hi = pr->second;
            found = hi - lo == 2;
          }
        }
      }
      if (lo == 0 && hi == 2) ++c.probes.zero_two;
      else if (lo == 2 && hi == 4) ++c.probes.two_four;
      else ++c.probes.other;
    }
    c.ambiguous = c.probes.zero_two > 0 && c.probes.two_four > 0;
    (c.role == BoundaryRole::External ? out.external : out.internal).push_back(std::move(c));
  }
  return out;
}

int CuspSearchResult::count_on(BoundaryRole role) const {
  return static_cast<int>(std::count_if(cusps.begin(), cusps.end(),
                                        [role](const CuspPoint& c) { return c.boundary == role; }));
}

CuspSearchResult find_cusps(const DhParams& params, int n_samples) {
  const auto windows = curve_windows(params, std::max(n_samples, 256));
  const int n = std::max(n_samples, 256);
  const double reach = params.reach();

  // Labels come from the same rule classify_boundaries applies.
  std::size_t outer = 0;
  double best_rho = -1.0;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    for (int i = 0; i < n; ++i) {
      const auto q = curve_point(params, windows[k], kTwoPi * i / n);
      const double rho = cross_section_image(params, q.theta2, q.theta3).rho;
      if (rho > best_rho) {
        best_rho = rho;
        outer = k;
      }
    }
  }

  CuspSearchResult out;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    const auto& w = windows[k];
    auto prev = image_velocity(params, w, 0.0);
    for (int i = 1; i <= n; ++i) {
      const double phi_a = kTwoPi * (i - 1) / n;
      const double phi_b = kTwoPi * i / n;
      const auto cur = image_velocity(params, w, phi_b);
      if (dot(prev, cur) < 0.0) {
        const auto ref = prev;
        double a = phi_a, b = phi_b;
        double phi_star = 0.5 * (a + b);
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
          phi_star = 0.5 * (a + b);
          const auto m = image_velocity(params, w, phi_star);
          if (speed(m) < 1e-12 * reach) break;
          if (dot(m, ref) > 0.0) a = phi_star;
          else b = phi_star;
          phi_star = 0.5 * (a + b);
        }
        const auto mid = image_velocity(params, w, phi_star);

        const auto loc = mid.point;
        const double theta3 = mid.sample.theta3;
        const auto quartic = ik_quartic(params, loc);
        // Work in the chart where the candidate root has |t| <= 1.
        const bool flip = std::abs(theta3) > kPi / 2.0;
        const double t_star = flip ? std::tan(0.5 * wrap_angle(theta3 - kPi)) : std::tan(0.5 * theta3);
        const auto roots = quartic_real_roots(flip ? reversed_chart(quartic.coeffs) : quartic.coeffs);
        int mult = 0;
        for (const auto& c : roots.clusters) {
          if (std::abs(c.value - t_star) <= 1e-4) mult = std::max(mult, c.multiplicity);
        }
        const double v = speed(mid);
        if (mult >= 3 && v < 1e-9 * reach) {
          if (mult >= 4) out.non_generic = true;
          CuspPoint cusp;
          cusp.location = loc;
          cusp.theta2 = mid.sample.theta2;
          cusp.theta3 = theta3;
          cusp.component = static_cast<int>(k);
          cusp.branch = std::sin(phi_star) >= 0.0 ? BranchKind::CurvePlus : BranchKind::CurveMinus;
          cusp.boundary = k == outer ? BoundaryRole::External : BoundaryRole::Internal;
          const bool duplicate = std::any_of(out.cusps.begin(), out.cusps.end(), [&](const CuspPoint& c) {
            return std::hypot(c.location.rho - loc.rho, c.location.z - loc.z) < 1e-7 * reach &&
                   std::abs(wrap_angle(c.theta3 - theta3)) < 1e-7;
          });
          if (!duplicate) out.cusps.push_back(cusp);
        } else {
          out.failures.push_back(CuspCandidateFailure{loc, mid.sample.theta2, theta3, v, mult});
        }
      }
      prev = cur;
    }
  }
  std::sort(out.cusps.begin(), out.cusps.end(), [](const CuspPoint& a, const CuspPoint& b) {
    if (a.component != b.component) return a.component < b.component;
    if (a.location.rho != b.location.rho) return a.location.rho < b.location.rho;
    return a.location.z < b.location.z;
  });
  return out;
}

IkCount ik_count_at(const DhParams& params, const CrossSectionPoint& point, double tol_cluster) {
  const auto roots = ik_roots(params, point, tol_cluster);
  return IkCount{roots.count(), roots.has_multiple_root()};
}

}  // namespace orthokin
