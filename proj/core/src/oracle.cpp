#include "orthokin/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace orthokin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cluster radii swept when certifying a cusp (one decade).
constexpr std::array<double, 3> kCuspTolerances{1e-4, 3.1622776601683795e-4, 1e-3};

double angle_gap(double a, double b) { return std::abs(wrap_angle(a - b)); }

double det_at(const DhParams& p, double theta2, double theta3) {
  return det_jacobian_numeric(p, {0.0, theta2, theta3});
}

// Joint 2 moves the end point along a direction fixed by theta2 alone, scaled
// by the signed distance of the end point from its axis. That distance is
// read off d p / d theta2 against the same derivative at theta3 = 0, where
// the end point is never on the axis. Its zeros are the singular lines.
double line_factor(const DhParams& p, double theta2, double theta3) {
  constexpr double h = 1e-6;
  auto dp = [&](double t3) {
    const auto a = forward_kinematics(p, {0.0, theta2 + h, t3});
    const auto b = forward_kinematics(p, {0.0, theta2 - h, t3});
    return std::array<double, 3>{(a.x - b.x) / (2 * h), (a.y - b.y) / (2 * h), (a.z - b.z) / (2 * h)};
  };
  const auto v = dp(theta3);
  const auto r = dp(0.0);
  const double norm = std::hypot(r[0], r[1], r[2]);
  return (v[0] * r[0] + v[1] * r[1] + v[2] * r[2]) / norm;
}

// Determinant with the line factor divided out: its zero set is the curve part
// of the singular set alone.
double curve_det(const DhParams& p, double theta2, double theta3) {
  return det_at(p, theta2, theta3) / line_factor(p, theta2, theta3);
}

CrossSectionPoint image_of(const DhParams& p, double theta2, double theta3) {
  return to_cross_section(forward_kinematics(p, {0.0, theta2, theta3}));
}

double cusp_signal(const DhParams& p, double theta2, double theta3) {
  return ik_angle_equation(p, image_of(p, theta2, theta3)).second_derivative(theta3);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Segment {
  int a = 0;
  int b = 0;
};

struct SingularGrid {
  std::vector<SingularSample> points;
  std::vector<Segment> segments;
  int components = 0;
  int external = -1;
};

// Zero of f on the edge from (t2, t3) to (t2 + dt2, t3 + dt3); fa = f(t2, t3).
template <class F>
JointSample bisect_edge(F f, double t2, double t3, double dt2, double dt3, double fa) {
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((f(t2 + mid * dt2, t3 + mid * dt3) > 0.0) == (fa > 0.0)) lo = mid;
    else hi = mid;
  }
  const double s = 0.5 * (lo + hi);
  return {wrap_angle(t2 + s * dt2), wrap_angle(t3 + s * dt3)};
}

SingularGrid scan_singular_set(const DhParams& p, int n) {
  SingularGrid out;
  const double step = kTwoPi / n;
  auto node = [&](int i) { return -kPi + (i + 0.5) * step; };
  auto idx = [n](int i, int j) { return ((i + n) % n) * n + (j + n) % n; };
  auto f = [&p](double t2, double t3) { return curve_det(p, t2, t3); };

  std::vector<double> val(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) val[idx(i, j)] = f(node(i), node(j));

  std::vector<int> h_edge(val.size(), -1);  // (i, j) -> (i + 1, j)
  std::vector<int> v_edge(val.size(), -1);  // (i, j) -> (i, j + 1)
  auto add_point = [&](JointSample q) {
    SingularSample s;
    s.theta2 = q.theta2;
    s.theta3 = q.theta3;
    s.image = image_of(p, q.theta2, q.theta3);
    out.points.push_back(s);
    return static_cast<int>(out.points.size()) - 1;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = val[idx(i, j)];
      if ((v > 0.0) != (val[idx(i + 1, j)] > 0.0))
        h_edge[idx(i, j)] = add_point(bisect_edge(f, node(i), node(j), step, 0.0, v));
      if ((v > 0.0) != (val[idx(i, j + 1)] > 0.0))
        v_edge[idx(i, j)] = add_point(bisect_edge(f, node(i), node(j), 0.0, step, v));
    }
  }

  // Marching squares; saddle cells are resolved by the value at the centre.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int bottom = h_edge[idx(i, j)];
      const int right = v_edge[idx(i + 1, j)];
      const int top = h_edge[idx(i, j + 1)];
      const int left = v_edge[idx(i, j)];
      std::vector<int> hits;
      for (int e : {bottom, right, top, left})
        if (e >= 0) hits.push_back(e);
      if (hits.size() == 2) {
        out.segments.push_back({hits[0], hits[1]});
      } else if (hits.size() == 4) {
        const double centre = f(node(i) + 0.5 * step, node(j) + 0.5 * step);
        if ((centre > 0.0) == (val[idx(i, j)] > 0.0)) {
          out.segments.push_back({bottom, right});
          out.segments.push_back({top, left});
        } else {
          out.segments.push_back({left, bottom});
          out.segments.push_back({right, top});
        }
      }
    }
  }

  UnionFind uf(out.points.size());
  for (const auto& s : out.segments) uf.unite(s.a, s.b);
  std::vector<int> label(out.points.size(), -1);
  std::vector<double> max_rho;
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    auto& pt = out.points[k];
    const int root = uf.find(static_cast<int>(k));
    if (label[root] < 0) {
      label[root] = out.components++;
      max_rho.push_back(0.0);
    }
    pt.component = label[root];
    max_rho[pt.component] = std::max(max_rho[pt.component], pt.image.rho);
  }
  if (!max_rho.empty())
    out.external = static_cast<int>(std::max_element(max_rho.begin(), max_rho.end()) - max_rho.begin());
  return out;
}

// Newton projection of a joint point onto the curve part of the singular set.
JointSample project_to_singular(const DhParams& p, JointSample q) {
  constexpr double h = 1e-5;
  for (int k = 0; k < 4; ++k) {
    const double f = curve_det(p, q.theta2, q.theta3);
    const double g2 = (curve_det(p, q.theta2 + h, q.theta3) - curve_det(p, q.theta2 - h, q.theta3)) / (2 * h);
    const double g3 = (curve_det(p, q.theta2, q.theta3 + h) - curve_det(p, q.theta2, q.theta3 - h)) / (2 * h);
    const double norm2 = g2 * g2 + g3 * g3;
    if (norm2 == 0.0) break;
    q.theta2 -= f * g2 / norm2;
    q.theta3 -= f * g3 / norm2;
  }
  return q;
}

JointSample refine_flip(const DhParams& p, const SingularSample& a, const SingularSample& b) {
  const double d2 = wrap_angle(b.theta2 - a.theta2);
  const double d3 = wrap_angle(b.theta3 - a.theta3);
  auto at = [&](double lambda) {
    return project_to_singular(p, {a.theta2 + lambda * d2, a.theta3 + lambda * d3});
  };
  const bool sign_a = cusp_signal(p, a.theta2, a.theta3) >= 0.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 50; ++k) {
    const double mid = 0.5 * (lo + hi);
    const auto q = at(mid);
    if ((cusp_signal(p, q.theta2, q.theta3) >= 0.0) == sign_a) lo = mid;
    else hi = mid;
  }
  const auto q = at(0.5 * (lo + hi));
  return {wrap_angle(q.theta2), wrap_angle(q.theta3)};
}

// Largest multiplicity of a real cluster of the IK quartic near theta3, in
// whichever chart keeps the root inside [-1, 1].
int multiplicity_near(const DhParams& p, const CrossSectionPoint& image, double theta3, double tol) {
  const auto quartic = ik_quartic(p, image);
  double t = std::tan(0.5 * theta3);
  QuarticCoeffs coeffs = quartic.coeffs;
  if (std::abs(t) > 1.0) {
    coeffs = reversed_chart(coeffs);
    t = -1.0 / t;
  }
  const auto roots = quartic_real_roots(coeffs, tol);
  int best = 0;
  for (const auto& c : roots.clusters) {
    if (std::abs(c.value - t) <= 10.0 * tol * std::max(1.0, std::abs(t)))
      best = std::max(best, c.multiplicity);
  }
  return best;
}

}  // namespace

void GridSpec::validate() const {
  if (resolution < 64)
    throw std::invalid_argument("grid resolution must be at least 64, got " + std::to_string(resolution));
}

std::string_view to_string(OracleStatus status) {
  switch (status) {
    case OracleStatus::Ok: return "ok";
    case OracleStatus::UnstableCount: return "unstable_count";
    case OracleStatus::NoMatch: return "no_match";
  }
  return "unknown";
}

BruteIkResult ik_count_brute(const DhParams& p, const CartesianPoint& point, const GridSpec& grid) {
  p.validate();
  grid.validate();
  const int n = grid.resolution;
  const double step = kTwoPi / n;
  const double reach = p.reach();
  const double rho2 = point.x * point.x + point.y * point.y;
  BruteIkResult out;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double t2 = -kPi + (i + 0.5) * step;
      double t3 = -kPi + (j + 0.5) * step;
      bool converged = false;
      for (int it = 0; it < kNewtonIterations; ++it) {
        const double s2 = std::sin(t2), c2 = std::cos(t2);
        const double s3 = std::sin(t3), c3 = std::cos(t3);
        const double g = p.d3 + c3 * p.d4;
        const double u = c2 * g + p.d2;
        const double v = s3 * p.d4 + p.r2;
        const double f1 = u * u + v * v - rho2;
        const double f2 = -s2 * g - point.z;
        if (std::abs(f1) <= kNewtonTolerance * reach * reach && std::abs(f2) <= kNewtonTolerance * reach) {
          converged = true;
          break;
        }
        const double j11 = -2.0 * u * s2 * g;
        const double j12 = 2.0 * (-u * c2 * s3 * p.d4 + v * c3 * p.d4);
        const double j21 = -c2 * g;
        const double j22 = s2 * s3 * p.d4;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        double dt2 = (f1 * j22 - f2 * j12) / det;
        double dt3 = (j11 * f2 - j21 * f1) / det;
        const double len = std::hypot(dt2, dt3);
        if (len > 0.5) {
          dt2 *= 0.5 / len;
          dt3 *= 0.5 / len;
        }
        t2 -= dt2;
        t3 -= dt3;
      }
      if (!converged) {
        ++out.nonconverged_seeds;
        continue;
      }
      const double s3 = std::sin(t3);
      const double u = std::cos(t2) * (p.d3 + std::cos(t3) * p.d4) + p.d2;
      const double v = s3 * p.d4 + p.r2;
      const JointConfig q =
          JointConfig{std::atan2(point.y, point.x) - std::atan2(v, u), t2, t3}.wrapped();
      const auto fk = forward_kinematics(p, q);
      if (std::hypot(fk.x - point.x, fk.y - point.y, fk.z - point.z) > 1e-8 * reach) {
        ++out.nonconverged_seeds;
        continue;
      }
      const bool seen = std::any_of(out.solutions.begin(), out.solutions.end(), [&](const JointConfig& s) {
        return torus_distance(s, q) < kDuplicateDistance;
      });
      if (!seen) out.solutions.push_back(q);
    }
  }
  out.count = static_cast<int>(out.solutions.size());
  return out;
}

int BruteCuspResult::count_on(BoundaryRole role) const {
  return static_cast<int>(
      std::count_if(cusps.begin(), cusps.end(), [role](const BruteCusp& c) { return c.boundary == role; }));
}

BruteCuspResult cusp_brute(const DhParams& p, const GridSpec& grid) {
  p.validate();
  grid.validate();
  const auto scan = scan_singular_set(p, grid.resolution);
  BruteCuspResult out;
  out.components = scan.components;
  out.external_component = scan.external;
  out.tolerances.assign(kCuspTolerances.begin(), kCuspTolerances.end());
  out.count_per_tolerance.assign(kCuspTolerances.size(), 0);

  std::vector<double> signal(scan.points.size(), 0.0);
  for (std::size_t k = 0; k < scan.points.size(); ++k)
    signal[k] = cusp_signal(p, scan.points[k].theta2, scan.points[k].theta3);

  std::vector<BruteCusp> certified;  // at the middle radius
  std::vector<JointSample> seen;
  for (const auto& seg : scan.segments) {
    if ((signal[seg.a] >= 0.0) == (signal[seg.b] >= 0.0)) continue;
    const auto q = refine_flip(p, scan.points[seg.a], scan.points[seg.b]);
    const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const JointSample& s) {
      return angle_gap(s.theta2, q.theta2) < 1e-7 && angle_gap(s.theta3, q.theta3) < 1e-7;
    });
    if (duplicate) continue;
    seen.push_back(q);
    const auto image = image_of(p, q.theta2, q.theta3);
    for (std::size_t k = 0; k < kCuspTolerances.size(); ++k) {
      const int m = multiplicity_near(p, image, q.theta3, kCuspTolerances[k]);
      if (m >= 4) out.four_fold = true;
      if (m < 3) continue;
      ++out.count_per_tolerance[k];
      if (k == 1) {
        const int component = scan.points[seg.a].component;
        certified.push_back({image, q.theta2, q.theta3, component,
                             component == scan.external ? BoundaryRole::External : BoundaryRole::Internal});
      }
    }
  }
  std::sort(certified.begin(), certified.end(), [](const BruteCusp& a, const BruteCusp& b) {
    if (a.component != b.component) return a.component < b.component;
    if (a.location.rho != b.location.rho) return a.location.rho < b.location.rho;
    return a.location.z < b.location.z;
  });
  out.cusps = std::move(certified);
  out.count = out.count_per_tolerance[1];
  const bool stable = std::all_of(out.count_per_tolerance.begin(), out.count_per_tolerance.end(),
                                  [&](int c) { return c == out.count; });
  if (!stable || out.four_fold) out.status = OracleStatus::UnstableCount;
  out.samples = scan.points;
  return out;
}

EmpiricalDomain empirical_domain(const DhParams& p, const GridSpec& grid) {
  p.validate();
  grid.validate();
  EmpiricalDomain out;
  auto& ev = out.evidence;

  auto cusps = cusp_brute(p, grid);
  ev.cusp_count = cusps.count;
  ev.cusp_status = cusps.status;
  ev.count_per_tolerance = cusps.count_per_tolerance;
  ev.components = cusps.components;
  ev.cusps_split = cusps.count_on(BoundaryRole::Internal) > 0 && cusps.count_on(BoundaryRole::External) > 0;

  // IK counts on a (rho, z) grid over the reach box.
  const int n_rho = grid.resolution / 4;
  const int n_z = grid.resolution / 2;
  const double reach = p.reach();
  const double d_rho = reach / n_rho;
  const double d_z = 2.0 * reach / n_z;
  std::vector<int> counts(static_cast<std::size_t>(n_rho) * n_z);
  auto cell = [n_z](int i, int j) { return static_cast<std::size_t>(i) * n_z + j; };
  for (int i = 0; i < n_rho; ++i) {
    for (int j = 0; j < n_z; ++j) {
      const CrossSectionPoint pt{(i + 0.5) * d_rho, -reach + (j + 0.5) * d_z};
      counts[cell(i, j)] = ik_roots(p, pt).count();
      ev.max_ik_count = std::max(ev.max_ik_count, counts[cell(i, j)]);
    }
  }
  // Thin four-solution regions hug the boundary; probe next to every sample of it.
  const double delta = 1e-3 * reach;
  for (const auto& s : cusps.samples) {
    for (const auto& [dr, dz] : {std::pair{delta, 0.0}, {-delta, 0.0}, {0.0, delta}, {0.0, -delta}}) {
      const CrossSectionPoint pt{std::abs(s.image.rho + dr), s.image.z + dz};
      ev.max_ik_count = std::max(ev.max_ik_count, ik_roots(p, pt).count());
    }
  }
  // The wedge inside a cusp gains two solutions however thin it is. Midpoints
  // of image points an equal step either side of the cusp lie inside it.
  for (const auto& c : cusps.cusps) {
    constexpr double h = 1e-6;
    const double g2 = (curve_det(p, c.theta2 + h, c.theta3) - curve_det(p, c.theta2 - h, c.theta3)) / (2 * h);
    const double g3 = (curve_det(p, c.theta2, c.theta3 + h) - curve_det(p, c.theta2, c.theta3 - h)) / (2 * h);
    const double norm = std::hypot(g2, g3);
    for (double eps : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
      const auto ahead = project_to_singular(p, {c.theta2 - eps * g3 / norm, c.theta3 + eps * g2 / norm});
      const auto behind = project_to_singular(p, {c.theta2 + eps * g3 / norm, c.theta3 - eps * g2 / norm});
      const auto a = image_of(p, ahead.theta2, ahead.theta3);
      const auto b = image_of(p, behind.theta2, behind.theta3);
      const CrossSectionPoint mid{0.5 * (a.rho + b.rho), 0.5 * (a.z + b.z)};
      ev.max_ik_count = std::max(ev.max_ik_count, ik_roots(p, mid).count());
    }
  }
  ev.arity = ev.max_ik_count >= 4 ? SolutionArity::Quaternary : SolutionArity::Binary;

  // Hole: zero-solution cells cut off from both the outside of the box and the
  // axis. Pockets on the axis are cones about it, not a void in the workspace.
  std::vector<char> reached(counts.size(), 0);
  std::deque<std::pair<int, int>> queue;
  auto seed = [&](int i, int j) {
    if (counts[cell(i, j)] == 0 && !reached[cell(i, j)]) {
      reached[cell(i, j)] = 1;
      queue.emplace_back(i, j);
    }
  };
  for (int j = 0; j < n_z; ++j) {
    seed(0, j);
    seed(n_rho - 1, j);
  }
  for (int i = 0; i < n_rho; ++i) {
    seed(i, 0);
    seed(i, n_z - 1);
  }
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    if (i > 0) seed(i - 1, j);
    if (i + 1 < n_rho) seed(i + 1, j);
    if (j > 0) seed(i, j - 1);
    if (j + 1 < n_z) seed(i, j + 1);
  }
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] == 0 && !reached[k]) ++ev.hole_cells;
  // A couple of enclosed cells can appear where a boundary runs along the grid.
  const int min_hole = std::max(8, static_cast<int>(counts.size() / 1000));
  ev.has_hole = ev.hole_cells >= min_hole;

  if (cusps.status != OracleStatus::Ok) {
    out.status = cusps.status;
    return out;
  }
  std::vector<DomainId> fits;
  for (DomainId d : {DomainId::D1, DomainId::D2, DomainId::D3, DomainId::D4, DomainId::D5}) {
    const auto& s = semantics(d);
    if (s.arity != ev.arity || s.cusp_count != ev.cusp_count) continue;
    if (s.cusps_split_across_boundaries && *s.cusps_split_across_boundaries != ev.cusps_split) continue;
    if (s.has_hole && *s.has_hole != ev.has_hole) continue;
    fits.push_back(d);
  }
  if (fits.size() == 1) out.domain = fits.front();
  else out.status = OracleStatus::NoMatch;
  return out;
}

TransitionResult transition_bisect(double d2, double d3, double r2, SurfaceId surface,
                                   std::optional<std::pair<double, double>> bracket, const GridSpec& grid) {
  const auto s = surfaces(d2, d3, r2);
  const double upper_surface = s.c3 ? *s.c3 : s.c4.value_or(2.0 * s.c2);
  if (!bracket) {
    switch (surface) {
      case SurfaceId::C1: {
        // Wide enough to hold both forms, as long as they stay below C2.
        const double a = c1_value(d2, d3, r2, C1Form::FourEqualRoots);
        const double b = c1_value(d2, d3, r2, C1Form::ExpandedGeneral);
        const double top = b < s.c2 ? std::max(a, b) : a;
        bracket = {0.5 * std::min(a, b), 0.5 * (top + s.c2)};
        break;
      }
      case SurfaceId::C2:
        bracket = {0.5 * (s.c1 + s.c2), 0.5 * (s.c2 + upper_surface)};
        break;
      case SurfaceId::C3:
      case SurfaceId::C4: {
        const auto c = surface == SurfaceId::C3 ? s.c3 : s.c4;
        if (!c) throw std::invalid_argument(std::string(to_string(surface)) + " is undefined at this d3");
        bracket = {0.5 * (s.c2 + *c), 1.5 * *c};
        break;
      }
    }
  }
  auto [lo, hi] = *bracket;
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("bracket must satisfy 0 < lower < upper");

  TransitionResult out;
  auto label = [&](double d4) {
    ++out.evaluations;
    return empirical_domain(DhParams{d2, d3, d4, r2}, grid).domain;
  };
  const auto below = label(lo);
  const auto above = label(hi);
  if (!below || !above || *below == *above)
    throw std::invalid_argument("bracket ends do not carry two distinct empirical labels");
  out.below = *below;
  out.above = *above;
  while (hi - lo >= kTransitionWidth) {
    const double mid = 0.5 * (lo + hi);
    const auto d = label(mid);
    if (d == below) lo = mid;
    else if (d == above) hi = mid;
    else
      throw std::runtime_error("third empirical label inside the bracket at d4 = " + std::to_string(mid));
  }
  out.lower = lo;
  out.upper = hi;
  out.d4 = 0.5 * (lo + hi);
  return out;
}

C1Check check_c1_form(double d2, double d3, double r2, const GridSpec& grid) {
  C1Check out;
  out.transition = transition_bisect(d2, d3, r2, SurfaceId::C1, std::nullopt, grid);
  out.four_equal_roots = c1_value(d2, d3, r2, C1Form::FourEqualRoots);
  out.expanded_general = c1_value(d2, d3, r2, C1Form::ExpandedGeneral);
  const double e1 = std::abs(out.transition.d4 - out.four_equal_roots) / out.four_equal_roots;
  const double e2 = std::abs(out.transition.d4 - out.expanded_general) / out.expanded_general;
  if (std::min(e1, e2) <= 1e-3) out.matches = e1 <= e2 ? C1Form::FourEqualRoots : C1Form::ExpandedGeneral;
  out.shipped_form_matches = out.matches == kDefaultC1Form;
  return out;
}

}  // namespace orthokin
