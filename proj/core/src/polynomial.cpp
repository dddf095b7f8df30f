#include "orthokin/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace orthokin {

namespace {

constexpr double kLeadingDropRatio = 1e-14;
constexpr double kMergeCertifyTolerance = 1e-9;
constexpr double kMergeRadius = 1e-3;

double max_abs(std::span<const double> c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

// Sum |a_i| |t|^i, the natural size of p(t) against which residuals are judged.
double magnitude_bound(std::span<const double> coeffs, double at) {
  double acc = 0.0;
  const double r = std::abs(at);
  for (double c : coeffs) acc = acc * r + std::abs(c);
  return acc;
}

std::complex<double> newton_polish(std::span<const double> p, std::span<const double> dp,
                                   std::complex<double> z) {
  double best = std::abs(polyval(p, z));
  for (int it = 0; it < 20 && best > 0.0; ++it) {
    const auto d = polyval(dp, z);
    if (std::abs(d) == 0.0) break;
    const auto next = z - polyval(p, z) / d;
    const double r = std::abs(polyval(p, next));
    if (!(r < best)) break;
    best = r;
    z = next;
  }
  return z;
}

struct Group {
  std::vector<std::complex<double>> members;
  std::complex<double> center() const {
    std::complex<double> s{0.0, 0.0};
    for (auto m : members) s += m;
    return s / static_cast<double>(members.size());
  }
};

// A group of m roots is a single root of multiplicity m when p, p', ...,
// p^(m-2) all vanish at the root of p^(m-1) nearest to the group centre.
bool certify_multiple(std::span<const double> p, Group& g) {
  const int m = static_cast<int>(g.members.size());
  if (m < 2) return true;
  const auto q = polyder(p, m - 1);
  const auto dq = polyder(p, m);
  auto c = g.center();
  if (q.size() >= 2) c = newton_polish(q, dq, c);
  const double scale = std::max(1.0, std::abs(c));
  for (int k = 0; k <= m - 2; ++k) {
    const auto pk = polyder(p, k);
    const double bound = magnitude_bound(pk, scale);
    if (std::abs(polyval(pk, c)) > kMergeCertifyTolerance * bound) return false;
  }
  g.members.assign(static_cast<std::size_t>(m), c);
  return true;
}

}  // namespace

int RealRootSet::count() const {
  int n = 0;
  for (const auto& c : clusters) n += c.multiplicity;
  return n;
}

bool RealRootSet::has_multiple_root() const { return max_multiplicity() >= 2; }

int RealRootSet::max_multiplicity() const {
  int m = 0;
  for (const auto& c : clusters) m = std::max(m, c.multiplicity);
  return m;
}

double polyval(std::span<const double> coeffs, double t) {
  double acc = 0.0;
  for (double c : coeffs) acc = acc * t + c;
  return acc;
}

std::complex<double> polyval(std::span<const double> coeffs, std::complex<double> t) {
  std::complex<double> acc{0.0, 0.0};
  for (double c : coeffs) acc = acc * t + c;
  return acc;
}

std::vector<double> polyder(std::span<const double> coeffs, int k) {
  std::vector<double> out(coeffs.begin(), coeffs.end());
  for (int pass = 0; pass < k; ++pass) {
    if (out.size() <= 1) return {0.0};
    const std::size_t n = out.size() - 1;  // degree
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = out[i] * static_cast<double>(n - i);
    out = std::move(next);
  }
  return out;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  const double scale = max_abs(coeffs);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("polynomial_roots: degenerate polynomial");
  }
  std::size_t first = 0;
  while (first < coeffs.size() && std::abs(coeffs[first]) <= kLeadingDropRatio * scale) ++first;
  const auto trimmed = coeffs.subspan(first);
  const int degree = static_cast<int>(trimmed.size()) - 1;
  if (degree <= 0) return {};

  std::vector<std::complex<double>> roots;
  if (degree == 1) {
    roots.emplace_back(-trimmed[1] / trimmed[0], 0.0);
    return roots;
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int j = 0; j < degree; ++j) companion(0, j) = -trimmed[j + 1] / trimmed[0];
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto& ev = solver.eigenvalues();

  const auto dp = polyder(trimmed);
  roots.reserve(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) roots.push_back(newton_polish(trimmed, dp, ev(i)));
  return roots;
}

RealRootSet quartic_real_roots(const QuarticCoeffs& coeffs, double tol_cluster) {
  const double scale = max_abs(coeffs);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("quartic_real_roots: polynomial is identically zero");
  }
  std::vector<double> p(coeffs.begin(), coeffs.end());
  for (double& c : p) c /= scale;
  std::size_t first = 0;
  while (first < p.size() && std::abs(p[first]) <= kLeadingDropRatio) ++first;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(first));

  RealRootSet out;
  out.degree = static_cast<int>(p.size()) - 1;
  if (out.degree <= 0) return out;

  const auto roots = polynomial_roots(p);

  // Single-linkage clustering at tol_cluster.
  std::vector<Group> groups;
  for (auto r : roots) groups.push_back(Group{{r}});
  auto close = [tol_cluster](std::complex<double> a, std::complex<double> b, double tol) {
    const double s = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * s;
  };
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < groups.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < groups.size() && !merged; ++j) {
        for (auto a : groups[i].members) {
          for (auto b : groups[j].members) {
            if (close(a, b, tol_cluster)) merged = true;
          }
        }
        if (merged) {
          groups[i].members.insert(groups[i].members.end(), groups[j].members.begin(),
                                   groups[j].members.end());
          groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
        }
      }
    }
  }

  // Multiplicity-certified merging of groups that rounding pulled apart.
  merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < groups.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < groups.size() && !merged; ++j) {
        if (!close(groups[i].center(), groups[j].center(), kMergeRadius)) continue;
        Group trial = groups[i];
        trial.members.insert(trial.members.end(), groups[j].members.begin(),
                             groups[j].members.end());
        if (certify_multiple(p, trial)) {
          groups[i] = std::move(trial);
          groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }

  const auto dp = polyder(p);
  for (const auto& g : groups) {
    const auto c = g.center();
    const int m = static_cast<int>(g.members.size());
    const double s = std::max(1.0, std::abs(c));
    // Conjugate pairs closer than tol_cluster were grouped above, so a lone
    // root is real only if it sits on the axis.
    const double imag_tol = m == 1 ? 1e-12 * s : tol_cluster * s;
    if (std::abs(c.imag()) <= imag_tol) {
      double value = c.real();
      if (m == 1) value = newton_polish(p, dp, std::complex<double>{value, 0.0}).real();
      out.clusters.push_back(RootCluster{value, m});
    } else {
      out.complex_count += m;
    }
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const RootCluster& a, const RootCluster& b) { return a.value < b.value; });
  return out;
}

}  // namespace orthokin
