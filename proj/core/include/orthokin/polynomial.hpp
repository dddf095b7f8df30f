#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace orthokin {

/// Coefficients of a polynomial of degree <= 4, highest power first (a4..a0).
using QuarticCoeffs = std::array<double, 5>;

/// Default clustering radius in the polynomial variable.
inline constexpr double kRootClusterTolerance = 1e-6;

/// One real root together with the number of (numerically) coincident roots
/// merged into it.
struct RootCluster {
  double value = 0.0;
  int multiplicity = 1;
};

struct RealRootSet {
  std::vector<RootCluster> clusters;  // sorted by value
  int degree = 0;                     // effective degree after dropping tiny leading terms
  int complex_count = 0;              // roots left off the real axis (counted with multiplicity)

  /// Number of real roots counted with multiplicity.
  int count() const;
  /// True when any real cluster has multiplicity >= 2.
  bool has_multiple_root() const;
  int max_multiplicity() const;
};

/// Evaluates sum a_i t^i, coefficients highest power first.
double polyval(std::span<const double> coeffs, double t);
std::complex<double> polyval(std::span<const double> coeffs, std::complex<double> t);

/// k-th derivative coefficients, highest power first.
std::vector<double> polyder(std::span<const double> coeffs, int k = 1);

/// All complex roots of a polynomial given highest power first. Leading
/// coefficients that are negligible relative to the largest coefficient are
/// dropped first. Throws std::invalid_argument for an identically (near-)zero
/// polynomial.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Real roots of a degree <= 4 polynomial, polished and grouped into
/// multiplicity clusters. Roots closer than `tol_cluster` (scaled by
/// max(1, |t|)) are merged; nearby groups are also merged when the merged
/// point certifies as a multiple root through the vanishing of the lower
/// derivatives, which keeps triple roots together even though rounding splits
/// them by ~eps^(1/3).
RealRootSet quartic_real_roots(const QuarticCoeffs& coeffs,
                               double tol_cluster = kRootClusterTolerance);

}  // namespace orthokin
