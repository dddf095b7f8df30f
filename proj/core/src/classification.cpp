#include "orthokin/classification.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace orthokin {

namespace {

bool near(double value, double surface) {
  return std::abs(value - surface) <= kGenericityMargin * std::abs(surface);
}

// Shared genericity gate; empty string means generic.
std::string degeneracy(const DhParams& p, const SeparatingSurfaces& s) {
  if (near(p.d3, p.d2)) return "d3 = d2: C3 and C4 are undefined";
  if (p.r2 <= kGenericityMargin * p.d2) return "r2 = 0: separating surfaces coincide";
  if (near(p.d4, s.c1)) return "d4 on C1";
  if (near(p.d4, s.c2)) return "d4 on C2";
  if (s.c3 && near(p.d4, *s.c3)) return "d4 on C3";
  if (s.c4 && near(p.d4, *s.c4)) return "d4 on C4";
  return {};
}

}  // namespace

std::string_view to_string(C1Form form) {
  return form == C1Form::FourEqualRoots ? "four_equal_roots" : "expanded_general";
}

std::string_view to_string(SurfaceId id) {
  constexpr std::array<std::string_view, 4> names{"C1", "C2", "C3", "C4"};
  return names[static_cast<std::size_t>(id)];
}

std::string_view to_string(DomainId id) {
  constexpr std::array<std::string_view, 5> names{"D1", "D2", "D3", "D4", "D5"};
  return names[static_cast<std::size_t>(id)];
}

std::optional<DomainId> parse_domain(std::string_view s) {
  for (DomainId d : {DomainId::D1, DomainId::D2, DomainId::D3, DomainId::D4, DomainId::D5}) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

const DomainSemantics& semantics(DomainId id) {
  static const std::array<DomainSemantics, 5> table{{
      {SolutionArity::Binary, 0, std::nullopt, true},
      {SolutionArity::Quaternary, 4, false, std::nullopt},
      {SolutionArity::Quaternary, 2, false, std::nullopt},
      {SolutionArity::Quaternary, 4, true, std::nullopt},
      {SolutionArity::Quaternary, 0, std::nullopt, false},
  }};
  return table[static_cast<std::size_t>(id)];
}

double c1_value(double d2, double d3, double r2, C1Form form) {
  const double s = d3 * d3 + r2 * r2;
  const double a = std::hypot(d3 + d2, r2);
  const double b = std::hypot(d3 - d2, r2);
  const double numerator = form == C1Form::FourEqualRoots ? s * s - d2 * d2 * (d3 * d3 - r2 * r2)
                                                          : s * s - d2 * d2 * s;
  const double radicand = 0.5 * (s - numerator / (a * b));
  return std::sqrt(std::max(radicand, 0.0));
}

SeparatingSurfaces surfaces(double d2, double d3, double r2, C1Form form) {
  SeparatingSurfaces out;
  out.a = std::hypot(d3 + d2, r2);
  out.b = std::hypot(d3 - d2, r2);
  out.c1 = c1_value(d2, d3, r2, form);
  out.c2 = d3 * out.a / (d2 + d3);
  if (d3 > d2) out.c3 = d3 * out.b / (d3 - d2);
  if (d3 < d2) out.c4 = d3 * out.b / (d2 - d3);
  return out;
}

SurfaceGap distance_to_nearest_surface(const DhParams& params, C1Form form) {
  const auto s = surfaces(params.d2, params.d3, params.r2, form);
  std::vector<SurfaceGap> gaps{{SurfaceId::C1, params.d4 - s.c1}, {SurfaceId::C2, params.d4 - s.c2}};
  if (s.c3) gaps.push_back({SurfaceId::C3, params.d4 - *s.c3});
  if (s.c4) gaps.push_back({SurfaceId::C4, params.d4 - *s.c4});
  SurfaceGap best = gaps.front();
  for (const auto& g : gaps) {
    if (std::abs(g.gap) < std::abs(best.gap)) best = g;
  }
  return best;
}

DomainClassification classify_domain(const DhParams& params, C1Form form) {
  params.validate();
  const auto s = surfaces(params.d2, params.d3, params.r2, form);
  DomainClassification out;
  out.reason = degeneracy(params, s);
  if (!out.reason.empty()) {
    out.non_generic = true;
    return out;
  }
  const double d4 = params.d4;
  if (d4 < s.c1) out.domain = DomainId::D1;
  else if (d4 < s.c2) out.domain = DomainId::D2;
  else if (s.c3) out.domain = d4 < *s.c3 ? DomainId::D3 : DomainId::D4;
  else out.domain = d4 < *s.c4 ? DomainId::D3 : DomainId::D5;
  return out;
}

CuspidalityVerdict is_cuspidal(const DhParams& params, C1Form form) {
  params.validate();
  const auto s = surfaces(params.d2, params.d3, params.r2, form);
  CuspidalityVerdict out;
  // Only C1 and C4 enter the test, so d3 = d2 or proximity to C2/C3 is harmless here.
  out.non_generic = params.r2 <= kGenericityMargin * params.d2 || near(params.d4, s.c1) ||
                    (s.c4 && near(params.d4, *s.c4));
  out.cuspidal = params.d4 > s.c1 && (params.d3 >= params.d2 || params.d4 < s.c4.value_or(0.0));
  return out;
}

}  // namespace orthokin
