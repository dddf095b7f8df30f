#include "commands.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "orthokin/topology.hpp"
#include "orthokin/cli/app.hpp"
#include "svg.hpp"

#ifndef ORTHOKIN_VERSION
#define ORTHOKIN_VERSION "unknown"
#endif

namespace orthokin::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return {};
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

// --format wins, then the --out extension, then the command default.
std::string resolve_format(const Options& o, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
  std::string f = o.format.value_or("");
  if (f.empty()) {
    const auto ext = lower_extension(o.out);
    for (const char* a : allowed)
      if (ext == a) f = ext;
  }
  if (f.empty()) f = fallback;
  for (const char* a : allowed)
    if (f == a) return f;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw UsageError{"format '" + f + "' not supported by this command (use " + list + ")"};
}

void emit(const Options& o, const std::string& payload, std::ostream& out) {
  if (o.out.empty()) {
    out << payload;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw UsageError{"cannot write " + o.out};
  file << payload;
  if (!file) throw UsageError{"cannot write " + o.out};
}

json params_json(const DhParams& p) { return {{"d2", p.d2}, {"d3", p.d3}, {"d4", p.d4}, {"r2", p.r2}}; }

json surfaces_json(const SeparatingSurfaces& s) {
  json j{{"c1", s.c1}, {"c2", s.c2}};
  if (s.c3) j["c3"] = *s.c3;
  if (s.c4) j["c4"] = *s.c4;
  return j;
}

std::string domain_label(const std::optional<DomainId>& d) {
  return d ? std::string(to_string(*d)) : std::string("NonGeneric");
}

std::string empirical_label(const EmpiricalDomain& e) {
  return e.domain ? std::string(to_string(*e.domain)) : std::string(to_string(e.status));
}

json evidence_json(const EmpiricalDomain& e) {
  const auto& ev = e.evidence;
  return {{"status", to_string(e.status)},
          {"arity", ev.arity == SolutionArity::Binary ? "binary" : "quaternary"},
          {"max_ik_count", ev.max_ik_count},
          {"cusp_count", ev.cusp_count},
          {"cusp_count_per_tolerance", ev.count_per_tolerance},
          {"cusps_split", ev.cusps_split},
          {"has_hole", ev.has_hole},
          {"hole_cells", ev.hole_cells},
          {"components", ev.components}};
}

std::string non_generic_reason(const TopologyReport& r) {
  if (!r.analytic.reason.empty()) return r.analytic.reason;
  if (r.cusps.non_generic) return "four equal roots met on the boundary";
  return {};
}

json report_json(const TopologyReport& r) {
  json j;
  j["domain_analytic"] = domain_label(r.analytic.domain);
  if (r.empirical) {
    j["domain_empirical"] = empirical_label(*r.empirical);
    j["empirical_evidence"] = evidence_json(*r.empirical);
    if (r.agreement) j["agreement"] = *r.agreement;
  }
  j["cuspidal"] = r.cuspidal.cuspidal;
  j["cusp_count"] = r.cusps.count();
  json cusps = json::array();
  for (const auto& c : r.cusps.cusps) {
    cusps.push_back({{"rho", c.location.rho},
                     {"z", c.location.z},
                     {"theta2", c.theta2},
                     {"theta3", c.theta3},
                     {"boundary", to_string(c.boundary)}});
  }
  j["cusps"] = cusps;
  j["surfaces"] = surfaces_json(r.surfaces);
  j["nearest_surface"] = {{"id", to_string(r.nearest.id)}, {"gap", r.nearest.gap}};
  j["generic"] = r.generic();
  if (!r.generic()) j["non_generic_reason"] = non_generic_reason(r);
  return j;
}

json run_header(const char* command, const Options& o) {
  return {{"command", command}, {"version", ORTHOKIN_VERSION}, {"params", params_json(o.params)}};
}

std::optional<JointConfig> marked_config(const Options& o) {
  if (o.config.size() != 3) return std::nullopt;
  return JointConfig{o.config[0], o.config[1], o.config[2]}.wrapped();
}

std::vector<std::vector<Point2>> split_on_wrap(const std::vector<JointSample>& samples) {
  std::vector<std::vector<Point2>> runs(1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Point2 p{wrap_angle(samples[i].theta2), wrap_angle(samples[i].theta3)};
    if (!runs.back().empty()) {
      const auto& q = runs.back().back();
      if (std::abs(p.x - q.x) > kPi || std::abs(p.y - q.y) > kPi) runs.emplace_back();
    }
    runs.back().push_back(p);
  }
  return runs;
}

const std::vector<double> kAngleTicks{-kPi, -kPi / 2, 0.0, kPi / 2, kPi};
const std::vector<std::string> kAngleLabels{"-π", "-π/2", "0", "π/2", "π"};

std::vector<double> linear_ticks(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(lo + (hi - lo) * i / n);
  return t;
}

std::vector<std::string> tick_labels(const std::vector<double>& ticks) {
  std::vector<std::string> out;
  for (double t : ticks) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", t);
    out.emplace_back(buf);
  }
  return out;
}

std::string params_caption(const DhParams& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "d2=%g d3=%g d4=%g r2=%g", p.d2, p.d3, p.d4, p.r2);
  return buf;
}

const std::map<std::string, std::string> kDomainColours{
    {"D1", "#4c72b0"}, {"D2", "#dd8452"}, {"D3", "#55a868"}, {"D4", "#c44e52"},
    {"D5", "#8172b3"}, {"NonGeneric", "#bbbbbb"}};

}  // namespace

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream&) {
  resolve_format(o, "json", {"json"});
  TopologyOptions topt;
  topt.empirical = o.empirical;
  if (o.resolution) topt.grid.resolution = *o.resolution;
  if (o.samples) topt.cusp_samples = *o.samples;
  topt.grid.validate();
  const auto report = analyze(o.params, topt);
  json j = run_header("classify", o);
  j.update(report_json(report));
  emit(o, j.dump(2) + "\n", out);
  return report.generic() ? kExitOk : kExitNonGeneric;
}

int cmd_plot_jointspace(const Options& o, std::ostream& out, std::ostream&) {
  const auto fmt = resolve_format(o, "svg", {"svg", "csv"});
  o.params.validate();
  const int n = o.samples.value_or(1024);
  const auto branches = trace_singularity_curves(o.params, n);
  const auto cusps = find_cusps(o.params);
  const auto config = marked_config(o);

  if (fmt == "csv") {
    std::string s = "theta2,theta3,branch_kind\n";
    for (const auto& b : branches)
      for (const auto& q : b.samples)
        s += num(wrap_angle(q.theta2)) + ',' + num(wrap_angle(q.theta3)) + ',' + std::string(to_string(b.kind)) + '\n';
    for (const auto& c : cusps.cusps) s += num(c.theta2) + ',' + num(c.theta3) + ",cusp\n";
    if (config) s += num(config->theta2) + ',' + num(config->theta3) + ",config\n";
    emit(o, s, out);
    return kExitOk;
  }

  SvgCanvas svg(-kPi, kPi, -kPi, kPi);
  svg.title("Singular set in joint space, " + params_caption(o.params));
  svg.axes(kAngleTicks, kAngleLabels, kAngleTicks, kAngleLabels, "θ2", "θ3");
  for (const auto& b : branches) {
    const bool line = b.kind == BranchKind::LinePlus || b.kind == BranchKind::LineMinus;
    const std::string style = line ? "stroke:#c0392b;stroke-width:1.5;stroke-dasharray:6,4"
                              : b.kind == BranchKind::CurvePlus ? "stroke:#1f4e9c;stroke-width:1.5"
                                                                : "stroke:#2a9d8f;stroke-width:1.5";
    for (const auto& run : split_on_wrap(b.samples)) svg.polyline(run, style);
  }
  for (const auto& c : cusps.cusps) {
    svg.circle({c.theta2, c.theta3}, 4, "fill:#000",
               "class=\"cusp\" data-theta2=\"" + num(c.theta2) + "\" data-theta3=\"" + num(c.theta3) + "\"");
  }
  if (config) svg.circle({config->theta2, config->theta3}, 5, "fill:none;stroke:#e67e22;stroke-width:2", "class=\"config\"");
  svg.legend({{"curve, sin phi >= 0", "#1f4e9c"}, {"curve, sin phi < 0", "#2a9d8f"}, {"singular line", "#c0392b"},
              {"cusp", "#000"}});
  emit(o, svg.str(), out);
  return kExitOk;
}

int cmd_plot_workspace(const Options& o, std::ostream& out, std::ostream&) {
  const auto fmt = resolve_format(o, "svg", {"svg", "csv"});
  o.params.validate();
  const int n = o.samples.value_or(1024);
  const auto branches = trace_singularity_curves(o.params, n);
  const auto bounds = classify_boundaries(o.params, branches);
  const auto cusps = find_cusps(o.params);
  const auto config = marked_config(o);
  std::optional<CrossSectionPoint> config_image;
  if (config) config_image = to_cross_section(forward_kinematics(o.params, *config));

  if (fmt == "csv") {
    std::string s = "rho,z,role\n";
    for (const auto* set : {&bounds.internal, &bounds.external})
      for (const auto& c : *set)
        for (const auto& p : c.polyline) s += num(p.rho) + ',' + num(p.z) + ',' + std::string(to_string(c.role)) + '\n';
    for (const auto& p : bounds.isolated_points) s += num(p.rho) + ',' + num(p.z) + ",isolated\n";
    for (const auto& c : cusps.cusps) s += num(c.location.rho) + ',' + num(c.location.z) + ",cusp\n";
    if (config_image) s += num(config_image->rho) + ',' + num(config_image->z) + ",config\n";
    emit(o, s, out);
    return kExitOk;
  }

  const double r = 1.05 * o.params.reach();
  SvgCanvas svg(0.0, r, -r, r, 440.0, 760.0);
  svg.title("Half cross-section, " + params_caption(o.params));
  const auto xt = linear_ticks(0.0, r, 4);
  const auto yt = linear_ticks(-r, r, 8);
  svg.axes(xt, tick_labels(xt), yt, tick_labels(yt), "ρ", "z");
  auto draw = [&](const std::vector<BoundaryCurve>& set, const char* style) {
    for (const auto& c : set) {
      std::vector<Point2> pts;
      for (const auto& p : c.polyline) pts.push_back({p.rho, p.z});
      svg.polyline(pts, style);
    }
  };
  draw(bounds.internal, "stroke:#1f77b4;stroke-width:1.5");
  draw(bounds.external, "stroke:#d62728;stroke-width:2");
  for (const auto& p : bounds.isolated_points)
    svg.circle({p.rho, p.z}, 3.5, "fill:#2ca02c", "class=\"isolated\" data-rho=\"" + num(p.rho) + "\" data-z=\"" + num(p.z) + "\"");
  for (const auto& c : cusps.cusps) {
    svg.circle({c.location.rho, c.location.z}, 4, "fill:#000",
               "class=\"cusp\" data-rho=\"" + num(c.location.rho) + "\" data-z=\"" + num(c.location.z) + "\"");
  }
  if (config_image)
    svg.circle({config_image->rho, config_image->z}, 5, "fill:none;stroke:#e67e22;stroke-width:2", "class=\"config\"");
  svg.legend({{"internal", "#1f77b4"}, {"external", "#d62728"}, {"isolated", "#2ca02c"}, {"cusp", "#000"}});
  emit(o, svg.str(), out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream&) {
  const auto fmt = resolve_format(o, "csv", {"csv", "svg"});
  const int res = o.resolution.value_or(200);
  if (res < 32) throw UsageError{"sweep resolution must be at least 32, got " + std::to_string(res)};
  if (!(o.d3_max > 0.0 && o.d4_max > 0.0)) throw UsageError{"--d3-max and --d4-max must be positive"};
  const double d2 = o.params.d2;
  const double r2 = o.params.r2;
  DhParams{d2, 1.0, 1.0, r2}.validate();
  const GridSpec grid{o.samples.value_or(512)};
  if (o.empirical) grid.validate();

  struct Cell {
    double d3, d4;
    std::string domain;
    bool cuspidal;
  };
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(res) * res);
  for (int i = 0; i < res; ++i) {
    const double d3 = o.d3_max * (i + 0.5) / res;
    for (int j = 0; j < res; ++j) {
      const double d4 = o.d4_max * (j + 0.5) / res;
      const DhParams p{d2, d3, d4, r2};
      const std::string label =
          o.empirical ? empirical_label(empirical_domain(p, grid)) : domain_label(classify_domain(p).domain);
      cells.push_back({d3, d4, label, is_cuspidal(p).cuspidal});
    }
  }

  if (fmt == "csv") {
    std::string s = "d3,d4,domain,cuspidal\n";
    for (const auto& c : cells)
      s += num(c.d3) + ',' + num(c.d4) + ',' + c.domain + ',' + (c.cuspidal ? "true" : "false") + '\n';
    emit(o, s, out);
    return kExitOk;
  }

  SvgCanvas svg(0.0, o.d3_max, 0.0, o.d4_max, 700.0, 700.0);
  char caption[96];
  std::snprintf(caption, sizeof caption, "Domains in the (d3, d4) plane, d2=%g r2=%g", d2, r2);
  svg.title(caption);
  const double w3 = o.d3_max / res, w4 = o.d4_max / res;
  for (const auto& c : cells) {
    const auto it = kDomainColours.find(c.domain);
    svg.rect(c.d3 - w3 / 2, c.d4 - w4 / 2, c.d3 + w3 / 2, c.d4 + w4 / 2,
             it == kDomainColours.end() ? "#000000" : it->second);
  }
  // Surface overlays, broken where a surface is undefined or leaves the box.
  const int n = 800;
  const std::array<const char*, 4> dash{"", "stroke-dasharray:8,3", "stroke-dasharray:2,2", "stroke-dasharray:6,2,2,2"};
  for (int k = 0; k < 4; ++k) {
    std::vector<Point2> run;
    auto flush = [&] {
      svg.polyline(run, std::string("stroke:#111;stroke-width:1.6;") + dash[k]);
      run.clear();
    };
    for (int i = 0; i < n; ++i) {
      const double d3 = o.d3_max * (i + 0.5) / n;
      const auto s = surfaces(d2, d3, r2);
      const std::optional<double> v = k == 0 ? std::optional(s.c1) : k == 1 ? std::optional(s.c2) : k == 2 ? s.c3 : s.c4;
      if (v && *v >= 0.0 && *v <= o.d4_max) run.push_back({d3, *v});
      else flush();
    }
    flush();
  }
  const auto t3 = linear_ticks(0.0, o.d3_max, 4);
  const auto t4 = linear_ticks(0.0, o.d4_max, 4);
  svg.axes(t3, tick_labels(t3), t4, tick_labels(t4), "d3", "d4");
  svg.legend({kDomainColours.begin(), kDomainColours.end()});
  svg.note("C1 solid, C2 dashed, C3 dotted, C4 dash-dot");
  emit(o, svg.str(), out);
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  resolve_format(o, "json", {"json"});
  if (o.draws < 1) throw UsageError{"--draws must be at least 1"};
  const GridSpec grid{o.resolution.value_or(512)};
  grid.validate();

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> length(0.1, 4.0);
  int agreed = 0, non_generic = 0;
  json failures = json::array();
  json flagged = json::array();
  for (int k = 0; k < o.draws; ++k) {
    DhParams p{1.0, 0.0, 0.0, 0.0};
    p.d3 = length(rng);
    p.d4 = length(rng);
    p.r2 = length(rng);
    TopologyOptions topt;
    topt.empirical = true;
    topt.grid = grid;
    const auto r = analyze(p, topt);
    if (!r.generic()) {
      ++non_generic;
      flagged.push_back({{"draw", k}, {"params", params_json(p)}, {"reason", non_generic_reason(r)}});
      continue;
    }
    std::vector<std::string> broken;
    if (!r.agreement || !*r.agreement) broken.emplace_back("domain");
    if (r.cusps.count() != r.empirical->evidence.cusp_count) broken.emplace_back("cusp_count");
    if (r.cuspidal.cuspidal != (r.cusps.count() >= 1)) broken.emplace_back("cuspidality");
    if (r.empirical->evidence.cusp_status != OracleStatus::Ok) broken.emplace_back("unstable_cusp_count");
    if (r.empirical->evidence.cusp_count % 2 != 0) broken.emplace_back("odd_cusp_count");
    if (broken.empty()) {
      ++agreed;
      continue;
    }
    json f{{"draw", k}, {"params", params_json(p)}, {"failed", broken}};
    f.update(report_json(r));
    failures.push_back(f);
    err << "draw " << k << " disagrees (" << params_caption(p) << ")\n";
  }

  // Control: a design placed on C2 must be flagged, not counted as a failure.
  const DhParams on_surface{1.0, 2.0, surfaces(1.0, 2.0, 1.0).c2, 1.0};
  const bool control_flagged = !analyze(on_surface).generic();

  json c1;
  bool c1_ok = false;
  try {
    const auto check = check_c1_form(1.0, 2.0, 1.0, grid);
    c1 = {{"d2", 1.0},
          {"d3", 2.0},
          {"r2", 1.0},
          {"empirical", check.transition.d4},
          {"bracket", {check.transition.lower, check.transition.upper}},
          {"four_equal_roots", check.four_equal_roots},
          {"expanded_general", check.expanded_general},
          {"matches", check.matches ? json(to_string(*check.matches)) : json(nullptr)},
          {"shipped", to_string(kDefaultC1Form)},
          {"shipped_matches", check.shipped_form_matches}};
    c1_ok = check.shipped_form_matches;
  } catch (const std::exception& e) {
    c1 = {{"error", e.what()}};
  }

  const bool pass = failures.empty() && control_flagged && c1_ok;
  json j{{"command", "check"},
         {"version", ORTHOKIN_VERSION},
         {"seed", o.seed},
         {"draws", o.draws},
         {"oracle_grid", grid.resolution},
         {"agreed", agreed},
         {"non_generic", non_generic},
         {"failures", failures},
         {"flagged_non_generic", flagged},
         {"on_surface_control", {{"params", params_json(on_surface)}, {"flagged_non_generic", control_flagged}}},
         {"c1_form_check", c1},
         {"pass", pass}};
  emit(o, j.dump(2) + "\n", out);
  return pass ? kExitOk : kExitValidation;
}

}  // namespace orthokin::cli
