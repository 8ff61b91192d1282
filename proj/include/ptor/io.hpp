#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptor/errors.hpp"
#include "ptor/exitwalk.hpp"
#include "ptor/field.hpp"
#include "ptor/geometry.hpp"
#include "ptor/radial.hpp"
#include "ptor/report.hpp"
#include "ptor/solver.hpp"
#include "ptor/symmetrize.hpp"

namespace ptor {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// domain spec files

inline json domain_to_json(const DomainSpec& d) {
  json j;
  j["kind"] = kind_name(d.kind);
  switch (d.kind) {
    case DomainKind::disk:
      j["radius"] = d.radius;
      break;
    case DomainKind::rectangle:
      j["half_widths"] = {d.half_widths[0], d.half_widths[1]};
      break;
    case DomainKind::polygon: {
      json verts = json::array();
      for (const Point& v : d.vertices) verts.push_back({v[0], v[1]});
      j["vertices"] = verts;
      break;
    }
    case DomainKind::annulus:
      j["r_in"] = d.r_in;
      j["r_out"] = d.r_out;
      break;
    case DomainKind::ball:
      j["n"] = d.n;
      j["radius"] = d.radius;
      break;
    case DomainKind::slab:
      j["n"] = d.n;
      j["half_width"] = d.half_width;
      break;
  }
  return j;
}

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      fail(errc::invalid_argument,
           "domain file: unknown key \"" + it.key() + "\"");
    }
  }
  for (const std::string& k : allowed) {
    if (!j.contains(k)) {
      fail(errc::invalid_argument, "domain file: missing key \"" + k + "\"");
    }
  }
}

}  // namespace detail

/// Strict parser: exactly the keys of the given kind, nothing else.
inline DomainSpec domain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail(errc::invalid_argument, "domain file: expected an object with \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "disk") {
    detail::require_keys(j, {"kind", "radius"});
    return DomainSpec::disk(j["radius"].get<double>());
  }
  if (kind == "rectangle") {
    detail::require_keys(j, {"kind", "half_widths"});
    const auto hw = j["half_widths"];
    if (!hw.is_array() || hw.size() != 2) {
      fail(errc::invalid_argument, "domain file: half_widths must be [hx, hy]");
    }
    return DomainSpec::rectangle(hw[0].get<double>(), hw[1].get<double>());
  }
  if (kind == "polygon") {
    detail::require_keys(j, {"kind", "vertices"});
    std::vector<Point> verts;
    for (const auto& v : j["vertices"]) {
      if (!v.is_array() || v.size() != 2) {
        fail(errc::invalid_argument, "domain file: vertex must be [x, y]");
      }
      verts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return DomainSpec::polygon(std::move(verts));
  }
  if (kind == "annulus") {
    detail::require_keys(j, {"kind", "r_in", "r_out"});
    return DomainSpec::annulus(j["r_in"].get<double>(), j["r_out"].get<double>());
  }
  if (kind == "ball") {
    detail::require_keys(j, {"kind", "n", "radius"});
    return DomainSpec::ball(j["n"].get<int>(), j["radius"].get<double>());
  }
  if (kind == "slab") {
    detail::require_keys(j, {"kind", "n", "half_width"});
    return DomainSpec::slab(j["n"].get<int>(), j["half_width"].get<double>());
  }
  fail(errc::invalid_argument, "domain file: unknown kind \"" + kind + "\"");
}

inline DomainSpec load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::invalid_argument, "cannot open domain file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(errc::invalid_argument, "domain file " + path + ": " + e.what());
  }
  return domain_from_json(j);
}

// ---------------------------------------------------------------------------
// atomic writes

/// Write via a temp file in the same directory, then rename.
inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::invalid_argument, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// CSV emitters

/// Flat field dump: commented header (h, origin, dims) then i,j,value rows
/// in row-major order.
inline std::string field_to_csv(const GridField& u) {
  const GridMask& m = u.mask();
  std::ostringstream os;
  os.precision(17);
  os << "# h=" << m.h() << " origin=" << m.origin()[0] << "," << m.origin()[1]
     << " dims=" << m.nx() << "x" << m.ny() << "\n";
  os << "i,j,value\n";
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto c = m.cells()[k];
    os << c[0] << "," << c[1] << "," << u[k] << "\n";
  }
  return os.str();
}

inline std::string profile_to_csv(const RadialProfile& prof) {
  std::ostringstream os;
  os.precision(17);
  os << "# n=" << prof.n << " p=" << prof.p << " lambda=" << prof.lambda
     << " first_zero=" << prof.first_zero << "\n";
  os << "r,u,u_prime\n";
  for (const auto& s : prof.samples) {
    os << s[0] << "," << s[1] << "," << s[2] << "\n";
  }
  return os.str();
}

inline std::string rearranged_to_csv(const RearrangedField& rf) {
  std::ostringstream os;
  os.precision(17);
  os << "radius,value\n";
  for (const auto& rv : rf.radial_values) {
    os << rv.first << "," << rv.second << "\n";
  }
  return os.str();
}

inline std::string exit_estimates_csv(const std::vector<ExitEstimate>& ests) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,mean,std_error,paths,seed,eps,rng\n";
  for (const auto& e : ests) {
    os << e.point[0] << "," << e.point[1] << "," << e.mean << ","
       << e.std_error << "," << e.paths << "," << e.seed << "," << e.eps << ","
       << e.rng << "\n";
  }
  return os.str();
}

inline std::string checks_summary_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os.precision(17);
  os << "claim_id,pass,margin\n";
  for (const auto& r : reports) {
    os << r.claim_id << "," << (r.pass ? 1 : 0) << "," << r.margin << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON reports

inline json solve_report_json(const SolveResult& res, double h) {
  json j;
  j["p"] = res.p;
  j["h"] = h;
  j["lambda"] = res.lambda;
  j["c_p"] = res.c_p;
  j["r_p"] = res.r_p;
  j["u_max"] = res.u_max;
  j["calibrated_lambda"] = res.calibrated_lambda;
  j["residual"] = res.pde_residual;
  j["iterations"] = res.iterations;
  return j;
}

inline json check_to_json(const CheckReport& r) {
  json j;
  j["claim_id"] = r.claim_id;
  json inputs;
  for (const auto& kv : r.inputs) inputs[kv.first] = kv.second;
  j["inputs"] = inputs;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["relation"] = relation_name(r.relation);
  j["margin"] = r.margin;
  j["tolerance"] = r.tolerance;
  j["strictness"] = r.strictness;
  j["pass"] = r.pass;
  j["inconclusive"] = r.inconclusive;
  j["notes"] = r.notes;
  return j;
}

inline json profile_summary_json(const RadialProfile& prof) {
  json j;
  j["n"] = prof.n;
  j["p"] = prof.p;
  j["lambda"] = prof.lambda;
  j["first_zero"] = prof.first_zero;
  j["u_max"] = prof.u_max;
  j["samples"] = prof.samples.size();
  if (prof.n >= 2) j["c_p"] = radial_c_p(prof);
  return j;
}

inline json error_json(const Error& e) {
  json j;
  j["error"]["code"] = errc_name(e.code());
  j["error"]["message"] = e.what();
  return j;
}

// ---------------------------------------------------------------------------
// level-set exports

inline std::string level_curves_csv(const LevelSetData& data, std::size_t li) {
  std::ostringstream os;
  os.precision(17);
  os << "u,u_prime,curve\n";
  for (std::size_t c = 0; c < data.curves[li].size(); ++c) {
    for (const Point& pt : data.curves[li][c]) {
      os << pt[0] << "," << pt[1] << "," << c << "\n";
    }
  }
  return os.str();
}

inline json levelset_manifest(const LevelSetData& data,
                              const std::vector<std::string>& files) {
  json j;
  j["system"] = data.system == PhaseSystem::slab_energy ? "slab_energy"
                                                        : "ball_critical_energy";
  j["parameters"]["p"] = data.params.p;
  j["parameters"]["n"] = data.params.n;
  j["parameters"]["lambda"] = data.params.lambda;
  j["parameters"]["variant"] =
      data.params.variant == BallEnergyVariant::paper ? "paper" : "conserved";
  j["window"] = {data.window.u_min, data.window.u_max, data.window.v_min,
                 data.window.v_max};
  json levels = json::array();
  for (std::size_t li = 0; li < data.levels.size(); ++li) {
    json l;
    l["level"] = data.levels[li];
    l["curves"] = data.curves[li].size();
    l["file"] = files[li];
    levels.push_back(l);
  }
  j["levels"] = levels;
  j["max_defect"] = level_set_max_defect(data);
  return j;
}

/// Minimal self-contained SVG: the window mapped onto a fixed 800x600
/// viewBox, one polyline per curve.
inline std::string levelset_svg(const LevelSetData& data) {
  const double width = 800.0, height = 600.0;
  const double margin = 40.0;
  auto map_x = [&](double u) {
    return margin + (u - data.window.u_min) /
                        (data.window.u_max - data.window.u_min) *
                        (width - 2 * margin);
  };
  auto map_y = [&](double v) {
    return height - margin -
           (v - data.window.v_min) / (data.window.v_max - data.window.v_min) *
               (height - 2 * margin);
  };
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os.precision(8);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width
     << " " << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  // axes through the origin when visible
  if (data.window.u_min < 0 && data.window.u_max > 0) {
    os << "<line x1=\"" << map_x(0) << "\" y1=\"" << margin << "\" x2=\""
       << map_x(0) << "\" y2=\"" << height - margin
       << "\" stroke=\"#cccccc\"/>\n";
  }
  if (data.window.v_min < 0 && data.window.v_max > 0) {
    os << "<line x1=\"" << margin << "\" y1=\"" << map_y(0) << "\" x2=\""
       << width - margin << "\" y2=\"" << map_y(0)
       << "\" stroke=\"#cccccc\"/>\n";
  }
  for (std::size_t li = 0; li < data.levels.size(); ++li) {
    const char* color = palette[li % 6];
    for (const auto& curve : data.curves[li]) {
      os << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" points=\"";
      for (const Point& pt : curve) {
        os << map_x(pt[0]) << "," << map_y(pt[1]) << " ";
      }
      os << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ptor
