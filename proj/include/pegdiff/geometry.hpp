#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "pegdiff/config.hpp"

namespace pegdiff {

// Convex polygon, counterclockwise vertex order.
struct Polygon {
  std::vector<Eigen::Vector2d> pts;

  double area() const {
    double a = 0.0;
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i) {
      const auto& p = pts[i];
      const auto& q = pts[(i + 1) % n];
      a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
  }

  bool ccw_convex() const {
    const int n = static_cast<int>(pts.size());
    if (n < 3) return false;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d a = pts[(i + 1) % n] - pts[i];
      const Eigen::Vector2d b = pts[(i + 2) % n] - pts[(i + 1) % n];
      if (a.x() * b.y() - a.y() * b.x() <= 0.0) return false;
    }
    return true;
  }

  // Signed distance to the boundary, positive outside. For convex CCW
  // polygons this is the max of per-edge signed distances (exact inside and
  // in edge regions; a mild underestimate in vertex regions, which is fine
  // for penalty contact). Outward normal of the maximizing edge is optional.
  double signed_out_dist(const Eigen::Vector2d& p, Eigen::Vector2d* normal = nullptr) const {
    const int n = static_cast<int>(pts.size());
    double best = -1e30;
    Eigen::Vector2d best_n(0, 0);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d& a = pts[i];
      const Eigen::Vector2d e = pts[(i + 1) % n] - a;
      const Eigen::Vector2d nrm = Eigen::Vector2d(e.y(), -e.x()).normalized();
      const double d = nrm.dot(p - a);
      if (d > best) {
        best = d;
        best_n = nrm;
      }
    }
    if (normal) *normal = best_n;
    return best;
  }

  bool contains(const Eigen::Vector2d& p) const { return signed_out_dist(p) <= 0.0; }

  Polygon translated(const Eigen::Vector2d& d) const {
    Polygon out = *this;
    for (auto& p : out.pts) p += d;
    return out;
  }

  Polygon rotated(double yaw) const {
    const Eigen::Rotation2Dd R(yaw);
    Polygon out = *this;
    for (auto& p : out.pts) p = R * p;
    return out;
  }
};

// Offset a convex polygon by delta (positive = outward): shift every edge
// along its outward normal, re-intersect consecutive edge lines.
inline Polygon offset_polygon(const Polygon& poly, double delta) {
  const int n = static_cast<int>(poly.pts.size());
  std::vector<Eigen::Vector2d> anchors(n);
  std::vector<Eigen::Vector2d> dirs(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly.pts[i];
    const Eigen::Vector2d e = poly.pts[(i + 1) % n] - a;
    const Eigen::Vector2d nrm = Eigen::Vector2d(e.y(), -e.x()).normalized();
    anchors[i] = a + delta * nrm;
    dirs[i] = e;
  }
  Polygon out;
  out.pts.resize(n);
  for (int i = 0; i < n; ++i) {
    // vertex i+1 = intersection of edge i and edge i+1 lines
    const int j = (i + 1) % n;
    const Eigen::Vector2d& p = anchors[i];
    const Eigen::Vector2d& r = dirs[i];
    const Eigen::Vector2d& q = anchors[j];
    const Eigen::Vector2d& s = dirs[j];
    const double denom = r.x() * s.y() - r.y() * s.x();
    const double t = ((q - p).x() * s.y() - (q - p).y() * s.x()) / denom;
    out.pts[j] = p + t * r;
  }
  return out;
}

enum class Profile { cuboid, hexagon, pentagon, triangle, circle };

inline std::string profile_name(Profile p) {
  switch (p) {
    case Profile::cuboid: return "cuboid";
    case Profile::hexagon: return "hexagon";
    case Profile::pentagon: return "pentagon";
    case Profile::triangle: return "triangle";
    case Profile::circle: return "circle";
  }
  return "?";
}

inline Profile profile_from_name(const std::string& s) {
  if (s == "cuboid") return Profile::cuboid;
  if (s == "hexagon") return Profile::hexagon;
  if (s == "pentagon") return Profile::pentagon;
  if (s == "triangle") return Profile::triangle;
  if (s == "circle" || s == "cylinder") return Profile::circle;
  throw ConfigError("unknown geometry profile: " + s);
}

// Peg outlines, centered at the origin. dim1/dim2 meaning per profile:
// cuboid: width x depth; hexagon/pentagon: flat-to-flat span; triangle: side
// length; circle: diameter (24-gon approximation).
inline Polygon make_profile(Profile kind, double dim1, double dim2 = 0.0) {
  Polygon poly;
  auto regular = [&](int n, double circumradius, double phase) {
    for (int i = 0; i < n; ++i) {
      const double a = phase + 2.0 * M_PI * i / n;
      poly.pts.emplace_back(circumradius * std::cos(a), circumradius * std::sin(a));
    }
  };
  switch (kind) {
    case Profile::cuboid: {
      const double hw = dim1 / 2.0, hd = (dim2 > 0 ? dim2 : dim1) / 2.0;
      poly.pts = {{hw, -hd}, {hw, hd}, {-hw, hd}, {-hw, -hd}};
      break;
    }
    case Profile::hexagon: {
      // flat-to-flat = 2 * inradius
      const double R = (dim1 / 2.0) / std::cos(M_PI / 6.0);
      regular(6, R, 0.0);
      break;
    }
    case Profile::pentagon: {
      // flat-to-vertex span = inradius + circumradius
      const double R = dim1 / (1.0 + std::cos(M_PI / 5.0));
      regular(5, R, M_PI / 2.0);
      break;
    }
    case Profile::triangle: {
      const double R = dim1 / std::sqrt(3.0);
      regular(3, R, M_PI / 2.0);
      break;
    }
    case Profile::circle: {
      regular(24, dim1 / 2.0, 0.0);
      break;
    }
  }
  return poly;
}

// Scene: a flat plate with its top surface at z = 0, a prismatic hole at
// hole_center, and the matching peg (hole outline inset by the clearance).
// The hole mouth carries a chamfer band (width w, depth d) that widens the
// opening at the surface; this is the capture funnel of a machined part.
struct SceneGeometry {
  Eigen::Vector2d hole_center{0.0, 0.0};
  Profile profile = Profile::cuboid;
  double dim1 = 0.035, dim2 = 0.025;  // peg characteristic dimensions (m)
  double clearance = 1e-4;            // m, per side
  double peg_length = 0.06;           // m
  double chamfer_width = 2e-3;        // m, lateral extent of the mouth chamfer
  double chamfer_depth = 2.5e-3;      // m, vertical extent of the chamfer
  double yaw = 0.0;                   // scene yaw (rotates all outlines)

  Polygon peg_local;   // peg footprint in the peg body frame (centered)
  Polygon hole_poly;   // world frame
  Polygon mouth_poly;  // hole widened by the chamfer, world frame

  void build() {
    peg_local = make_profile(profile, dim1, dim2);
    const Polygon peg_world = peg_local.rotated(yaw);
    hole_poly = offset_polygon(peg_world, clearance).translated(hole_center);
    mouth_poly = offset_polygon(hole_poly, chamfer_width);
    validate();
  }

  void validate() const {
    if (clearance <= 0.0) throw ConfigError("scene: clearance must be > 0");
    if (peg_length <= 0.0) throw ConfigError("scene: peg_length must be > 0");
    if (chamfer_width <= 0.0 || chamfer_depth <= 0.0)
      throw ConfigError("scene: chamfer dimensions must be > 0");
    if (peg_local.pts.size() < 3 || peg_local.area() <= 0.0)
      throw ConfigError("scene: degenerate peg footprint (zero area)");
    if (!peg_local.ccw_convex()) throw ConfigError("scene: footprint must be convex CCW");
    // peg strictly inside hole when centered
    const Polygon peg_world = peg_local.rotated(yaw).translated(hole_center);
    for (const auto& p : peg_world.pts)
      if (hole_poly.signed_out_dist(p) >= 0.0)
        throw ConfigError("scene: peg footprint not strictly inside hole");
  }

  // Contact sample points on the peg outline: vertices plus edge midpoints.
  std::vector<Eigen::Vector2d> sample_points() const {
    std::vector<Eigen::Vector2d> out;
    const int n = static_cast<int>(peg_local.pts.size());
    out.reserve(2 * n);
    for (int i = 0; i < n; ++i) {
      out.push_back(peg_local.pts[i]);
      out.push_back(0.5 * (peg_local.pts[i] + peg_local.pts[(i + 1) % n]));
    }
    return out;
  }

  static SceneGeometry from_config(const Config& cfg) {
    SceneGeometry g;
    g.profile = profile_from_name(cfg.get_str("scene.geometry", "cuboid"));
    switch (g.profile) {
      case Profile::cuboid:
        g.dim1 = cfg.get_double("scene.peg_width_mm", 35.0) * 1e-3;
        g.dim2 = cfg.get_double("scene.peg_depth_mm", 25.0) * 1e-3;
        break;
      case Profile::hexagon:
      case Profile::pentagon:
        g.dim1 = cfg.get_double("scene.peg_span_mm", 19.0) * 1e-3;
        break;
      case Profile::triangle:
        g.dim1 = cfg.get_double("scene.peg_side_mm", 34.0) * 1e-3;
        break;
      case Profile::circle:
        g.dim1 = cfg.get_double("scene.peg_diameter_mm", 20.0) * 1e-3;
        break;
    }
    g.clearance = cfg.get_double("scene.clearance_mm", 0.1) * 1e-3;
    g.peg_length = cfg.get_double("scene.peg_length_mm", 60.0) * 1e-3;
    g.chamfer_width = cfg.get_double("scene.chamfer_width_mm", 2.0) * 1e-3;
    g.chamfer_depth = cfg.get_double("scene.chamfer_depth_mm", 2.5) * 1e-3;
    g.hole_center.x() = cfg.get_double("scene.hole_x_m", 0.0);
    g.hole_center.y() = cfg.get_double("scene.hole_y_m", 0.0);
    g.yaw = cfg.get_double("scene.yaw_rad", 0.0);
    g.build();
    return g;
  }

  static SceneGeometry standard(Profile p, double clearance_mm = 0.1) {
    SceneGeometry g;
    g.profile = p;
    switch (p) {
      case Profile::cuboid: g.dim1 = 0.035; g.dim2 = 0.025; break;
      case Profile::hexagon: g.dim1 = 0.019; break;
      case Profile::pentagon: g.dim1 = 0.019; break;
      case Profile::triangle: g.dim1 = 0.034; break;
      case Profile::circle: g.dim1 = 0.020; break;
    }
    g.clearance = clearance_mm * 1e-3;
    g.build();
    return g;
  }
};

}  // namespace pegdiff
