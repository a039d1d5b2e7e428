#include "maskprune/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace maskprune {

TriangleMesh make_icosphere(int subdivisions) {
  if (subdivisions < 0) throw std::runtime_error("make_icosphere: subdivisions must be >= 0");
  if (subdivisions > 8) throw std::runtime_error("make_icosphere: subdivisions > 8 not supported");

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + phi * phi);
  TriangleMesh mesh;
  mesh.vertices = {{-s, phi * s, 0}, {s, phi * s, 0}, {-s, -phi * s, 0}, {s, -phi * s, 0},
      {0, -s, phi * s}, {0, s, phi * s}, {0, -s, -phi * s}, {0, s, -phi * s},
      {phi * s, 0, -s}, {phi * s, 0, s}, {-phi * s, 0, -s}, {-phi * s, 0, s}};
  mesh.faces = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
      {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6},
      {3, 6, 8}, {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

  for (int level = 0; level < subdivisions; level++) {
    std::map<std::pair<int, int>, int> midpoint;
    auto split = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      auto mid = normalize((mesh.vertices[a] + mesh.vertices[b]) * 0.5);
      midpoint.emplace(key, mesh.vertex_count());
      mesh.vertices.push_back(mid);
      return mesh.vertex_count() - 1;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.faces.size() * 4);
    for (auto& f : mesh.faces) {
      auto ab = split(f[0], f[1]);
      auto bc = split(f[1], f[2]);
      auto ca = split(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }
  return mesh;
}

TriangleMesh make_torus(double major_r, double minor_r, int segments_u, int segments_v) {
  if (segments_u < 3 || segments_v < 3)
    throw std::runtime_error("make_torus: segments must be >= 3");
  if (!(major_r > 0) || !(minor_r > 0) || !(minor_r < major_r))
    throw std::runtime_error("make_torus: need 0 < minor_r < major_r");

  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(segments_u) * segments_v);
  for (int iu = 0; iu < segments_u; iu++) {
    auto u = 2.0 * pi * iu / segments_u;
    for (int iv = 0; iv < segments_v; iv++) {
      auto v = 2.0 * pi * iv / segments_v;
      auto ring = major_r + minor_r * std::cos(v);
      mesh.vertices.push_back({ring * std::cos(u), ring * std::sin(u), minor_r * std::sin(v)});
    }
  }
  auto vid = [&](int iu, int iv) {
    return (iu % segments_u) * segments_v + (iv % segments_v);
  };
  for (int iu = 0; iu < segments_u; iu++) {
    for (int iv = 0; iv < segments_v; iv++) {
      auto a = vid(iu, iv), b = vid(iu + 1, iv), c = vid(iu + 1, iv + 1), d = vid(iu, iv + 1);
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

namespace {

constexpr double kPlateSizeX = 1.0;
constexpr double kPlateSizeY = 0.7;
constexpr double kPlateThickness = 0.1;

void append_box(TriangleMesh& mesh, Vec3 center, Vec3 half) {
  auto base = mesh.vertex_count();
  for (int i = 0; i < 8; i++) {
    mesh.vertices.push_back({center.x + (i & 1 ? half.x : -half.x),
        center.y + (i & 2 ? half.y : -half.y), center.z + (i & 4 ? half.z : -half.z)});
  }
  static const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3},
      {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (auto& q : quads) {
    mesh.faces.push_back({base + q[0], base + q[1], base + q[2]});
    mesh.faces.push_back({base + q[0], base + q[2], base + q[3]});
  }
}

}  // namespace

double plate_thickness() { return kPlateThickness; }

Vec3 plate_hole_center(int hole_count, int hole_index) {
  return {kPlateSizeX * ((hole_index + 0.5) / hole_count - 0.5), 0.0, 0.0};
}

TriangleMesh make_plate_with_holes(int hole_count, double hole_radius, int grid_x, int grid_y) {
  if (hole_count < 0) throw std::runtime_error("make_plate_with_holes: negative hole count");
  if (grid_x < 2 || grid_y < 2) throw std::runtime_error("make_plate_with_holes: grid too coarse");
  auto cell_x = kPlateSizeX / grid_x;
  auto cell_y = kPlateSizeY / grid_y;
  if (hole_count > 0) {
    auto cell_diag = std::sqrt(cell_x * cell_x + cell_y * cell_y);
    if (!(hole_radius > cell_diag))
      throw std::runtime_error("make_plate_with_holes: hole_radius below grid resolution");
    auto spacing = kPlateSizeX / hole_count;
    if (!(hole_radius < spacing / 2 - cell_diag) || !(hole_radius < kPlateSizeY / 2 - cell_diag))
      throw std::runtime_error("make_plate_with_holes: holes touch each other or the boundary");
  }

  // A grid cell is dropped when all four corners fall inside a hole disk, so
  // the opening is the staircase polygon inscribed in the disk.
  auto corner = [&](int i, int j) {
    return Vec2{kPlateSizeX * (static_cast<double>(i) / grid_x - 0.5),
        kPlateSizeY * (static_cast<double>(j) / grid_y - 0.5)};
  };
  auto in_hole = [&](Vec2 p) {
    for (int h = 0; h < hole_count; h++) {
      auto c = plate_hole_center(hole_count, h);
      if (length_sq(p - Vec2{c.x, c.y}) < hole_radius * hole_radius) return true;
    }
    return false;
  };
  std::vector<char> keep(static_cast<size_t>(grid_x) * grid_y, 1);
  auto cell = [&](int i, int j) -> char& { return keep[static_cast<size_t>(j) * grid_x + i]; };
  for (int j = 0; j < grid_y; j++)
    for (int i = 0; i < grid_x; i++)
      if (in_hole(corner(i, j)) && in_hole(corner(i + 1, j)) && in_hole(corner(i, j + 1)) &&
          in_hole(corner(i + 1, j + 1)))
        cell(i, j) = 0;

  TriangleMesh mesh;
  auto half_t = kPlateThickness / 2;
  // vertex ids: front grid then back grid, (grid_x+1) x (grid_y+1) each
  auto stride = grid_x + 1;
  auto front = [&](int i, int j) { return j * stride + i; };
  auto back_off = stride * (grid_y + 1);
  auto back = [&](int i, int j) { return back_off + j * stride + i; };
  for (int pass = 0; pass < 2; pass++) {
    auto z = pass == 0 ? half_t : -half_t;
    for (int j = 0; j <= grid_y; j++)
      for (int i = 0; i <= grid_x; i++) {
        auto p = corner(i, j);
        mesh.vertices.push_back({p.x, p.y, z});
      }
  }

  auto kept = [&](int i, int j) {
    return i >= 0 && i < grid_x && j >= 0 && j < grid_y && cell(i, j);
  };
  for (int j = 0; j < grid_y; j++) {
    for (int i = 0; i < grid_x; i++) {
      if (!cell(i, j)) continue;
      mesh.faces.push_back({front(i, j), front(i + 1, j), front(i + 1, j + 1)});
      mesh.faces.push_back({front(i, j), front(i + 1, j + 1), front(i, j + 1)});
      mesh.faces.push_back({back(i, j), back(i + 1, j + 1), back(i + 1, j)});
      mesh.faces.push_back({back(i, j), back(i, j + 1), back(i + 1, j + 1)});
      // side walls wherever the neighbor cell is missing
      struct Edge {
        int di, dj;
        int a_i, a_j, b_i, b_j;
      };
      const Edge edges[4] = {{0, -1, i, j, i + 1, j}, {1, 0, i + 1, j, i + 1, j + 1},
          {0, 1, i + 1, j + 1, i, j + 1}, {-1, 0, i, j + 1, i, j}};
      for (auto& e : edges) {
        if (kept(i + e.di, j + e.dj)) continue;
        auto fa = front(e.a_i, e.a_j), fb = front(e.b_i, e.b_j);
        auto ba = back(e.a_i, e.a_j), bb = back(e.b_i, e.b_j);
        mesh.faces.push_back({fa, fb, bb});
        mesh.faces.push_back({fa, bb, ba});
      }
    }
  }
  return compact(mesh);
}

TriangleMesh make_box_grid_chairlike() {
  TriangleMesh mesh;
  for (auto sx : {-1.0, 1.0})
    for (auto sz : {-1.0, 1.0})
      append_box(mesh, {0.34 * sx, -0.30, 0.34 * sz}, {0.04, 0.25, 0.04});
  append_box(mesh, {0, 0, 0}, {0.42, 0.05, 0.42});  // seat
  for (int i = 0; i < 4; i++)                       // back slats
    append_box(mesh, {-0.36 + 0.24 * i, 0.36, -0.38}, {0.035, 0.31, 0.035});
  append_box(mesh, {0, 0.70, -0.38}, {0.42, 0.045, 0.035});  // top rail
  append_box(mesh, {0, 0.38, -0.38}, {0.42, 0.030, 0.030});  // mid rail
  return mesh;
}

AlphaMask render_gt_mask(const TriangleMesh& mesh, const CameraPose& pose) {
  auto screen = project(mesh, pose);
  AlphaMask mask(pose.height, pose.width);
  for (auto& tri : screen) {
    if (tri.culled) continue;
    auto x_min = std::min({tri.ndc[0].x, tri.ndc[1].x, tri.ndc[2].x});
    auto x_max = std::max({tri.ndc[0].x, tri.ndc[1].x, tri.ndc[2].x});
    auto y_min = std::min({tri.ndc[0].y, tri.ndc[1].y, tri.ndc[2].y});
    auto y_max = std::max({tri.ndc[0].y, tri.ndc[1].y, tri.ndc[2].y});
    auto col_min = std::max(static_cast<int>(std::ceil((x_min + 1.0) * pose.width / 2.0 - 0.5)), 0);
    auto col_max = std::min(
        static_cast<int>(std::floor((x_max + 1.0) * pose.width / 2.0 - 0.5)), pose.width - 1);
    auto row_min = std::max(
        static_cast<int>(std::ceil((1.0 - y_max) * pose.height / 2.0 - 0.5)), 0);
    auto row_max = std::min(
        static_cast<int>(std::floor((1.0 - y_min) * pose.height / 2.0 - 0.5)), pose.height - 1);
    for (int r = row_min; r <= row_max; r++) {
      auto y = pixel_center_y(r, pose.height);
      for (int c = col_min; c <= col_max; c++) {
        auto x = pixel_center_x(c, pose.width);
        if (point_in_triangle({x, y}, tri.ndc[0], tri.ndc[1], tri.ndc[2])) mask.at(r, c) = 1.0;
      }
    }
  }
  return mask;
}

SceneKind parse_scene_kind(const std::string& name) {
  if (name == "icosphere") return SceneKind::icosphere;
  if (name == "torus") return SceneKind::torus;
  if (name == "plate_with_holes") return SceneKind::plate_with_holes;
  if (name == "box_grid_chairlike") return SceneKind::box_grid_chairlike;
  throw std::runtime_error("unknown scene kind: " + name);
}

std::string to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::icosphere: return "icosphere";
    case SceneKind::torus: return "torus";
    case SceneKind::plate_with_holes: return "plate_with_holes";
    case SceneKind::box_grid_chairlike: return "box_grid_chairlike";
  }
  throw std::runtime_error("invalid scene kind");
}

TriangleMesh make_scene_mesh(const SceneSpec& spec) {
  switch (spec.kind) {
    case SceneKind::icosphere: return make_icosphere(spec.subdivisions);
    case SceneKind::torus:
      return make_torus(spec.major_radius, spec.minor_radius, spec.segments_u, spec.segments_v);
    case SceneKind::plate_with_holes:
      return make_plate_with_holes(spec.hole_count, spec.hole_radius, spec.grid_x, spec.grid_y);
    case SceneKind::box_grid_chairlike: return make_box_grid_chairlike();
  }
  throw std::runtime_error("invalid scene kind");
}

}  // namespace maskprune
