#include "maskprune/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace maskprune {

void validate(const TriangleMesh& mesh) {
  auto nv = mesh.vertex_count();
  for (size_t i = 0; i < mesh.faces.size(); i++) {
    for (auto idx : mesh.faces[i]) {
      if (idx < 0 || idx >= nv)
        throw std::runtime_error("face " + std::to_string(i) + " references vertex " +
                                 std::to_string(idx) + " of " + std::to_string(nv));
    }
  }
}

Bounds3 bounds(const TriangleMesh& mesh) {
  Bounds3 b;
  for (auto& v : mesh.vertices) b.expand(v);
  return b;
}

double face_area(const TriangleMesh& mesh, int face) {
  auto& f = mesh.faces[face];
  return triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
}

double surface_area(const TriangleMesh& mesh) {
  double total = 0;
  for (int i = 0; i < mesh.face_count(); i++) total += face_area(mesh, i);
  return total;
}

Vec3 face_centroid(const TriangleMesh& mesh, int face) {
  auto& f = mesh.faces[face];
  return (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
}

namespace {

// First index of an `f` token: "7", "7/1", "7//2", "7/1/2".
int parse_face_index(const std::string& token, int vertex_count, int line) {
  size_t slash = token.find('/');
  auto head = slash == std::string::npos ? token : token.substr(0, slash);
  int idx = 0;
  try {
    idx = std::stoi(head);
  } catch (const std::exception&) {
    throw std::runtime_error("malformed face index '" + token + "' at line " +
                             std::to_string(line));
  }
  if (idx < 0) idx = vertex_count + idx;  // -1 refers to the last vertex
  else idx = idx - 1;
  return idx;
}

}  // namespace

TriangleMesh load_obj(const std::string& path, int* ignored_directives) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open OBJ file: " + path);

  TriangleMesh mesh;
  int ignored = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;

    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v.x >> v.y >> v.z))
        throw std::runtime_error("malformed vertex at line " + std::to_string(line_no));
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string token;
      while (ss >> token) poly.push_back(parse_face_index(token, mesh.vertex_count(), line_no));
      if (poly.size() < 3)
        throw std::runtime_error("face with fewer than 3 vertices at line " +
                                 std::to_string(line_no));
      for (auto idx : poly) {
        if (idx < 0 || idx >= mesh.vertex_count())
          throw std::runtime_error("face index out of range at line " + std::to_string(line_no));
      }
      for (size_t i = 1; i + 1 < poly.size(); i++)
        mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
    } else {
      ignored++;
    }
  }
  if (ignored_directives) *ignored_directives = ignored;
  return mesh;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
  validate(mesh);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  char buf[128];
  for (auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (auto& f : mesh.faces)
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

TriangleMesh remove_faces(const TriangleMesh& mesh, const std::vector<int>& face_ids) {
  std::vector<char> drop(mesh.faces.size(), 0);
  for (auto id : face_ids) {
    if (id < 0 || id >= mesh.face_count())
      throw std::runtime_error("remove_faces: invalid face id " + std::to_string(id));
    drop[id] = 1;
  }
  TriangleMesh out;
  out.vertices = mesh.vertices;
  out.faces.reserve(mesh.faces.size());
  for (size_t i = 0; i < mesh.faces.size(); i++)
    if (!drop[i]) out.faces.push_back(mesh.faces[i]);
  return out;
}

TriangleMesh compact(const TriangleMesh& mesh) {
  std::vector<int> remap(mesh.vertices.size(), -1);
  TriangleMesh out;
  for (auto& f : mesh.faces) {
    std::array<int, 3> nf;
    for (int k = 0; k < 3; k++) {
      if (remap[f[k]] < 0) {
        remap[f[k]] = out.vertex_count();
        out.vertices.push_back(mesh.vertices[f[k]]);
      }
      nf[k] = remap[f[k]];
    }
    out.faces.push_back(nf);
  }
  return out;
}

TriangleMesh normalize_unit(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw std::runtime_error("normalize_unit: empty mesh");
  auto box = bounds(mesh);
  auto ext = box.extent();
  auto longest = std::max({ext.x, ext.y, ext.z});
  if (!(longest > 0)) throw std::runtime_error("normalize_unit: zero extent");
  auto center = box.center();
  auto scale = 1.0 / longest;
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = (v - center) * scale;
  return out;
}

TriangleMesh weld_vertices(const TriangleMesh& mesh, double eps) {
  std::map<std::array<long long, 3>, int> grid;
  std::vector<int> remap(mesh.vertices.size());
  TriangleMesh out;
  for (size_t i = 0; i < mesh.vertices.size(); i++) {
    auto& v = mesh.vertices[i];
    std::array<long long, 3> key = {static_cast<long long>(std::llround(v.x / eps)),
        static_cast<long long>(std::llround(v.y / eps)),
        static_cast<long long>(std::llround(v.z / eps))};
    auto it = grid.find(key);
    if (it == grid.end()) {
      it = grid.emplace(key, out.vertex_count()).first;
      out.vertices.push_back(v);
    }
    remap[i] = it->second;
  }
  for (auto& f : mesh.faces) {
    std::array<int, 3> nf = {remap[f[0]], remap[f[1]], remap[f[2]]};
    if (nf[0] == nf[1] || nf[1] == nf[2] || nf[2] == nf[0]) continue;
    out.faces.push_back(nf);
  }
  return out;
}

namespace {

// 53-bit uniform double in [0,1), stable across standard libraries.
double next_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PointCloud sample_surface(const TriangleMesh& mesh, int n, uint64_t seed) {
  if (n < 1) throw std::runtime_error("sample_surface: n must be >= 1");
  if (mesh.faces.empty()) throw std::runtime_error("sample_surface: mesh has no faces");
  validate(mesh);

  std::vector<double> cumulative(mesh.faces.size());
  double total = 0;
  for (int i = 0; i < mesh.face_count(); i++) {
    total += face_area(mesh, i);
    cumulative[i] = total;
  }
  if (!(total > 0)) throw std::runtime_error("sample_surface: zero total surface area");

  std::mt19937_64 rng(seed);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (int s = 0; s < n; s++) {
    auto r = next_double(rng) * total;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
    auto face = static_cast<int>(it - cumulative.begin());
    if (face >= mesh.face_count()) face = mesh.face_count() - 1;

    auto& f = mesh.faces[face];
    auto a = mesh.vertices[f[0]], b = mesh.vertices[f[1]], c = mesh.vertices[f[2]];
    auto su = std::sqrt(next_double(rng));
    auto v = next_double(rng);
    cloud.points.push_back(a * (1.0 - su) + b * (su * (1.0 - v)) + c * (su * v));
  }
  return cloud;
}

long euler_characteristic(const TriangleMesh& mesh) {
  std::map<std::pair<int, int>, int> edges;
  for (auto& f : mesh.faces) {
    for (int k = 0; k < 3; k++) {
      auto a = f[k], b = f[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  return static_cast<long>(mesh.vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(mesh.faces.size());
}

bool is_watertight(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) return false;
  std::map<std::pair<int, int>, int> edges;
  for (auto& f : mesh.faces) {
    for (int k = 0; k < 3; k++) {
      auto a = f[k], b = f[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  for (auto& [edge, count] : edges)
    if (count != 2) return false;
  return true;
}

}  // namespace maskprune
