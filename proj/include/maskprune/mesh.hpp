#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "maskprune/geometry.hpp"

namespace maskprune {

// Indexed triangle mesh. Faces hold vertex indices; operations that drop
// faces keep the vertex list untouched so indices stay stable downstream.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

struct PointCloud {
  std::vector<Vec3> points;
};

// Throws if any face index is out of range or negative.
void validate(const TriangleMesh& mesh);

Bounds3 bounds(const TriangleMesh& mesh);
double face_area(const TriangleMesh& mesh, int face);
double surface_area(const TriangleMesh& mesh);
Vec3 face_centroid(const TriangleMesh& mesh, int face);

// Reads the ASCII OBJ subset: `v x y z`, `f i j k [l...]` (1-based or
// negative indices, optional /t/n suffixes), `#` comments. Polygons are
// fan-triangulated. Any other directive is skipped; the count of skipped
// directives is returned through ignored_directives when non-null.
TriangleMesh load_obj(const std::string& path, int* ignored_directives = nullptr);

void save_obj(const TriangleMesh& mesh, const std::string& path);

// Returns the mesh without the given faces. Vertices are kept as-is and the
// relative order of surviving faces is preserved. Duplicate ids are fine;
// invalid ids throw.
TriangleMesh remove_faces(const TriangleMesh& mesh, const std::vector<int>& face_ids);

// Drops vertices not referenced by any face and reindexes (export helper).
TriangleMesh compact(const TriangleMesh& mesh);

// Centers the bounding box at the origin and scales the longest axis to
// extent 1. Throws on an empty mesh or zero extent.
TriangleMesh normalize_unit(const TriangleMesh& mesh);

// Merges vertices closer than eps and drops faces that collapse.
TriangleMesh weld_vertices(const TriangleMesh& mesh, double eps = 1e-9);

// n points distributed uniformly over the surface: face choice proportional
// to area (zero-area faces get zero weight), position uniform within the
// face. Deterministic for a fixed seed. Throws if the total area is zero.
PointCloud sample_surface(const TriangleMesh& mesh, int n, uint64_t seed);

// Topology helpers. euler_characteristic is V - E + F over the whole vertex
// list; is_watertight checks that every edge is shared by exactly two faces.
long euler_characteristic(const TriangleMesh& mesh);
bool is_watertight(const TriangleMesh& mesh);

}  // namespace maskprune
