#pragma once

#include <string>

#include "maskprune/camera.hpp"
#include "maskprune/image.hpp"
#include "maskprune/mesh.hpp"

namespace maskprune {

// Watertight genus-0 sphere of unit radius; subdivision n has 10*4^n + 2
// vertices (n=4 gives the 2562-vertex template).
TriangleMesh make_icosphere(int subdivisions);

// Watertight genus-1 torus around the +Z axis: ring of radius major_r in
// the XY plane, tube radius minor_r. The defaults fit the unit box.
TriangleMesh make_torus(double major_r = 0.35, double minor_r = 0.12, int segments_u = 96,
    int segments_v = 48);

// Flat thick plate (1.0 x 0.7 x 0.1, facing +Z) with circular through-holes
// spaced along the X axis, genus = hole_count. Holes are discretized on the
// tessellation grid: the opening contains the disk of radius
// hole_radius - cell_diagonal around each hole center and stays inside the
// hole_radius disk.
TriangleMesh make_plate_with_holes(int hole_count, double hole_radius = 0.07, int grid_x = 48,
    int grid_y = 34);

double plate_thickness();
Vec3 plate_hole_center(int hole_count, int hole_index);

// Chair-shaped arrangement of closed boxes (legs, seat, slatted back with
// see-through gaps). Watertight per component.
TriangleMesh make_box_grid_chairlike();

// Hard binary silhouette: pixel centers covered by any projected triangle.
// Independent of the soft rasterization path; this is the oracle mask the
// pruning pipeline is scored against in synthetic scenes.
AlphaMask render_gt_mask(const TriangleMesh& mesh, const CameraPose& pose);

enum class SceneKind { icosphere, torus, plate_with_holes, box_grid_chairlike };

SceneKind parse_scene_kind(const std::string& name);
std::string to_string(SceneKind kind);

struct SceneSpec {
  SceneKind kind = SceneKind::torus;
  int subdivisions = 4;
  double major_radius = 0.35;
  double minor_radius = 0.12;
  int segments_u = 96;
  int segments_v = 48;
  int hole_count = 2;
  double hole_radius = 0.07;
  int grid_x = 48;
  int grid_y = 34;
};

TriangleMesh make_scene_mesh(const SceneSpec& spec);

}  // namespace maskprune
