#pragma once

#include <vector>

#include "maskprune/geometry.hpp"
#include "maskprune/mesh.hpp"

namespace maskprune {

// Orbit camera around the origin. Azimuth rotates about world +Y, elevation
// lifts toward +Y, and azimuth 0 / elevation 0 places the camera on the +Z
// axis looking back at the origin. The up vector is world +Y (+X at the
// ±90 degree elevation singularities).
struct CameraPose {
  double azimuth_deg = 0.0;
  double elevation_deg = 30.0;
  double distance = 2.732;
  int height = 224;
  int width = 224;
  double fov_y_deg = 30.0;
};

void validate(const CameraPose& pose);

// Projected triangle: NDC xy in [-1,1] (y up) plus per-vertex camera-space
// depth (positive in front of the camera). Triangles with any vertex at or
// behind the camera are flagged culled and their NDC values are meaningless.
struct ScreenTriangle {
  Vec2 ndc[3];
  double depth[3];
  bool culled = false;
};

Vec3 camera_position(const CameraPose& pose);

// World-to-camera rigid transform. Camera space is right-handed with the
// camera looking down -Z and +Y up.
RigidTransform view_matrix(const CameraPose& pose);

// Perspective-projects one point; depth receives the camera-space depth.
Vec2 project_point(const CameraPose& pose, const RigidTransform& view, Vec3 p, double& depth);

// One ScreenTriangle per face, in face order.
std::vector<ScreenTriangle> project(const TriangleMesh& mesh, const CameraPose& pose);

// n_views poses with azimuths evenly spaced over [0, 360).
std::vector<CameraPose> turntable_poses(int n_views, double elevation_deg, double distance,
    int image_size = 224, double fov_y_deg = 30.0);

// Pixel centers in NDC; row 0 is the top image row.
inline double pixel_center_x(int col, int width) { return (2.0 * col + 1.0) / width - 1.0; }
inline double pixel_center_y(int row, int height) { return 1.0 - (2.0 * row + 1.0) / height; }

}  // namespace maskprune
