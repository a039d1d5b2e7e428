#include "maskprune/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace maskprune {

void validate(const CameraPose& pose) {
  if (!(pose.distance > 0)) throw std::runtime_error("camera distance must be positive");
  if (pose.height < 1 || pose.width < 1) throw std::runtime_error("image size must be >= 1");
  if (!(pose.fov_y_deg > 0) || !(pose.fov_y_deg < 180))
    throw std::runtime_error("fov_y must be in (0, 180) degrees");
}

Vec3 camera_position(const CameraPose& pose) {
  auto az = radians(pose.azimuth_deg);
  auto el = radians(pose.elevation_deg);
  return {pose.distance * std::cos(el) * std::sin(az), pose.distance * std::sin(el),
      pose.distance * std::cos(el) * std::cos(az)};
}

RigidTransform view_matrix(const CameraPose& pose) {
  validate(pose);
  auto eye = camera_position(pose);
  auto backward = normalize(eye);  // camera looks at the origin along -backward

  Vec3 up = {0, 1, 0};
  if (std::abs(std::abs(pose.elevation_deg) - 90.0) < 1e-9) up = {1, 0, 0};

  auto right = normalize(cross(up, backward));
  auto true_up = cross(backward, right);

  RigidTransform t;
  t.rotation(0, 0) = right.x;
  t.rotation(0, 1) = right.y;
  t.rotation(0, 2) = right.z;
  t.rotation(1, 0) = true_up.x;
  t.rotation(1, 1) = true_up.y;
  t.rotation(1, 2) = true_up.z;
  t.rotation(2, 0) = backward.x;
  t.rotation(2, 1) = backward.y;
  t.rotation(2, 2) = backward.z;
  t.translation = -(t.rotation * eye);
  return t;
}

Vec2 project_point(const CameraPose& pose, const RigidTransform& view, Vec3 p, double& depth) {
  auto cam = transform_point(view, p);
  depth = -cam.z;
  auto focal = 1.0 / std::tan(radians(pose.fov_y_deg) * 0.5);
  auto aspect = static_cast<double>(pose.width) / pose.height;
  return {focal / aspect * cam.x / depth, focal * cam.y / depth};
}

std::vector<ScreenTriangle> project(const TriangleMesh& mesh, const CameraPose& pose) {
  validate(pose);
  validate(mesh);
  auto view = view_matrix(pose);
  constexpr double near_eps = 1e-9;

  std::vector<ScreenTriangle> out(mesh.faces.size());
  for (size_t i = 0; i < mesh.faces.size(); i++) {
    auto& f = mesh.faces[i];
    auto& tri = out[i];
    for (int k = 0; k < 3; k++) {
      auto cam = transform_point(view, mesh.vertices[f[k]]);
      tri.depth[k] = -cam.z;
      if (tri.depth[k] <= near_eps) {
        tri.culled = true;
        continue;
      }
      auto focal = 1.0 / std::tan(radians(pose.fov_y_deg) * 0.5);
      auto aspect = static_cast<double>(pose.width) / pose.height;
      tri.ndc[k] = {focal / aspect * cam.x / tri.depth[k], focal * cam.y / tri.depth[k]};
    }
  }
  return out;
}

std::vector<CameraPose> turntable_poses(int n_views, double elevation_deg, double distance,
    int image_size, double fov_y_deg) {
  if (n_views < 1) throw std::runtime_error("turntable_poses: n_views must be >= 1");
  std::vector<CameraPose> poses(n_views);
  for (int i = 0; i < n_views; i++) {
    poses[i].azimuth_deg = 360.0 * i / n_views;
    poses[i].elevation_deg = elevation_deg;
    poses[i].distance = distance;
    poses[i].height = image_size;
    poses[i].width = image_size;
    poses[i].fov_y_deg = fov_y_deg;
  }
  return poses;
}

}  // namespace maskprune
