#include "maskprune/spatial.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace maskprune {

namespace {

constexpr int kLeafSize = 8;

int longest_axis(const Bounds3& box) {
  auto e = box.extent();
  if (e.x >= e.y && e.x >= e.z) return 0;
  return e.y >= e.z ? 1 : 2;
}

double axis_value(Vec3 v, int axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }

}  // namespace

PointKdTree::PointKdTree(const std::vector<Vec3>& points) : points_(points) {
  if (points_.empty()) throw std::runtime_error("PointKdTree: empty point set");
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  root_ = build(0, static_cast<int>(points_.size()));
}

int PointKdTree::build(int begin, int end) {
  Node node;
  node.begin = begin;
  node.end = end;
  for (int i = begin; i < end; i++) node.box.expand(points_[i]);

  auto index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin > kLeafSize) {
    auto axis = longest_axis(node.box);
    auto mid = begin + (end - begin) / 2;
    std::nth_element(points_.begin() + begin, points_.begin() + mid, points_.begin() + end,
        [axis](Vec3 a, Vec3 b) { return axis_value(a, axis) < axis_value(b, axis); });
    auto left = build(begin, mid);
    auto right = build(mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
  }
  return index;
}

void PointKdTree::search(int node_id, Vec3 query, double& best) const {
  auto& node = nodes_[node_id];
  if (distance_sq(node.box, query) > best) return;
  if (node.right < 0) {
    for (int i = node.begin; i < node.end; i++)
      best = std::min(best, length_sq(query - points_[i]));
    return;
  }
  auto d_left = distance_sq(nodes_[node.left].box, query);
  auto d_right = distance_sq(nodes_[node.right].box, query);
  if (d_left <= d_right) {
    search(node.left, query, best);
    search(node.right, query, best);
  } else {
    search(node.right, query, best);
    search(node.left, query, best);
  }
}

double PointKdTree::nearest_sq(Vec3 query) const {
  auto best = std::numeric_limits<double>::max();
  search(root_, query, best);
  return best;
}

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) {
  validate(mesh);
  if (mesh.faces.empty()) throw std::runtime_error("TriangleBvh: mesh has no faces");
  tris_.reserve(mesh.faces.size());
  for (auto& f : mesh.faces)
    tris_.push_back({mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]});
  nodes_.reserve(2 * tris_.size() / 4 + 2);
  root_ = build(0, static_cast<int>(tris_.size()));
}

int TriangleBvh::build(int begin, int end) {
  Node node;
  node.begin = begin;
  node.end = end;
  for (int i = begin; i < end; i++)
    for (auto& v : tris_[i]) node.box.expand(v);

  auto index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin > 4) {
    Bounds3 centroid_box;
    for (int i = begin; i < end; i++)
      centroid_box.expand((tris_[i][0] + tris_[i][1] + tris_[i][2]) / 3.0);
    auto axis = longest_axis(centroid_box);
    auto mid = begin + (end - begin) / 2;
    std::nth_element(tris_.begin() + begin, tris_.begin() + mid, tris_.begin() + end,
        [axis](const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b) {
          return axis_value(a[0] + a[1] + a[2], axis) < axis_value(b[0] + b[1] + b[2], axis);
        });
    auto left = build(begin, mid);
    auto right = build(mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
  }
  return index;
}

void TriangleBvh::search(int node_id, Vec3 query, double& best) const {
  auto& node = nodes_[node_id];
  if (distance_sq(node.box, query) > best) return;
  if (node.right < 0) {
    for (int i = node.begin; i < node.end; i++)
      best = std::min(best,
          point_triangle_distance_sq(query, tris_[i][0], tris_[i][1], tris_[i][2]));
    return;
  }
  auto d_left = distance_sq(nodes_[node.left].box, query);
  auto d_right = distance_sq(nodes_[node.right].box, query);
  if (d_left <= d_right) {
    search(node.left, query, best);
    search(node.right, query, best);
  } else {
    search(node.right, query, best);
    search(node.left, query, best);
  }
}

double TriangleBvh::nearest_sq(Vec3 query) const {
  auto best = std::numeric_limits<double>::max();
  search(root_, query, best);
  return best;
}

double TriangleBvh::nearest(Vec3 query) const { return std::sqrt(nearest_sq(query)); }

}  // namespace maskprune
