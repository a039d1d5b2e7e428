#pragma once

#include <vector>

#include "maskprune/geometry.hpp"
#include "maskprune/mesh.hpp"

namespace maskprune {

// Exact nearest-neighbor queries over a fixed point set. Median-split
// kd-tree; results match a brute-force scan on the squared distance value.
class PointKdTree {
 public:
  explicit PointKdTree(const std::vector<Vec3>& points);

  double nearest_sq(Vec3 query) const;
  size_t size() const { return points_.size(); }

 private:
  struct Node {
    Bounds3 box;
    int begin = 0, end = 0;   // leaf range when right < 0
    int left = -1, right = -1;
  };

  int build(int begin, int end);
  void search(int node, Vec3 query, double& best) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Exact point-to-surface queries over a triangle set (BVH over centroids,
// branch-and-bound search with exact point-triangle distances).
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriangleMesh& mesh);

  double nearest_sq(Vec3 query) const;
  double nearest(Vec3 query) const;

 private:
  struct Node {
    Bounds3 box;
    int begin = 0, end = 0;
    int left = -1, right = -1;
  };

  int build(int begin, int end);
  void search(int node, Vec3 query, double& best) const;

  std::vector<std::array<Vec3, 3>> tris_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace maskprune
