#include "maskprune/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "maskprune/parallel.hpp"
#include "maskprune/spatial.hpp"

namespace maskprune {

double iou_2d(const AlphaMask& pred, const AlphaMask& gt, double bin_threshold) {
  if (pred.height != gt.height || pred.width != gt.width)
    throw std::runtime_error("iou_2d: mask dimensions differ");
  long intersection = 0, un = 0;
  for (size_t i = 0; i < pred.values.size(); i++) {
    bool a = pred.values[i] >= bin_threshold;
    bool b = gt.values[i] >= bin_threshold;
    intersection += a && b;
    un += a || b;
  }
  return un == 0 ? 1.0 : static_cast<double>(intersection) / static_cast<double>(un);
}

namespace {

// Per-query distances land in a fixed-order vector so the reduction does not
// depend on the thread count.
std::vector<double> nearest_all_sq(const std::vector<Vec3>& queries, const PointKdTree& tree) {
  std::vector<double> d(queries.size());
  parallel_for(queries.size(), [&](size_t i) { d[i] = tree.nearest_sq(queries[i]); });
  return d;
}

double mean(const std::vector<double>& values) {
  double total = 0;
  for (auto v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace

double chamfer(const PointCloud& a, const PointCloud& b) {
  if (a.points.empty() || b.points.empty())
    throw std::runtime_error("chamfer: point clouds must be non-empty");
  PointKdTree tree_a(a.points), tree_b(b.points);
  return mean(nearest_all_sq(a.points, tree_b)) + mean(nearest_all_sq(b.points, tree_a));
}

double f_score(const PointCloud& a, const PointCloud& b, double sq_dist_threshold) {
  if (a.points.empty() || b.points.empty())
    throw std::runtime_error("f_score: point clouds must be non-empty");
  if (!(sq_dist_threshold > 0)) throw std::runtime_error("f_score: threshold must be positive");

  PointKdTree tree_a(a.points), tree_b(b.points);
  auto fraction_within = [&](const std::vector<Vec3>& pts, const PointKdTree& tree) {
    auto d = nearest_all_sq(pts, tree);
    long hits = 0;
    for (auto v : d) hits += v < sq_dist_threshold;
    return static_cast<double>(hits) / static_cast<double>(pts.size());
  };
  auto precision = fraction_within(a.points, tree_b);
  auto recall = fraction_within(b.points, tree_a);
  if (precision + recall == 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall) * 100.0;
}

double metro(const TriangleMesh& mesh_a, const TriangleMesh& mesh_b, int n, uint64_t seed) {
  auto samples_a = sample_surface(mesh_a, n, seed);
  auto samples_b = sample_surface(mesh_b, n, seed + 1);
  TriangleBvh bvh_a(mesh_a), bvh_b(mesh_b);

  auto directed = [](const std::vector<Vec3>& pts, const TriangleBvh& surface) {
    std::vector<double> d(pts.size());
    parallel_for(pts.size(), [&](size_t i) { d[i] = surface.nearest(pts[i]); });
    return mean(d);
  };
  return 0.5 * (directed(samples_a.points, bvh_b) + directed(samples_b.points, bvh_a));
}

}  // namespace maskprune
