#pragma once

#include <cstdint>

#include "maskprune/image.hpp"
#include "maskprune/mesh.hpp"

namespace maskprune {

struct MetricReport {
  double iou2d = 0.0;   // hard 2D IoU in [0,1]
  double chamfer = 0.0; // symmetric mean-squared nearest-neighbor distance (raw)
  double fscore = 0.0;  // percentage in [0,100]
  double metro = 0.0;   // mean surface distance
};

// Binarizes both masks at bin_threshold and returns |A and B| / |A or B|;
// two empty masks count as identical (1).
double iou_2d(const AlphaMask& pred, const AlphaMask& gt, double bin_threshold = 0.5);

// Mean squared nearest-neighbor distance a->b plus the same for b->a.
// Scales as s^2 under uniform scaling. Report tables show this value x1e3.
double chamfer(const PointCloud& a, const PointCloud& b);

// Precision/recall count a point as a hit when its squared nearest-neighbor
// distance is strictly below sq_dist_threshold. Returns 2PR/(P+R) x 100,
// or 0 when P+R is 0.
double f_score(const PointCloud& a, const PointCloud& b, double sq_dist_threshold = 0.001);

// Surface-to-surface distance: n points sampled on each mesh, exact
// point-to-triangle distance to the other surface, mean of the two directed
// means. Unlike chamfer this measures against the continuous surface.
double metro(const TriangleMesh& mesh_a, const TriangleMesh& mesh_b, int n = 10000,
    uint64_t seed = 0);

}  // namespace maskprune
