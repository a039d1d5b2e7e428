#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "maskprune/camera.hpp"
#include "maskprune/image.hpp"

namespace maskprune {

// Per-pixel fragment tensor of the k depth-nearest influencing faces.
// Slots for a pixel are sorted by increasing depth (ties broken by lower
// face index); unoccupied slots carry face -1 and contribute nothing.
struct FragmentBuffer {
  int k = 0;
  int height = 0;
  int width = 0;
  std::vector<int32_t> face;   // pixel-major: slot s of pixel p at p*k+s
  std::vector<double> depth;
  std::vector<double> prob;    // strictly inside (0,1)

  size_t slot_index(int row, int col, int slot) const {
    return (static_cast<size_t>(row) * width + col) * k + slot;
  }
  int occupancy(int row, int col) const {
    int n = 0;
    while (n < k && face[slot_index(row, col, n)] >= 0) n++;
    return n;
  }
};

// Sparse per-face probability map: pixels the face influences, with the
// exact probabilities stored in the fragment buffer. Pixels absent from the
// map read as 0.
struct FaceSoftMap {
  int face = -1;
  std::vector<std::pair<int32_t, double>> pixels;  // (row*width+col, probability)
};

// The unique faces appearing anywhere in a fragment buffer, ascending by
// face index, each with its soft map.
struct FaceSoftMapSet {
  int height = 0;
  int width = 0;
  std::vector<FaceSoftMap> maps;

  int unique_face_count() const { return static_cast<int>(maps.size()); }
  const FaceSoftMap* find(int face) const;
};

// Screen-space influence range of the sigmoid: beyond this NDC distance an
// outside pixel's probability falls below cutoff.
double influence_radius(double sigma, double cutoff);

// Probability that `tri` covers the NDC point p: sigmoid(s * d^2 / sigma)
// where d is the Euclidean NDC distance from p to the triangle boundary and
// s is +1 inside, -1 outside. Clamped into (0,1) so the downstream product
// aggregation never hits an exact 0 or 1 factor.
double soft_coverage(const ScreenTriangle& tri, Vec2 p, double sigma);

// Forward soft rasterization. For every pixel, the k depth-nearest faces
// whose influence reaches the pixel (probability >= influence_cutoff for
// outside pixels; inside pixels always qualify) fill the slots. Depths are
// interpolated with clipped screen-space barycentrics. Deterministic, and
// independent of the worker thread count.
FragmentBuffer rasterize_topk(const std::vector<ScreenTriangle>& triangles, int k, double sigma,
    int height, int width, double influence_cutoff = 1e-7);

// Regroups fragments by physical face. Probabilities are carried over
// verbatim, never recomputed.
FaceSoftMapSet face_soft_maps(const FragmentBuffer& frag);

// Aggregated silhouette 1 - prod(1 - D_j) over the unique faces not listed
// in excluded. Excluding every face yields the all-zero mask.
AlphaMask aggregate_mask(const FaceSoftMapSet& maps, const std::vector<int>& excluded = {});

}  // namespace maskprune
