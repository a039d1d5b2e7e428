#include "maskprune/raster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "maskprune/parallel.hpp"

namespace maskprune {

namespace {

constexpr double prob_ceiling = 1.0 - 0x1.0p-53;  // largest double below 1

// Barycentric weights of p in triangle abc, clipped to the triangle for
// outside points. Degenerate triangles fall back to the nearest edge.
void clipped_barycentric(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double w[3]) {
  auto denom = cross(b - a, c - a);
  if (std::abs(denom) > 1e-30) {
    w[0] = cross(b - p, c - p) / denom;
    w[1] = cross(c - p, a - p) / denom;
    w[2] = cross(a - p, b - p) / denom;
    if (w[0] >= 0 && w[1] >= 0 && w[2] >= 0) return;
    for (int i = 0; i < 3; i++) w[i] = std::clamp(w[i], 0.0, 1.0);
    auto s = w[0] + w[1] + w[2];
    for (int i = 0; i < 3; i++) w[i] /= s;
    return;
  }
  // degenerate: weights from the closest of the three edges
  w[0] = 1.0;
  w[1] = w[2] = 0.0;
  Vec2 verts[3] = {a, b, c};
  double best = std::numeric_limits<double>::max();
  for (int e = 0; e < 3; e++) {
    double t;
    auto q = closest_point_segment(p, verts[e], verts[(e + 1) % 3], t);
    auto d = length_sq(p - q);
    if (d < best) {
      best = d;
      w[0] = w[1] = w[2] = 0;
      w[e] = 1.0 - t;
      w[(e + 1) % 3] = t;
    }
  }
}

struct Slot {
  double depth;
  int32_t face;
  double prob;
};

// Insertion into a (depth, face)-sorted fixed-capacity list.
void insert_topk(std::vector<Slot>& slots, int k, const Slot& s) {
  auto worse = [](const Slot& x, const Slot& y) {
    return x.depth != y.depth ? x.depth > y.depth : x.face > y.face;
  };
  if (static_cast<int>(slots.size()) == k) {
    if (!worse(slots.back(), s)) return;
    slots.pop_back();
  }
  auto pos = slots.end();
  while (pos != slots.begin() && worse(*(pos - 1), s)) --pos;
  slots.insert(pos, s);
}

}  // namespace

const FaceSoftMap* FaceSoftMapSet::find(int face) const {
  auto it = std::lower_bound(maps.begin(), maps.end(), face,
      [](const FaceSoftMap& m, int f) { return m.face < f; });
  return it != maps.end() && it->face == face ? &*it : nullptr;
}

double influence_radius(double sigma, double cutoff) {
  return std::sqrt(sigma * std::log(1.0 / cutoff - 1.0));
}

double soft_coverage(const ScreenTriangle& tri, Vec2 p, double sigma) {
  auto inside = point_in_triangle(p, tri.ndc[0], tri.ndc[1], tri.ndc[2]);
  auto d = triangle_boundary_distance(p, tri.ndc[0], tri.ndc[1], tri.ndc[2]);
  auto arg = d * d / sigma;
  // exp overflow saturates to inf and the quotient to exactly 0, which is
  // the correct limit; the inside branch is clamped below 1 instead.
  auto prob = inside ? 1.0 / (1.0 + std::exp(-arg)) : 1.0 / (1.0 + std::exp(arg));
  return std::min(prob, prob_ceiling);
}

FragmentBuffer rasterize_topk(const std::vector<ScreenTriangle>& triangles, int k, double sigma,
    int height, int width, double influence_cutoff) {
  if (k < 1) throw std::runtime_error("rasterize_topk: k must be >= 1");
  if (!(sigma > 0)) throw std::runtime_error("rasterize_topk: sigma must be positive");
  if (height < 1 || width < 1) throw std::runtime_error("rasterize_topk: empty image");

  FragmentBuffer frag;
  frag.k = k;
  frag.height = height;
  frag.width = width;
  auto total = static_cast<size_t>(height) * width * k;
  frag.face.assign(total, -1);
  frag.depth.assign(total, 0.0);
  frag.prob.assign(total, 0.0);

  auto radius = influence_radius(sigma, influence_cutoff);

  // Bin faces into image rows by their padded NDC bounding box. Lists are
  // built in face order so every pixel scans candidates ascending by index.
  struct Candidate {
    int32_t face;
    int col_min, col_max;
  };
  std::vector<std::vector<Candidate>> row_faces(height);
  for (size_t i = 0; i < triangles.size(); i++) {
    auto& tri = triangles[i];
    if (tri.culled) continue;
    auto x_min = std::min({tri.ndc[0].x, tri.ndc[1].x, tri.ndc[2].x}) - radius;
    auto x_max = std::max({tri.ndc[0].x, tri.ndc[1].x, tri.ndc[2].x}) + radius;
    auto y_min = std::min({tri.ndc[0].y, tri.ndc[1].y, tri.ndc[2].y}) - radius;
    auto y_max = std::max({tri.ndc[0].y, tri.ndc[1].y, tri.ndc[2].y}) + radius;

    // pixel centers covered: x in [x_min, x_max], y in [y_min, y_max]
    auto col_min = static_cast<int>(std::ceil((x_min + 1.0) * width / 2.0 - 0.5));
    auto col_max = static_cast<int>(std::floor((x_max + 1.0) * width / 2.0 - 0.5));
    auto row_min = static_cast<int>(std::ceil((1.0 - y_max) * height / 2.0 - 0.5));
    auto row_max = static_cast<int>(std::floor((1.0 - y_min) * height / 2.0 - 0.5));
    col_min = std::max(col_min, 0);
    col_max = std::min(col_max, width - 1);
    row_min = std::max(row_min, 0);
    row_max = std::min(row_max, height - 1);
    if (col_min > col_max || row_min > row_max) continue;
    for (int r = row_min; r <= row_max; r++)
      row_faces[r].push_back({static_cast<int32_t>(i), col_min, col_max});
  }

  parallel_for(static_cast<size_t>(height), [&](size_t row) {
    auto r = static_cast<int>(row);
    auto y = pixel_center_y(r, height);
    std::vector<Slot> slots;
    slots.reserve(k);
    for (int c = 0; c < width; c++) {
      auto x = pixel_center_x(c, width);
      Vec2 p = {x, y};
      slots.clear();
      for (auto& cand : row_faces[r]) {
        if (c < cand.col_min || c > cand.col_max) continue;
        auto& tri = triangles[cand.face];
        auto inside = point_in_triangle(p, tri.ndc[0], tri.ndc[1], tri.ndc[2]);
        auto d = triangle_boundary_distance(p, tri.ndc[0], tri.ndc[1], tri.ndc[2]);
        auto arg = d * d / sigma;
        auto prob = inside ? 1.0 / (1.0 + std::exp(-arg)) : 1.0 / (1.0 + std::exp(arg));
        if (!inside && prob < influence_cutoff) continue;
        prob = std::min(prob, prob_ceiling);

        double w[3];
        clipped_barycentric(p, tri.ndc[0], tri.ndc[1], tri.ndc[2], w);
        auto depth = w[0] * tri.depth[0] + w[1] * tri.depth[1] + w[2] * tri.depth[2];
        insert_topk(slots, k, {depth, cand.face, prob});
      }
      auto base = frag.slot_index(r, c, 0);
      for (size_t s = 0; s < slots.size(); s++) {
        frag.face[base + s] = slots[s].face;
        frag.depth[base + s] = slots[s].depth;
        frag.prob[base + s] = slots[s].prob;
      }
    }
  });
  return frag;
}

FaceSoftMapSet face_soft_maps(const FragmentBuffer& frag) {
  std::map<int32_t, std::vector<std::pair<int32_t, double>>> grouped;
  auto pixels = static_cast<size_t>(frag.height) * frag.width;
  for (size_t p = 0; p < pixels; p++) {
    for (int s = 0; s < frag.k; s++) {
      auto idx = p * frag.k + s;
      auto face = frag.face[idx];
      if (face < 0) break;
      grouped[face].emplace_back(static_cast<int32_t>(p), frag.prob[idx]);
    }
  }
  FaceSoftMapSet set;
  set.height = frag.height;
  set.width = frag.width;
  set.maps.reserve(grouped.size());
  for (auto& [face, pixels_of_face] : grouped) {
    FaceSoftMap m;
    m.face = face;
    m.pixels = std::move(pixels_of_face);
    set.maps.push_back(std::move(m));
  }
  return set;
}

AlphaMask aggregate_mask(const FaceSoftMapSet& maps, const std::vector<int>& excluded) {
  AlphaMask out(maps.height, maps.width);
  std::vector<double> survive(out.pixel_count(), 1.0);
  std::unordered_set<int> skip(excluded.begin(), excluded.end());
  for (auto& m : maps.maps) {
    if (skip.count(m.face)) continue;
    for (auto& [pixel, prob] : m.pixels) survive[pixel] *= 1.0 - prob;
  }
  for (size_t i = 0; i < survive.size(); i++) out.values[i] = 1.0 - survive[i];
  return out;
}

}  // namespace maskprune
