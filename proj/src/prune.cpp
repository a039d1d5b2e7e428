#include "maskprune/prune.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "maskprune/parallel.hpp"

namespace maskprune {

std::vector<double> IoUScoreTable::scores() const {
  std::vector<double> s;
  s.reserve(entries.size());
  for (auto& e : entries) s.push_back(e.score);
  return s;
}

IoUScoreTable face_iou_scores(const FaceSoftMapSet& maps, const AlphaMask& gt) {
  if (maps.height != gt.height || maps.width != gt.width)
    throw std::runtime_error("face_iou_scores: mask dimensions do not match the rendering");

  // Off-support pixels contribute min(0, a) = 0 and max(0, a) = a, so the
  // full-domain sums reduce to the sparse support plus the mask total.
  auto alpha_total = sum(gt);

  IoUScoreTable table;
  table.entries.resize(maps.maps.size());
  parallel_for(maps.maps.size(), [&](size_t i) {
    auto& m = maps.maps[i];
    double gamma = 0, gamma_corr = 0;
    for (auto& [pixel, prob] : m.pixels) {
      auto a = gt.values[pixel];
      gamma += std::min(prob, a);
      gamma_corr += std::max(prob, a) - a;
    }
    auto& e = table.entries[i];
    e.face = m.face;
    e.gamma = gamma;
    e.big_gamma = alpha_total + gamma_corr;
    e.score = e.big_gamma > 0 ? e.gamma / e.big_gamma : 0.0;
  });
  return table;
}

double quantile_threshold(const std::vector<double>& scores, double tau) {
  if (scores.empty()) throw std::runtime_error("quantile_threshold: empty score list");
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::runtime_error("quantile_threshold: tau must be in [0,1]");
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  auto h = (sorted.size() - 1) * tau;
  auto lo = static_cast<size_t>(std::floor(h));
  auto hi = static_cast<size_t>(std::ceil(h));
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

PruneDecision decide_prune(const IoUScoreTable& table, double tau, int total_faces) {
  PruneDecision d;
  d.tau = tau;
  d.threshold = quantile_threshold(table.scores(), tau);

  std::vector<char> seen(total_faces, 0);
  for (auto& e : table.entries) {
    if (e.face >= 0 && e.face < total_faces) seen[e.face] = 1;
    if (e.score < d.threshold) d.pruned.push_back(e.face);
    else d.kept.push_back(e.face);
  }
  for (int f = 0; f < total_faces; f++)
    if (!seen[f]) d.off_screen.push_back(f);
  return d;
}

std::pair<PruneDecision, TriangleMesh> prune_faces(const TriangleMesh& mesh,
    const IoUScoreTable& table, double tau) {
  auto decision = decide_prune(table, tau, mesh.face_count());
  auto refined = remove_faces(mesh, decision.pruned);
  return {std::move(decision), std::move(refined)};
}

MultiViewMode parse_multi_view_mode(const std::string& name) {
  if (name == "per-view") return MultiViewMode::per_view;
  if (name == "union") return MultiViewMode::set_union;
  if (name == "intersection") return MultiViewMode::set_intersection;
  throw std::runtime_error("unknown multi-view mode: " + name);
}

MultiViewResult refine_multi_view(const TriangleMesh& mesh,
    const std::vector<ViewObservation>& views, double tau, MultiViewMode mode, int k,
    double sigma) {
  if (views.empty()) throw std::runtime_error("refine_multi_view: need at least one view");

  MultiViewResult result;
  // visible / pruned tallies per face, for the intersection mode
  std::map<int, std::pair<int, int>> tally;
  for (auto& view : views) {
    auto screen = project(mesh, view.pose);
    auto frag = rasterize_topk(screen, k, sigma, view.pose.height, view.pose.width);
    auto maps = face_soft_maps(frag);
    auto table = face_iou_scores(maps, view.mask);
    auto decision = decide_prune(table, tau, mesh.face_count());
    for (auto f : decision.kept) tally[f].first++;
    for (auto f : decision.pruned) {
      tally[f].first++;
      tally[f].second++;
    }
    result.decisions.push_back(std::move(decision));
  }

  for (auto& [face, counts] : tally) {
    auto [visible, pruned] = counts;
    bool remove = mode == MultiViewMode::set_intersection ? (pruned == visible) : (pruned > 0);
    if (remove && pruned > 0) result.removed.push_back(face);
  }
  result.refined = remove_faces(mesh, result.removed);
  return result;
}

}  // namespace maskprune
