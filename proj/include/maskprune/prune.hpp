#pragma once

#include <string>
#include <utility>
#include <vector>

#include "maskprune/camera.hpp"
#include "maskprune/image.hpp"
#include "maskprune/mesh.hpp"
#include "maskprune/raster.hpp"

namespace maskprune {

// Per-face soft-IoU masses against the ground-truth mask:
//   gamma = sum_p min(D[p], alpha[p]),  Gamma = sum_p max(D[p], alpha[p]),
// summed over the full pixel domain (the sparse map reads 0 off-support).
struct FaceScore {
  int face = -1;
  double gamma = 0.0;
  double big_gamma = 0.0;
  double score = 0.0;  // gamma / Gamma, 0 when Gamma is 0
};

struct IoUScoreTable {
  std::vector<FaceScore> entries;  // ascending face index, one per unique face

  std::vector<double> scores() const;
};

IoUScoreTable face_iou_scores(const FaceSoftMapSet& maps, const AlphaMask& gt);

// Linear-interpolation quantile of the empirical distribution: with sorted
// scores s and rank h = (n-1)*tau, returns s[floor h] interpolated toward
// s[ceil h]. Throws on an empty list or tau outside [0,1].
double quantile_threshold(const std::vector<double>& scores, double tau);

struct PruneDecision {
  double tau = 0.0;
  double threshold = 0.0;
  std::vector<int> pruned;      // faces scoring strictly below threshold, ascending
  std::vector<int> kept;        // remaining scored faces, ascending
  std::vector<int> off_screen;  // mesh faces absent from the unique-face set
};

// Threshold-and-split on an existing score table. total_faces is the face
// count of the source mesh, used to report the off-screen set.
PruneDecision decide_prune(const IoUScoreTable& table, double tau, int total_faces);

// Faces scoring strictly below the tau-quantile are removed. Faces that
// never rendered (off-screen for this view) are exempt.
std::pair<PruneDecision, TriangleMesh> prune_faces(const TriangleMesh& mesh,
    const IoUScoreTable& table, double tau);

enum class MultiViewMode { per_view, set_union, set_intersection };

MultiViewMode parse_multi_view_mode(const std::string& name);

struct ViewObservation {
  CameraPose pose;
  AlphaMask mask;
};

struct MultiViewResult {
  TriangleMesh refined;
  std::vector<int> removed;             // faces removed from the mesh, ascending
  std::vector<PruneDecision> decisions; // one per view, scored independently
};

// Scores every view independently on the input mesh (the per-view decisions
// are identical across modes). The refined mesh removes, depending on mode:
// per_view / set_union the union of the per-view prune sets, and
// set_intersection the faces pruned in every view where they are visible.
// In per_view mode the per-view decisions are the primary artifact; the
// union-pruned mesh is the mesh-level summary.
MultiViewResult refine_multi_view(const TriangleMesh& mesh,
    const std::vector<ViewObservation>& views, double tau,
    MultiViewMode mode = MultiViewMode::per_view, int k = 30, double sigma = 5e-7);

}  // namespace maskprune
