#include <doctest.h>

#include <algorithm>
#include <set>

#include "maskprune/metrics.hpp"
#include "maskprune/prune.hpp"
#include "maskprune/scenes.hpp"
#include "test_util.hpp"

using namespace maskprune;
using namespace maskprune::testing;

namespace {

FaceSoftMapSet two_pixel_maps(double p1, double p2) {
  FaceSoftMapSet maps;
  maps.height = 1;
  maps.width = 2;
  maps.maps.push_back({0, {{0, p1}, {1, p2}}});
  return maps;
}

}  // namespace

TEST_CASE("face_iou_scores evaluates the two-pixel instance by hand") {
  auto maps = two_pixel_maps(0.2, 0.8);
  AlphaMask gt(1, 2);
  gt.values = {1.0, 0.0};
  auto table = face_iou_scores(maps, gt);
  REQUIRE(table.entries.size() == 1);
  CHECK(table.entries[0].gamma == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(table.entries[0].big_gamma == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(table.entries[0].score == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("face_iou_scores degenerate overlaps") {
  SUBCASE("a map identical to the mask scores 1") {
    auto maps = two_pixel_maps(0.3, 0.7);
    AlphaMask gt(1, 2);
    gt.values = {0.3, 0.7};
    auto table = face_iou_scores(maps, gt);
    CHECK(table.entries[0].score == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("disjoint supports score 0") {
    FaceSoftMapSet maps;
    maps.height = 1;
    maps.width = 4;
    maps.maps.push_back({2, {{0, 0.9}, {1, 0.9}}});
    AlphaMask gt(1, 4);
    gt.values = {0.0, 0.0, 1.0, 1.0};
    auto table = face_iou_scores(maps, gt);
    CHECK(table.entries[0].gamma == 0.0);
    CHECK(table.entries[0].score == 0.0);
    CHECK(table.entries[0].big_gamma > 0.0);
  }
  SUBCASE("dimension mismatch throws") {
    auto maps = two_pixel_maps(0.2, 0.8);
    CHECK_THROWS_AS(face_iou_scores(maps, AlphaMask(2, 2)), std::runtime_error);
  }
}

TEST_CASE("quantile_threshold is the linear-interpolation quantile") {
  std::vector<double> scores = {0.4, 0.1, 0.3, 0.2};  // unsorted on purpose
  CHECK(quantile_threshold(scores, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(quantile_threshold(scores, 0.0) == 0.1);
  CHECK(quantile_threshold(scores, 1.0) == 0.4);
  CHECK(quantile_threshold({0.7}, 0.3) == 0.7);
  CHECK_THROWS_AS(quantile_threshold({}, 0.5), std::runtime_error);
  CHECK_THROWS_AS(quantile_threshold(scores, -0.1), std::runtime_error);
  CHECK_THROWS_AS(quantile_threshold(scores, 1.1), std::runtime_error);
}

TEST_CASE("pruning uses a strict inequality") {
  IoUScoreTable table;
  for (int i = 0; i < 6; i++) table.entries.push_back({i, 1, 2, 0.1 * (i + 1)});

  SUBCASE("tau 0 never prunes") {
    auto d = decide_prune(table, 0.0, 6);
    CHECK(d.pruned.empty());
    CHECK(d.kept.size() == 6);
  }
  SUBCASE("constant scores never prune at any tau") {
    IoUScoreTable flat;
    for (int i = 0; i < 5; i++) flat.entries.push_back({i, 1, 2, 0.5});
    for (double tau : {0.0, 0.3, 0.7, 1.0}) CHECK(decide_prune(flat, tau, 5).pruned.empty());
  }
  SUBCASE("off-screen faces are reported and exempt") {
    auto d = decide_prune(table, 0.5, 10);
    CHECK(d.off_screen == std::vector<int>{6, 7, 8, 9});
    for (auto f : d.pruned) CHECK(f < 6);
  }
}

TEST_CASE("prune monotonicity in tau") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; trial++) {
    IoUScoreTable table;
    auto n = 1 + static_cast<int>(uniform(rng) * 60);
    for (int i = 0; i < n; i++) {
      auto s = uniform(rng) < 0.2 ? 0.0 : uniform(rng);
      table.entries.push_back({i, s, 1.0, s});
    }
    std::vector<int> previous;
    for (double tau = 0.0; tau <= 1.0 + 1e-12; tau += 0.05) {
      auto d = decide_prune(table, std::min(tau, 1.0), n);
      std::set<int> current(d.pruned.begin(), d.pruned.end());
      for (auto f : previous) CHECK(current.count(f) == 1);
      previous = d.pruned;
    }
  }
}

TEST_CASE("self-consistency: a mesh scored against its own silhouette keeps all faces") {
  auto mesh = make_icosphere(1);
  CameraPose pose;
  pose.height = pose.width = 96;
  auto frag = rasterize_topk(project(mesh, pose), 30, 5e-7, 96, 96);
  auto maps = face_soft_maps(frag);
  auto own_mask = binarize(aggregate_mask(maps), 0.5);
  auto table = face_iou_scores(maps, own_mask);
  auto [decision, refined] = prune_faces(mesh, table, 0.0);
  CHECK(decision.pruned.empty());
  CHECK(refined.face_count() == mesh.face_count());
}

TEST_CASE("sparse scoring equals the dense full-domain sums") {
  auto mesh = normalize_unit(make_icosphere(2));
  auto torus = make_torus(0.32, 0.18, 48, 24);
  CameraPose pose;
  pose.elevation_deg = 0;
  pose.height = pose.width = 96;
  auto gt = render_gt_mask(torus, pose);
  auto frag = rasterize_topk(project(mesh, pose), 30, 5e-7, 96, 96);
  auto maps = face_soft_maps(frag);
  auto table = face_iou_scores(maps, gt);

  // dense oracle: expand each sparse map to the full pixel grid and take
  // min/max sums literally
  for (size_t i = 0; i < table.entries.size(); i += 17) {
    auto& entry = table.entries[i];
    auto* map = maps.find(entry.face);
    REQUIRE(map != nullptr);
    std::vector<double> dense(gt.values.size(), 0.0);
    for (auto& [pixel, prob] : map->pixels) dense[pixel] = prob;
    double gamma = 0, big_gamma = 0;
    for (size_t p = 0; p < dense.size(); p++) {
      gamma += std::min(dense[p], gt.values[p]);
      big_gamma += std::max(dense[p], gt.values[p]);
    }
    CHECK(entry.gamma == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(entry.big_gamma == doctest::Approx(big_gamma).epsilon(1e-12));
  }
}

TEST_CASE("score masses are well formed on a real scene") {
  auto mesh = normalize_unit(make_icosphere(2));
  auto torus = make_torus(0.32, 0.18, 48, 24);
  CameraPose pose;
  pose.elevation_deg = 0;
  pose.height = pose.width = 128;
  auto frag = rasterize_topk(project(mesh, pose), 30, 5e-7, 128, 128);
  auto table = face_iou_scores(face_soft_maps(frag), render_gt_mask(torus, pose));
  REQUIRE_FALSE(table.entries.empty());
  for (auto& e : table.entries) {
    CHECK(e.gamma >= 0.0);
    CHECK(e.gamma <= e.big_gamma);
    CHECK(e.big_gamma > 0.0);
    CHECK(e.score >= 0.0);
    CHECK(e.score <= 1.0);
  }
}

TEST_CASE("pruning toward a mask inside the silhouette never hurts the hard IoU") {
  // gt strictly inside the baseline silhouette: small torus vs unit sphere
  auto mesh = normalize_unit(make_icosphere(3));
  auto torus = make_torus(0.30, 0.10, 48, 24);
  CameraPose pose;
  pose.elevation_deg = 0;
  pose.height = pose.width = 160;
  auto gt = render_gt_mask(torus, pose);

  auto frag = rasterize_topk(project(mesh, pose), 30, 5e-7, 160, 160);
  auto maps = face_soft_maps(frag);
  auto table = face_iou_scores(maps, gt);
  auto baseline = aggregate_mask(maps);

  // confirm the strict-subset premise before using the invariant
  auto hard_baseline = binarize(baseline, 0.5);
  for (size_t i = 0; i < gt.values.size(); i++)
    if (gt.values[i] > 0.5) REQUIRE(hard_baseline.values[i] == 1.0);

  auto iou_before = iou_2d(baseline, gt, 0.5);
  for (double tau : {0.0, 0.2, 0.5, 0.8}) {
    auto decision = decide_prune(table, tau, mesh.face_count());
    auto iou_after = iou_2d(aggregate_mask(maps, decision.pruned), gt, 0.5);
    CHECK(iou_after >= iou_before);
  }
}

TEST_CASE("prune_faces removes exactly the flagged faces") {
  auto mesh = make_icosphere(0);
  IoUScoreTable table;
  for (int i = 0; i < mesh.face_count(); i++)
    table.entries.push_back({i, 0, 1, i < 3 ? 0.0 : 0.9});
  auto [decision, refined] = prune_faces(mesh, table, 0.5);
  CHECK(decision.pruned == std::vector<int>{0, 1, 2});
  CHECK(refined.face_count() == mesh.face_count() - 3);
  CHECK(refined.vertex_count() == mesh.vertex_count());
}

TEST_CASE("multi-view refinement modes obey their set algebra") {
  auto mesh = normalize_unit(make_icosphere(2));
  auto torus = make_torus(0.32, 0.18, 48, 24);

  std::vector<ViewObservation> views;
  for (double az : {0.0, 40.0, 90.0}) {
    CameraPose pose;
    pose.azimuth_deg = az;
    pose.elevation_deg = 0;
    pose.height = pose.width = 128;
    views.push_back({pose, render_gt_mask(torus, pose)});
  }

  auto per_view = refine_multi_view(mesh, views, 0.15, MultiViewMode::per_view);
  auto with_union = refine_multi_view(mesh, views, 0.15, MultiViewMode::set_union);
  auto with_inter = refine_multi_view(mesh, views, 0.15, MultiViewMode::set_intersection);

  REQUIRE(per_view.decisions.size() == 3);
  // decisions are independent of the mode
  for (size_t v = 0; v < 3; v++) {
    CHECK(per_view.decisions[v].pruned == with_union.decisions[v].pruned);
    CHECK(per_view.decisions[v].pruned == with_inter.decisions[v].pruned);
  }

  std::set<int> union_set(with_union.removed.begin(), with_union.removed.end());
  std::set<int> inter_set(with_inter.removed.begin(), with_inter.removed.end());
  size_t union_expected = 0;
  std::set<int> all_pruned;
  for (auto& d : per_view.decisions)
    for (auto f : d.pruned) all_pruned.insert(f);
  union_expected = all_pruned.size();

  CHECK(union_set == all_pruned);
  CHECK(union_set.size() == union_expected);
  for (auto f : inter_set) CHECK(union_set.count(f) == 1);

  // intersection-removed faces are pruned in every view where they appear
  for (auto f : inter_set) {
    for (auto& d : per_view.decisions) {
      bool visible = !std::binary_search(d.off_screen.begin(), d.off_screen.end(), f);
      if (visible)
        CHECK(std::find(d.pruned.begin(), d.pruned.end(), f) != d.pruned.end());
    }
  }

  SUBCASE("a single view reduces to prune_faces") {
    auto single = refine_multi_view(mesh, {views[0]}, 0.15, MultiViewMode::per_view);
    auto frag = rasterize_topk(project(mesh, views[0].pose), 30, 5e-7, 128, 128);
    auto table = face_iou_scores(face_soft_maps(frag), views[0].mask);
    auto [decision, refined] = prune_faces(mesh, table, 0.15);
    CHECK(single.decisions[0].pruned == decision.pruned);
    CHECK(single.refined.faces == refined.faces);
  }
}

TEST_CASE("multi-view mode parsing") {
  CHECK(parse_multi_view_mode("per-view") == MultiViewMode::per_view);
  CHECK(parse_multi_view_mode("union") == MultiViewMode::set_union);
  CHECK(parse_multi_view_mode("intersection") == MultiViewMode::set_intersection);
  CHECK_THROWS_AS(parse_multi_view_mode("bogus"), std::runtime_error);
  CHECK_THROWS_AS(refine_multi_view(TriangleMesh{}, {}, 0.05), std::runtime_error);
}
