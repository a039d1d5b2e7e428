#include <doctest.h>

#include <cmath>

#include "maskprune/parallel.hpp"
#include "maskprune/raster.hpp"
#include "maskprune/scenes.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace maskprune;
using namespace maskprune::testing;

namespace {

ScreenTriangle screen_tri(Vec2 a, Vec2 b, Vec2 c, double da = 1.0, double db = 1.0,
    double dc = 1.0) {
  ScreenTriangle tri;
  tri.ndc[0] = a;
  tri.ndc[1] = b;
  tri.ndc[2] = c;
  tri.depth[0] = da;
  tri.depth[1] = db;
  tri.depth[2] = dc;
  return tri;
}

}  // namespace

TEST_CASE("coverage is exactly one half on the boundary") {
  // 2x2 image: pixel centers at +-0.5; the edge x=0.5 passes through two of them
  auto tri = screen_tri({0.5, -2.0}, {0.5, 2.0}, {3.0, 0.0});
  CHECK(soft_coverage(tri, {0.5, 0.5}, 5e-7) == 0.5);
  CHECK(soft_coverage(tri, {0.5, -0.5}, 5e-7) == 0.5);

  auto frag = rasterize_topk({tri}, 1, 5e-7, 2, 2);
  CHECK(frag.prob[frag.slot_index(0, 1, 0)] == 0.5);
}

TEST_CASE("coverage saturates inside and stays strictly below one") {
  auto tri = screen_tri({-0.9, -0.9}, {0.9, -0.9}, {0.0, 0.9});
  auto p = soft_coverage(tri, {0.0, -0.5}, 5e-7);  // more than 0.01 from every edge
  CHECK(p > 1.0 - 1e-6);
  CHECK(p < 1.0);
}

TEST_CASE("empty triangle lists produce an empty buffer") {
  auto frag = rasterize_topk({}, 30, 5e-7, 8, 8);
  for (auto f : frag.face) CHECK(f == -1);
  auto maps = face_soft_maps(frag);
  CHECK(maps.maps.empty());
  auto alpha = aggregate_mask(maps);
  for (auto v : alpha.values) CHECK(v == 0.0);
}

TEST_CASE("fragment buffer invariants on a real scene") {
  auto mesh = make_icosphere(1);
  CameraPose pose;
  pose.height = pose.width = 96;
  auto frag = rasterize_topk(project(mesh, pose), 30, 5e-7, 96, 96);

  bool any = false;
  for (int r = 0; r < frag.height; r++) {
    for (int c = 0; c < frag.width; c++) {
      auto n = frag.occupancy(r, c);
      for (int s = 0; s < n; s++) {
        auto idx = frag.slot_index(r, c, s);
        CHECK(frag.prob[idx] > 0.0);
        CHECK(frag.prob[idx] < 1.0);
        if (s > 0) CHECK(frag.depth[idx] >= frag.depth[idx - 1]);
        any = true;
      }
      for (int s = n; s < frag.k; s++) CHECK(frag.face[frag.slot_index(r, c, s)] == -1);
    }
  }
  CHECK(any);
}

TEST_CASE("face_soft_maps regroups fragments by physical face") {
  // one face spread over 5 pixels in mixed slots
  FragmentBuffer frag;
  frag.k = 2;
  frag.height = 2;
  frag.width = 3;
  auto total = static_cast<size_t>(frag.k) * 6;
  frag.face.assign(total, -1);
  frag.depth.assign(total, 0.0);
  frag.prob.assign(total, 0.0);
  auto put = [&](int pixel, int slot, int face, double prob) {
    frag.face[static_cast<size_t>(pixel) * frag.k + slot] = face;
    frag.prob[static_cast<size_t>(pixel) * frag.k + slot] = prob;
    frag.depth[static_cast<size_t>(pixel) * frag.k + slot] = 1.0 + slot;
  };
  put(0, 0, 7, 0.5);
  put(1, 0, 7, 0.6);
  put(2, 0, 3, 0.2);
  put(2, 1, 7, 0.7);
  put(3, 0, 7, 0.8);
  put(4, 0, 7, 0.9);

  auto maps = face_soft_maps(frag);
  REQUIRE(maps.maps.size() == 2);
  CHECK(maps.maps[0].face == 3);  // ascending unique-face order
  CHECK(maps.maps[1].face == 7);
  REQUIRE(maps.find(7) != nullptr);
  CHECK(maps.find(7)->pixels.size() == 5);
  CHECK(maps.find(3)->pixels.size() == 1);
  CHECK(maps.find(5) == nullptr);

  // probabilities are carried over exactly
  CHECK(maps.find(7)->pixels[2].second == 0.7);
}

TEST_CASE("unique faces match the brute-force influence oracle") {
  auto mesh = make_torus(0.35, 0.12, 4, 3);  // 24 faces <= k
  CameraPose pose;
  pose.azimuth_deg = 20;
  pose.elevation_deg = 35;
  pose.height = pose.width = 128;
  auto screen = project(mesh, pose);

  auto frag = rasterize_topk(screen, 30, 5e-7, 128, 128);
  auto maps = face_soft_maps(frag);
  std::vector<int> unique;
  for (auto& m : maps.maps) unique.push_back(m.face);

  auto oracle = oracle_render(screen, 5e-7, 128, 128, 1e-7);
  CHECK(unique == oracle.influencing_faces);
}

TEST_CASE("aggregation identities") {
  FaceSoftMapSet maps;
  maps.height = 1;
  maps.width = 2;
  maps.maps.push_back({4, {{0, 0.5}, {1, 0.25}}});

  SUBCASE("a single face aggregates to its own map") {
    auto alpha = aggregate_mask(maps);
    CHECK(alpha.values[0] == 0.5);
    CHECK(alpha.values[1] == 0.25);
  }
  SUBCASE("two faces at one pixel combine as 1-(1-p)(1-q)") {
    maps.maps.push_back({9, {{0, 0.5}}});
    auto alpha = aggregate_mask(maps);
    CHECK(alpha.values[0] == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("excluding every face zeroes the mask") {
    auto alpha = aggregate_mask(maps, {4});
    CHECK(alpha.values[0] == 0.0);
    CHECK(alpha.values[1] == 0.0);
  }
}

TEST_CASE("aggregation is monotone in the excluded set and bounds each map") {
  auto mesh = make_icosphere(1);
  CameraPose pose;
  pose.height = pose.width = 64;
  auto frag = rasterize_topk(project(mesh, pose), 30, 5e-7, 64, 64);
  auto maps = face_soft_maps(frag);
  REQUIRE(maps.maps.size() > 10);

  std::vector<int> small_excl, large_excl;
  for (size_t i = 0; i < maps.maps.size(); i += 7) small_excl.push_back(maps.maps[i].face);
  large_excl = small_excl;
  for (size_t i = 3; i < maps.maps.size(); i += 5) large_excl.push_back(maps.maps[i].face);

  auto full = aggregate_mask(maps);
  auto smaller = aggregate_mask(maps, small_excl);
  auto larger = aggregate_mask(maps, large_excl);
  for (size_t i = 0; i < full.values.size(); i++) {
    CHECK(larger.values[i] <= smaller.values[i] + 1e-15);
    CHECK(smaller.values[i] <= full.values[i] + 1e-15);
  }

  // pixel coverage bound: alpha >= every individual map
  for (auto& m : maps.maps)
    for (auto& [pixel, prob] : m.pixels) CHECK(full.values[pixel] >= prob - 1e-15);
}

TEST_CASE("rasterization does not depend on the thread count") {
  auto mesh = make_icosphere(2);
  CameraPose pose;
  pose.azimuth_deg = 40;
  pose.height = pose.width = 160;
  auto screen = project(mesh, pose);

  set_thread_count(1);
  auto sequential = rasterize_topk(screen, 30, 5e-7, 160, 160);
  set_thread_count(8);
  auto parallel = rasterize_topk(screen, 30, 5e-7, 160, 160);
  set_thread_count(0);

  CHECK(sequential.face == parallel.face);
  CHECK(sequential.depth == parallel.depth);
  CHECK(sequential.prob == parallel.prob);
}

TEST_CASE("top-k pipeline matches the dense oracle on small meshes") {
  auto mesh = make_icosphere(0);  // 20 faces <= k
  CameraPose pose;
  pose.azimuth_deg = 15;
  pose.height = pose.width = 64;
  auto screen = project(mesh, pose);

  auto frag = rasterize_topk(screen, 30, 5e-7, 64, 64);
  auto alpha = aggregate_mask(face_soft_maps(frag));
  auto oracle = oracle_render(screen, 5e-7, 64, 64, 1e-7);
  for (size_t i = 0; i < alpha.values.size(); i++)
    CHECK(std::abs(alpha.values[i] - oracle.alpha.values[i]) <= 1e-6);
}

TEST_CASE("small-k selection equals truncating an unbounded buffer") {
  // deep random soup forces slot eviction at k=3
  std::mt19937_64 rng(33);
  TriangleMesh soup;
  for (int f = 0; f < 60; f++) {
    auto base = soup.vertex_count();
    auto cx = uniform(rng) * 0.8 - 0.4, cy = uniform(rng) * 0.8 - 0.4;
    auto cz = uniform(rng) * 0.8 - 0.4;
    for (int k = 0; k < 3; k++)
      soup.vertices.push_back({cx + uniform(rng) * 0.4 - 0.2, cy + uniform(rng) * 0.4 - 0.2,
          cz + uniform(rng) * 0.4 - 0.2});
    soup.faces.push_back({base, base + 1, base + 2});
  }
  CameraPose pose;
  pose.height = pose.width = 64;
  auto screen = project(soup, pose);

  auto full = rasterize_topk(screen, 100, 5e-7, 64, 64);  // never evicts
  auto small = rasterize_topk(screen, 3, 5e-7, 64, 64);
  for (int r = 0; r < 64; r++) {
    for (int c = 0; c < 64; c++) {
      auto expected = std::min(full.occupancy(r, c), 3);
      REQUIRE(small.occupancy(r, c) == expected);
      for (int s = 0; s < expected; s++) {
        auto a = full.slot_index(r, c, s), b = small.slot_index(r, c, s);
        CHECK(full.face[a] == small.face[b]);
        CHECK(full.depth[a] == small.depth[b]);
        CHECK(full.prob[a] == small.prob[b]);
      }
    }
  }
}

TEST_CASE("rasterize_topk validates arguments") {
  CHECK_THROWS_AS(rasterize_topk({}, 0, 5e-7, 4, 4), std::runtime_error);
  CHECK_THROWS_AS(rasterize_topk({}, 1, 0.0, 4, 4), std::runtime_error);
  CHECK_THROWS_AS(rasterize_topk({}, 1, 5e-7, 0, 4), std::runtime_error);
}
