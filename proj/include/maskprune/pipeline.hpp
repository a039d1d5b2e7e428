#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskprune/camera.hpp"
#include "maskprune/scenes.hpp"

namespace maskprune {

// Experiment knobs shared by the CLI commands. Paper-protocol defaults:
// K=30, sigma=5e-7, 224x224 images, camera distance 2.732 at 30 degrees
// elevation, tau=0.05, 24 turntable views.
struct RunConfig {
  std::string mesh_path;
  std::string mask_path;
  std::string views_path;
  std::string ref_path;
  std::string out_path;

  double azimuth = 0.0;
  double elevation = 30.0;
  double distance = 2.732;
  double fov_y = 30.0;
  int image_size = 224;

  double tau = 0.05;
  double sigma = 5e-7;
  int k = 30;
  std::string mode = "per-view";

  uint64_t seed = 0;
  int samples = 10000;
  double f_threshold = 0.001;  // squared-distance hit bound
  double bin_threshold = 0.5;
  std::vector<double> taus = {0.01, 0.03, 0.05, 0.1, 0.15};
  int n_views = 24;
  int threads = 0;
  bool luma = false;
  bool hard = false;
  bool normalize = false;

  SceneSpec scene;
};

CameraPose pose_from_config(const RunConfig& config);

// Applies a key=value config file ('#' comments, blank lines allowed) on top
// of the current values. Command-line flags are applied after this, so the
// precedence is flags > file > built-in defaults. Unknown keys are errors.
void apply_config_file(RunConfig& config, const std::string& path);

// View manifest: JSON file listing poses and (optionally) mask image paths
// relative to the manifest location.
struct ViewSpec {
  CameraPose pose;
  std::string mask_path;  // may be empty (pose-only manifests)
};

std::vector<ViewSpec> load_view_manifest(const std::string& path);
void save_view_manifest(const std::string& path, const std::vector<ViewSpec>& views);

// Commands. All throw on error; outputs land under config.out_path and are
// complete iff status.txt reads "ok". Outputs are byte-deterministic for a
// fixed config and seed.
void cmd_refine(const RunConfig& config);
void cmd_render(const RunConfig& config);
void cmd_eval(const RunConfig& config);
void cmd_sweep(const RunConfig& config);
void cmd_scenes_generate(const RunConfig& config);

}  // namespace maskprune
