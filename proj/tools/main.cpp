#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "maskprune/pipeline.hpp"

namespace {

using maskprune::RunConfig;

void add_pose_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--azimuth", config.azimuth, "Camera azimuth in degrees");
  cmd->add_option("--elevation", config.elevation, "Camera elevation in degrees");
  cmd->add_option("--distance", config.distance, "Camera distance in world units");
  cmd->add_option("--fov", config.fov_y, "Vertical field of view in degrees");
  cmd->add_option("--size", config.image_size, "Square image size in pixels");
}

void add_raster_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--k", config.k, "Fragments kept per pixel");
  cmd->add_option("--sigma", config.sigma, "Sigmoid sharpness (squared NDC units)");
}

void add_common_options(CLI::App* cmd, RunConfig& config, std::string& config_path) {
  cmd->add_option("--seed", config.seed, "RNG seed for sampling");
  cmd->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  cmd->add_option("--config", config_path,
      "key=value file applied under the flags (flags win)");
}

// The config file must be layered in before CLI11 assigns the flags, so its
// path is picked out of argv up front.
std::string scan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; i++) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mask-guided face pruning for triangle meshes"};
  app.require_subcommand(1);

  RunConfig config;
  std::string config_path = scan_config_path(argc, argv);

  auto* refine = app.add_subcommand("refine", "Prune faces against ground-truth masks");
  refine->add_option("--mesh", config.mesh_path, "Input OBJ mesh")->required();
  refine->add_option("--mask", config.mask_path, "Ground-truth mask PNG (single view)");
  refine->add_option("--views", config.views_path, "View manifest JSON (multi view)");
  refine->add_option("--tau", config.tau, "Prune quantile in [0,1]");
  refine->add_option("--mode", config.mode, "per-view | union | intersection");
  refine->add_option("--bin-threshold", config.bin_threshold, "Binarization level");
  refine->add_flag("--luma", config.luma, "Accept color masks via luma");
  refine->add_option("--out", config.out_path, "Output directory")->required();
  add_pose_options(refine, config);
  add_raster_options(refine, config);
  add_common_options(refine, config, config_path);

  auto* render = app.add_subcommand("render", "Render a silhouette mask");
  render->add_option("--mesh", config.mesh_path, "Input OBJ mesh")->required();
  render->add_flag("--hard", config.hard, "Hard binary coverage instead of soft");
  render->add_option("--out", config.out_path, "Output PNG path")->required();
  add_pose_options(render, config);
  add_raster_options(render, config);
  add_common_options(render, config, config_path);

  auto* eval = app.add_subcommand("eval", "2D/3D metrics between two meshes");
  eval->add_option("--mesh", config.mesh_path, "Predicted OBJ mesh")->required();
  eval->add_option("--ref", config.ref_path, "Reference OBJ mesh")->required();
  eval->add_option("--views", config.views_path, "View manifest JSON (poses)");
  eval->add_option("--n-views", config.n_views, "Turntable view count");
  eval->add_option("--samples", config.samples, "Surface samples for 3D metrics");
  eval->add_option("--f-threshold", config.f_threshold, "F-score squared-distance bound");
  eval->add_option("--bin-threshold", config.bin_threshold, "Binarization level");
  eval->add_option("--out", config.out_path, "Output directory")->required();
  add_pose_options(eval, config);
  add_common_options(eval, config, config_path);

  auto* sweep = app.add_subcommand("sweep", "Tau x viewpoint sweep");
  sweep->add_option("--mesh", config.mesh_path, "Input OBJ mesh")->required();
  sweep->add_option("--mask", config.mask_path, "Ground-truth mask PNG (single view)");
  sweep->add_option("--views", config.views_path, "View manifest JSON");
  sweep->add_option("--taus", config.taus, "Tau grid")->delimiter(',');
  sweep->add_option("--ref", config.ref_path, "Reference mesh for chamfer columns");
  sweep->add_option("--samples", config.samples, "Surface samples for chamfer");
  sweep->add_option("--bin-threshold", config.bin_threshold, "Binarization level");
  sweep->add_flag("--luma", config.luma, "Accept color masks via luma");
  sweep->add_option("--out", config.out_path, "Output directory")->required();
  add_pose_options(sweep, config);
  add_raster_options(sweep, config);
  add_common_options(sweep, config, config_path);

  auto* scenes = app.add_subcommand("scenes", "Synthetic scene tools");
  scenes->require_subcommand(1);
  auto* generate = scenes->add_subcommand("generate", "Write mesh + masks + manifest");
  std::string kind = "torus";
  generate->add_option("--kind", kind,
      "icosphere | torus | plate_with_holes | box_grid_chairlike");
  generate->add_option("--subdivisions", config.scene.subdivisions, "Icosphere subdivisions");
  generate->add_option("--major-radius", config.scene.major_radius, "Torus ring radius");
  generate->add_option("--minor-radius", config.scene.minor_radius, "Torus tube radius");
  generate->add_option("--segments-u", config.scene.segments_u, "Torus ring segments");
  generate->add_option("--segments-v", config.scene.segments_v, "Torus tube segments");
  generate->add_option("--holes", config.scene.hole_count, "Plate hole count");
  generate->add_option("--hole-radius", config.scene.hole_radius, "Plate hole radius");
  generate->add_option("--grid-x", config.scene.grid_x, "Plate grid resolution (x)");
  generate->add_option("--grid-y", config.scene.grid_y, "Plate grid resolution (y)");
  generate->add_option("--n-views", config.n_views, "Turntable view count");
  generate->add_flag("--normalize", config.normalize,
      "Center the mesh and scale its longest axis to 1 before writing");
  generate->add_option("--out", config.out_path, "Output directory")->required();
  add_pose_options(generate, config);
  add_common_options(generate, config, config_path);

  try {
    if (!config_path.empty()) maskprune::apply_config_file(config, config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*refine) maskprune::cmd_refine(config);
    else if (*render) maskprune::cmd_render(config);
    else if (*eval) maskprune::cmd_eval(config);
    else if (*sweep) maskprune::cmd_sweep(config);
    else if (*generate) {
      config.scene.kind = maskprune::parse_scene_kind(kind);
      maskprune::cmd_scenes_generate(config);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
