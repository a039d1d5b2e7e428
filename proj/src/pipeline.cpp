#include "maskprune/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "maskprune/metrics.hpp"
#include "maskprune/parallel.hpp"
#include "maskprune/prune.hpp"

namespace maskprune {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

CameraPose pose_from_config(const RunConfig& config) {
  CameraPose pose;
  pose.azimuth_deg = config.azimuth;
  pose.elevation_deg = config.elevation;
  pose.distance = config.distance;
  pose.fov_y_deg = config.fov_y;
  pose.height = config.image_size;
  pose.width = config.image_size;
  return pose;
}

namespace {

constexpr int kRecordVersion = 1;

std::string view_file_name(const char* stem, int view, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03d.%s", stem, view, ext);
  return buf;
}

class RecordWriter {
 public:
  RecordWriter(const fs::path& path, const std::string& kind) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open records file: " + path.string());
    ordered_json header;
    header["format"] = "maskprune.records";
    header["kind"] = kind;
    header["version"] = kRecordVersion;
    out_ << header.dump() << '\n';
  }

  void write(const ordered_json& record) { out_ << record.dump() << '\n'; }

  void close() {
    if (!out_.flush()) throw std::runtime_error("record write failed");
    out_.close();
  }

 private:
  std::ofstream out_;
};

fs::path prepare_out_dir(const RunConfig& config) {
  if (config.out_path.empty()) throw std::runtime_error("missing --out directory");
  fs::path dir(config.out_path);
  fs::create_directories(dir);
  return dir;
}

void write_status_ok(const fs::path& dir) {
  std::ofstream out(dir / "status.txt");
  out << "ok\n";
  if (!out.flush()) throw std::runtime_error("cannot write status file");
}

ordered_json pose_json(const CameraPose& pose) {
  ordered_json j;
  j["azimuth"] = pose.azimuth_deg;
  j["elevation"] = pose.elevation_deg;
  j["distance"] = pose.distance;
  j["fov_y"] = pose.fov_y_deg;
  j["height"] = pose.height;
  j["width"] = pose.width;
  return j;
}

std::vector<ViewSpec> resolve_views(const RunConfig& config, bool masks_required) {
  std::vector<ViewSpec> views;
  if (!config.views_path.empty()) {
    views = load_view_manifest(config.views_path);
  } else {
    views.push_back({pose_from_config(config), config.mask_path});
  }
  if (masks_required)
    for (auto& v : views)
      if (v.mask_path.empty())
        throw std::runtime_error("a ground-truth mask is required for every view "
                                 "(--mask or manifest mask entries)");
  return views;
}

struct ScoredView {
  FaceSoftMapSet maps;
  IoUScoreTable table;
  AlphaMask gt;
  AlphaMask alpha;
};

ScoredView score_view(const TriangleMesh& mesh, const ViewSpec& view, const RunConfig& config) {
  ScoredView sv;
  sv.gt = load_mask(view.mask_path, config.luma);
  auto screen = project(mesh, view.pose);
  auto frag = rasterize_topk(screen, config.k, config.sigma, view.pose.height, view.pose.width);
  sv.maps = face_soft_maps(frag);
  sv.table = face_iou_scores(sv.maps, sv.gt);
  sv.alpha = aggregate_mask(sv.maps);
  return sv;
}

}  // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  std::map<std::string, std::function<void(const std::string&)>> setters;
  auto number = [](double& slot) {
    return [&slot](const std::string& v) { slot = std::stod(v); };
  };
  auto integer = [](int& slot) {
    return [&slot](const std::string& v) { slot = std::stoi(v); };
  };
  auto text = [](std::string& slot) {
    return [&slot](const std::string& v) { slot = v; };
  };
  auto boolean = [](bool& slot) {
    return [&slot](const std::string& v) { slot = v == "1" || v == "true" || v == "on"; };
  };
  setters["mesh"] = text(config.mesh_path);
  setters["mask"] = text(config.mask_path);
  setters["views"] = text(config.views_path);
  setters["ref"] = text(config.ref_path);
  setters["out"] = text(config.out_path);
  setters["azimuth"] = number(config.azimuth);
  setters["elevation"] = number(config.elevation);
  setters["distance"] = number(config.distance);
  setters["fov"] = number(config.fov_y);
  setters["size"] = integer(config.image_size);
  setters["tau"] = number(config.tau);
  setters["sigma"] = number(config.sigma);
  setters["k"] = integer(config.k);
  setters["mode"] = text(config.mode);
  setters["seed"] = [&config](const std::string& v) { config.seed = std::stoull(v); };
  setters["samples"] = integer(config.samples);
  setters["f_threshold"] = number(config.f_threshold);
  setters["bin_threshold"] = number(config.bin_threshold);
  setters["n_views"] = integer(config.n_views);
  setters["threads"] = integer(config.threads);
  setters["luma"] = boolean(config.luma);
  setters["taus"] = [&config](const std::string& v) {
    config.taus.clear();
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) config.taus.push_back(std::stod(item));
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto strip = [](std::string s) {
      auto begin = s.find_first_not_of(" \t\r");
      auto end = s.find_last_not_of(" \t\r");
      return begin == std::string::npos ? std::string{} : s.substr(begin, end - begin + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    auto key = strip(line.substr(0, eq));
    auto value = strip(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" +
                               key + "'");
    try {
      it->second(value);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad value for '" +
                               key + "'");
    }
  }
}

std::vector<ViewSpec> load_view_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open view manifest: " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid view manifest " + path + ": " + e.what());
  }
  if (doc.value("format", "") != "maskprune.views")
    throw std::runtime_error("not a view manifest: " + path);

  auto base = fs::path(path).parent_path();
  std::vector<ViewSpec> views;
  for (auto& item : doc.at("views")) {
    ViewSpec v;
    v.pose.azimuth_deg = item.value("azimuth", 0.0);
    v.pose.elevation_deg = item.value("elevation", 30.0);
    v.pose.distance = item.value("distance", 2.732);
    v.pose.fov_y_deg = item.value("fov_y", 30.0);
    v.pose.height = item.value("height", 224);
    v.pose.width = item.value("width", 224);
    if (item.contains("mask")) v.mask_path = (base / item["mask"].get<std::string>()).string();
    views.push_back(std::move(v));
  }
  if (views.empty()) throw std::runtime_error("view manifest lists no views: " + path);
  return views;
}

void save_view_manifest(const std::string& path, const std::vector<ViewSpec>& views) {
  ordered_json doc;
  doc["format"] = "maskprune.views";
  doc["version"] = kRecordVersion;
  doc["views"] = ordered_json::array();
  auto base = fs::path(path).parent_path();
  for (auto& v : views) {
    auto j = pose_json(v.pose);
    if (!v.mask_path.empty())
      j["mask"] = fs::relative(v.mask_path, base).generic_string();
    doc["views"].push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write view manifest: " + path);
  out << doc.dump(2) << '\n';
  if (!out.flush()) throw std::runtime_error("manifest write failed: " + path);
}

void cmd_refine(const RunConfig& config) {
  set_thread_count(config.threads);
  auto dir = prepare_out_dir(config);
  auto mesh = load_obj(config.mesh_path);
  validate(mesh);
  auto views = resolve_views(config, true);
  auto mode = parse_multi_view_mode(config.mode);

  RecordWriter records(dir / "decisions.jsonl", "refine");

  // Pass 1: score every view independently.
  std::vector<PruneDecision> decisions;
  std::vector<double> iou_before(views.size());
  std::map<int, std::pair<int, int>> tally;  // face -> (visible, pruned) counts
  for (size_t v = 0; v < views.size(); v++) {
    auto sv = score_view(mesh, views[v], config);
    auto decision = decide_prune(sv.table, config.tau, mesh.face_count());
    for (auto f : decision.kept) tally[f].first++;
    for (auto f : decision.pruned) {
      tally[f].first++;
      tally[f].second++;
    }
    iou_before[v] = iou_2d(sv.alpha, sv.gt, config.bin_threshold);
    save_mask(sv.alpha, (dir / view_file_name("alpha", static_cast<int>(v), "png")).string());

    for (size_t i = 0; i < sv.table.entries.size(); i++) {
      auto& e = sv.table.entries[i];
      ordered_json rec;
      rec["record"] = "face";
      rec["view"] = static_cast<int>(v);
      rec["face"] = e.face;
      rec["gamma"] = e.gamma;
      rec["Gamma"] = e.big_gamma;
      rec["score"] = e.score;
      rec["pruned"] = e.score < decision.threshold;
      records.write(rec);
    }
    decisions.push_back(std::move(decision));
  }

  // Combined prune set across views.
  std::vector<int> removed;
  for (auto& [face, counts] : tally) {
    auto [visible, pruned] = counts;
    bool remove =
        mode == MultiViewMode::set_intersection ? (pruned == visible) : (pruned > 0);
    if (remove && pruned > 0) removed.push_back(face);
  }
  auto refined = remove_faces(mesh, removed);
  save_obj(refined, (dir / "refined.obj").string());

  // Pass 2: refined silhouettes. per-view mode excludes each view's own
  // prune set; union/intersection modes exclude the combined set.
  for (size_t v = 0; v < views.size(); v++) {
    auto sv = score_view(mesh, views[v], config);
    auto& excluded = mode == MultiViewMode::per_view ? decisions[v].pruned : removed;
    auto alpha_r = aggregate_mask(sv.maps, excluded);
    save_mask(alpha_r, (dir / view_file_name("alpha_refined", static_cast<int>(v), "png")).string());
    auto iou_after = iou_2d(alpha_r, sv.gt, config.bin_threshold);

    auto& d = decisions[v];
    ordered_json rec;
    rec["record"] = "view_summary";
    rec["view"] = static_cast<int>(v);
    rec["azimuth"] = views[v].pose.azimuth_deg;
    rec["elevation"] = views[v].pose.elevation_deg;
    rec["faces"] = mesh.face_count();
    rec["unique_faces"] = static_cast<int>(d.pruned.size() + d.kept.size());
    rec["pruned"] = static_cast<int>(d.pruned.size());
    rec["off_screen"] = static_cast<int>(d.off_screen.size());
    rec["tau"] = d.tau;
    rec["threshold"] = d.threshold;
    rec["iou_before"] = iou_before[v];
    rec["iou_after"] = iou_after;
    records.write(rec);

    std::printf("view %zu: faces=%d unique=%zu pruned=%zu off_screen=%zu t=%.6g "
                "iou %.4f -> %.4f\n",
        v, mesh.face_count(), d.pruned.size() + d.kept.size(), d.pruned.size(),
        d.off_screen.size(), d.threshold, iou_before[v], iou_after);
  }

  ordered_json rec;
  rec["record"] = "refine_summary";
  rec["mode"] = config.mode;
  rec["faces_in"] = mesh.face_count();
  rec["faces_out"] = refined.face_count();
  rec["removed"] = static_cast<int>(removed.size());
  records.write(rec);
  records.close();

  std::printf("refined mesh: %d faces (removed %zu) -> %s\n", refined.face_count(),
      removed.size(), (dir / "refined.obj").string().c_str());
  write_status_ok(dir);
}

void cmd_render(const RunConfig& config) {
  set_thread_count(config.threads);
  if (config.out_path.empty()) throw std::runtime_error("missing --out file path");
  auto mesh = load_obj(config.mesh_path);
  validate(mesh);
  auto pose = pose_from_config(config);

  AlphaMask mask;
  if (config.hard) {
    mask = render_gt_mask(mesh, pose);
  } else {
    auto screen = project(mesh, pose);
    auto frag = rasterize_topk(screen, config.k, config.sigma, pose.height, pose.width);
    mask = aggregate_mask(face_soft_maps(frag));
  }
  if (auto parent = fs::path(config.out_path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  save_mask(mask, config.out_path);
  std::printf("wrote %s\n", config.out_path.c_str());
}

void cmd_eval(const RunConfig& config) {
  set_thread_count(config.threads);
  auto dir = prepare_out_dir(config);
  if (config.ref_path.empty()) throw std::runtime_error("missing --ref mesh");
  auto pred = load_obj(config.mesh_path);
  auto ref = load_obj(config.ref_path);
  validate(pred);
  validate(ref);

  std::vector<CameraPose> poses;
  if (!config.views_path.empty()) {
    for (auto& v : load_view_manifest(config.views_path)) poses.push_back(v.pose);
  } else {
    poses = turntable_poses(config.n_views, config.elevation, config.distance,
        config.image_size, config.fov_y);
  }

  RecordWriter records(dir / "eval.jsonl", "eval");
  double iou_sum = 0;
  for (size_t v = 0; v < poses.size(); v++) {
    auto iou = iou_2d(render_gt_mask(pred, poses[v]), render_gt_mask(ref, poses[v]),
        config.bin_threshold);
    iou_sum += iou;
    ordered_json rec;
    rec["record"] = "view_iou";
    rec["view"] = static_cast<int>(v);
    rec["azimuth"] = poses[v].azimuth_deg;
    rec["elevation"] = poses[v].elevation_deg;
    rec["iou2d"] = iou;
    records.write(rec);
  }
  auto iou_mean = iou_sum / static_cast<double>(poses.size());

  // the same seed on both meshes makes eval(m, m) an exact identity
  auto cloud_pred = sample_surface(pred, config.samples, config.seed);
  auto cloud_ref = sample_surface(ref, config.samples, config.seed);
  MetricReport report;
  report.iou2d = iou_mean;
  report.chamfer = chamfer(cloud_pred, cloud_ref);
  report.fscore = f_score(cloud_pred, cloud_ref, config.f_threshold);
  report.metro = metro(pred, ref, config.samples, config.seed + 2);

  ordered_json rec;
  rec["record"] = "summary";
  rec["views"] = static_cast<int>(poses.size());
  rec["samples"] = config.samples;
  rec["iou2d_mean"] = report.iou2d;
  rec["chamfer"] = report.chamfer;
  rec["chamfer_x1000"] = report.chamfer * 1000.0;
  rec["fscore"] = report.fscore;
  rec["metro"] = report.metro;
  records.write(rec);
  records.close();

  std::printf("%-12s %-8s %-10s %-9s %-8s\n", "Method", "2D IoU", "CD(x1e3)", "F-Score",
      "METRO");
  std::printf("%-12s %-8.3f %-10.3f %-9.2f %-8.4f\n", "pred", report.iou2d,
      report.chamfer * 1000.0, report.fscore, report.metro);
  write_status_ok(dir);
}

void cmd_sweep(const RunConfig& config) {
  set_thread_count(config.threads);
  auto dir = prepare_out_dir(config);
  auto mesh = load_obj(config.mesh_path);
  validate(mesh);
  auto views = resolve_views(config, true);
  if (config.taus.empty()) throw std::runtime_error("sweep needs a non-empty tau list");

  PointCloud ref_cloud;
  if (!config.ref_path.empty()) {
    auto ref = load_obj(config.ref_path);
    validate(ref);
    ref_cloud = sample_surface(ref, config.samples, config.seed + 1);
  }

  RecordWriter records(dir / "sweep.jsonl", "sweep");
  std::ofstream csv(dir / "sweep.csv");
  csv << "view,azimuth,elevation,tau,unique_faces,pruned,threshold,iou_before,iou_after,"
         "chamfer,chamfer_x1000\n";

  for (size_t v = 0; v < views.size(); v++) {
    auto sv = score_view(mesh, views[v], config);
    auto iou_before = iou_2d(sv.alpha, sv.gt, config.bin_threshold);
    for (auto tau : config.taus) {
      auto decision = decide_prune(sv.table, tau, mesh.face_count());
      auto alpha_r = aggregate_mask(sv.maps, decision.pruned);
      auto iou_after = iou_2d(alpha_r, sv.gt, config.bin_threshold);

      ordered_json rec;
      rec["record"] = "sweep_point";
      rec["view"] = static_cast<int>(v);
      rec["azimuth"] = views[v].pose.azimuth_deg;
      rec["elevation"] = views[v].pose.elevation_deg;
      rec["tau"] = tau;
      rec["unique_faces"] = static_cast<int>(sv.table.entries.size());
      rec["pruned"] = static_cast<int>(decision.pruned.size());
      rec["threshold"] = decision.threshold;
      rec["iou_before"] = iou_before;
      rec["iou_after"] = iou_after;

      char chamfer_txt[64] = "";
      char chamfer_scaled_txt[64] = "";
      if (!ref_cloud.points.empty()) {
        auto refined = remove_faces(mesh, decision.pruned);
        auto cloud = sample_surface(refined, config.samples, config.seed);
        auto cd = chamfer(cloud, ref_cloud);
        rec["chamfer"] = cd;
        rec["chamfer_x1000"] = cd * 1000.0;
        std::snprintf(chamfer_txt, sizeof(chamfer_txt), "%.9g", cd);
        std::snprintf(chamfer_scaled_txt, sizeof(chamfer_scaled_txt), "%.9g", cd * 1000.0);
      }
      records.write(rec);

      char line[256];
      std::snprintf(line, sizeof(line), "%zu,%.9g,%.9g,%.9g,%zu,%zu,%.9g,%.9g,%.9g,%s,%s\n", v,
          views[v].pose.azimuth_deg, views[v].pose.elevation_deg, tau, sv.table.entries.size(),
          decision.pruned.size(), decision.threshold, iou_before, iou_after, chamfer_txt,
          chamfer_scaled_txt);
      csv << line;
    }
  }
  records.close();
  if (!csv.flush()) throw std::runtime_error("sweep.csv write failed");
  write_status_ok(dir);
}

void cmd_scenes_generate(const RunConfig& config) {
  set_thread_count(config.threads);
  auto dir = prepare_out_dir(config);
  auto mesh = make_scene_mesh(config.scene);
  if (config.normalize) mesh = normalize_unit(mesh);
  save_obj(mesh, (dir / "mesh.obj").string());

  auto poses = turntable_poses(config.n_views, config.elevation, config.distance,
      config.image_size, config.fov_y);
  std::vector<ViewSpec> views;
  for (size_t v = 0; v < poses.size(); v++) {
    auto name = view_file_name("view", static_cast<int>(v), "png");
    auto mask = render_gt_mask(mesh, poses[v]);
    save_mask(mask, (dir / name).string());
    views.push_back({poses[v], (dir / name).string()});
  }
  save_view_manifest((dir / "manifest.json").string(), views);
  std::printf("scene %s: %d vertices, %d faces, %zu views -> %s\n",
      to_string(config.scene.kind).c_str(), mesh.vertex_count(), mesh.face_count(),
      views.size(), dir.string().c_str());
  write_status_ok(dir);
}

}  // namespace maskprune
