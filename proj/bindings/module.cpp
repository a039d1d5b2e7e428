#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "maskprune/metrics.hpp"
#include "maskprune/parallel.hpp"
#include "maskprune/pipeline.hpp"
#include "maskprune/prune.hpp"
#include "maskprune/scenes.hpp"
#include "maskprune/spatial.hpp"

namespace py = pybind11;
using namespace maskprune;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

std::vector<Vec3> points_from_array(const DoubleArray& arr) {
  if (arr.ndim() != 2 || arr.shape(1) != 3)
    throw std::invalid_argument("expected an (n, 3) array");
  std::vector<Vec3> points(arr.shape(0));
  auto view = arr.unchecked<2>();
  for (py::ssize_t i = 0; i < arr.shape(0); i++)
    points[i] = {view(i, 0), view(i, 1), view(i, 2)};
  return points;
}

py::array_t<double> array_from_points(const std::vector<Vec3>& points) {
  py::array_t<double> arr({static_cast<py::ssize_t>(points.size()), py::ssize_t(3)});
  auto view = arr.mutable_unchecked<2>();
  for (size_t i = 0; i < points.size(); i++) {
    view(i, 0) = points[i].x;
    view(i, 1) = points[i].y;
    view(i, 2) = points[i].z;
  }
  return arr;
}

TriangleMesh mesh_from_arrays(const DoubleArray& vertices, const IntArray& faces) {
  if (faces.ndim() != 2 || faces.shape(1) != 3)
    throw std::invalid_argument("faces must be an (m, 3) array");
  TriangleMesh mesh;
  mesh.vertices = points_from_array(vertices);
  mesh.faces.resize(faces.shape(0));
  auto view = faces.unchecked<2>();
  for (py::ssize_t i = 0; i < faces.shape(0); i++)
    mesh.faces[i] = {view(i, 0), view(i, 1), view(i, 2)};
  validate(mesh);
  return mesh;
}

py::array_t<int> faces_array(const TriangleMesh& mesh) {
  py::array_t<int> arr({static_cast<py::ssize_t>(mesh.faces.size()), py::ssize_t(3)});
  auto view = arr.mutable_unchecked<2>();
  for (size_t i = 0; i < mesh.faces.size(); i++)
    for (int k = 0; k < 3; k++) view(i, k) = mesh.faces[i][k];
  return arr;
}

AlphaMask mask_from_array(const DoubleArray& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("mask must be a 2D array");
  AlphaMask mask(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
  auto view = arr.unchecked<2>();
  for (py::ssize_t r = 0; r < arr.shape(0); r++)
    for (py::ssize_t c = 0; c < arr.shape(1); c++)
      mask.at(static_cast<int>(r), static_cast<int>(c)) = view(r, c);
  return mask;
}

py::array_t<double> array_from_mask(const AlphaMask& mask) {
  py::array_t<double> arr({static_cast<py::ssize_t>(mask.height),
      static_cast<py::ssize_t>(mask.width)});
  auto view = arr.mutable_unchecked<2>();
  for (int r = 0; r < mask.height; r++)
    for (int c = 0; c < mask.width; c++) view(r, c) = mask.at(r, c);
  return arr;
}

py::dict decision_dict(const PruneDecision& d) {
  py::dict out;
  out["tau"] = d.tau;
  out["threshold"] = d.threshold;
  out["pruned"] = py::cast(d.pruned);
  out["kept"] = py::cast(d.kept);
  out["off_screen"] = py::cast(d.off_screen);
  return out;
}

AlphaMask render_soft(const TriangleMesh& mesh, const CameraPose& pose, int k, double sigma) {
  auto screen = project(mesh, pose);
  auto frag = rasterize_topk(screen, k, sigma, pose.height, pose.width);
  return aggregate_mask(face_soft_maps(frag));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Soft-rasterization face pruning: score mesh faces against a 2D "
            "alpha mask and drop the quantile tail.";

  py::class_<TriangleMesh>(m, "TriangleMesh")
      .def(py::init<>())
      .def(py::init(&mesh_from_arrays), py::arg("vertices"), py::arg("faces"))
      .def_property_readonly("vertices",
          [](const TriangleMesh& mesh) { return array_from_points(mesh.vertices); })
      .def_property_readonly("faces", &faces_array)
      .def_property_readonly("vertex_count", &TriangleMesh::vertex_count)
      .def_property_readonly("face_count", &TriangleMesh::face_count)
      .def("__repr__", [](const TriangleMesh& mesh) {
        return "TriangleMesh(" + std::to_string(mesh.vertex_count()) + " vertices, " +
               std::to_string(mesh.face_count()) + " faces)";
      });

  py::class_<CameraPose>(m, "CameraPose")
      .def(py::init<>())
      .def(py::init([](double azimuth, double elevation, double distance, int image_size,
                        double fov_y) {
        CameraPose pose;
        pose.azimuth_deg = azimuth;
        pose.elevation_deg = elevation;
        pose.distance = distance;
        pose.height = pose.width = image_size;
        pose.fov_y_deg = fov_y;
        return pose;
      }),
          py::arg("azimuth") = 0.0, py::arg("elevation") = 30.0, py::arg("distance") = 2.732,
          py::arg("image_size") = 224, py::arg("fov_y") = 30.0)
      .def_readwrite("azimuth", &CameraPose::azimuth_deg)
      .def_readwrite("elevation", &CameraPose::elevation_deg)
      .def_readwrite("distance", &CameraPose::distance)
      .def_readwrite("height", &CameraPose::height)
      .def_readwrite("width", &CameraPose::width)
      .def_readwrite("fov_y", &CameraPose::fov_y_deg);

  m.def("load_obj", [](const std::string& path) { return load_obj(path); }, py::arg("path"));
  m.def("save_obj", &save_obj, py::arg("mesh"), py::arg("path"));
  m.def("normalize_unit", &normalize_unit, py::arg("mesh"));
  m.def("compact", &compact, py::arg("mesh"));
  m.def("remove_faces", &remove_faces, py::arg("mesh"), py::arg("face_ids"));
  m.def("surface_area", &surface_area, py::arg("mesh"));
  m.def("euler_characteristic", &euler_characteristic, py::arg("mesh"));
  m.def("is_watertight", &is_watertight, py::arg("mesh"));
  m.def("sample_surface",
      [](const TriangleMesh& mesh, int n, uint64_t seed) {
        return array_from_points(sample_surface(mesh, n, seed).points);
      },
      py::arg("mesh"), py::arg("n"), py::arg("seed") = 0);

  m.def("turntable_poses", &turntable_poses, py::arg("n_views"), py::arg("elevation") = 30.0,
      py::arg("distance") = 2.732, py::arg("image_size") = 224, py::arg("fov_y") = 30.0);

  m.def("render_soft",
      [](const TriangleMesh& mesh, const CameraPose& pose, int k, double sigma) {
        return array_from_mask(render_soft(mesh, pose, k, sigma));
      },
      py::arg("mesh"), py::arg("pose"), py::arg("k") = 30, py::arg("sigma") = 5e-7);
  m.def("render_hard",
      [](const TriangleMesh& mesh, const CameraPose& pose) {
        return array_from_mask(render_gt_mask(mesh, pose));
      },
      py::arg("mesh"), py::arg("pose"));

  m.def("face_scores",
      [](const TriangleMesh& mesh, const CameraPose& pose, const DoubleArray& gt, int k,
          double sigma) {
        auto screen = project(mesh, pose);
        auto frag = rasterize_topk(screen, k, sigma, pose.height, pose.width);
        auto table = face_iou_scores(face_soft_maps(frag), mask_from_array(gt));
        py::dict out;
        std::vector<int> face;
        std::vector<double> gamma, big_gamma, score;
        for (auto& e : table.entries) {
          face.push_back(e.face);
          gamma.push_back(e.gamma);
          big_gamma.push_back(e.big_gamma);
          score.push_back(e.score);
        }
        out["face"] = py::cast(face);
        out["gamma"] = py::cast(gamma);
        out["Gamma"] = py::cast(big_gamma);
        out["score"] = py::cast(score);
        return out;
      },
      py::arg("mesh"), py::arg("pose"), py::arg("gt"), py::arg("k") = 30,
      py::arg("sigma") = 5e-7);

  m.def("quantile_threshold", &quantile_threshold, py::arg("scores"), py::arg("tau"));

  m.def("prune",
      [](const TriangleMesh& mesh, const CameraPose& pose, const DoubleArray& gt, double tau,
          int k, double sigma) {
        auto screen = project(mesh, pose);
        auto frag = rasterize_topk(screen, k, sigma, pose.height, pose.width);
        auto table = face_iou_scores(face_soft_maps(frag), mask_from_array(gt));
        auto [decision, refined] = prune_faces(mesh, table, tau);
        return py::make_tuple(refined, decision_dict(decision));
      },
      py::arg("mesh"), py::arg("pose"), py::arg("gt"), py::arg("tau") = 0.05,
      py::arg("k") = 30, py::arg("sigma") = 5e-7);

  m.def("refine_multi_view",
      [](const TriangleMesh& mesh, const std::vector<std::pair<CameraPose, DoubleArray>>& views,
          double tau, const std::string& mode, int k, double sigma) {
        std::vector<ViewObservation> obs;
        obs.reserve(views.size());
        for (auto& [pose, gt] : views) obs.push_back({pose, mask_from_array(gt)});
        auto result = refine_multi_view(mesh, obs, tau, parse_multi_view_mode(mode), k, sigma);
        py::list decisions;
        for (auto& d : result.decisions) decisions.append(decision_dict(d));
        return py::make_tuple(result.refined, py::cast(result.removed), decisions);
      },
      py::arg("mesh"), py::arg("views"), py::arg("tau") = 0.05, py::arg("mode") = "per-view",
      py::arg("k") = 30, py::arg("sigma") = 5e-7);

  m.def("iou_2d",
      [](const DoubleArray& pred, const DoubleArray& gt, double threshold) {
        return iou_2d(mask_from_array(pred), mask_from_array(gt), threshold);
      },
      py::arg("pred"), py::arg("gt"), py::arg("bin_threshold") = 0.5);
  m.def("chamfer",
      [](const DoubleArray& a, const DoubleArray& b) {
        PointCloud ca{points_from_array(a)}, cb{points_from_array(b)};
        return chamfer(ca, cb);
      },
      py::arg("a"), py::arg("b"));
  m.def("f_score",
      [](const DoubleArray& a, const DoubleArray& b, double threshold) {
        PointCloud ca{points_from_array(a)}, cb{points_from_array(b)};
        return f_score(ca, cb, threshold);
      },
      py::arg("a"), py::arg("b"), py::arg("sq_dist_threshold") = 0.001);
  m.def("metro", &metro, py::arg("mesh_a"), py::arg("mesh_b"), py::arg("n") = 10000,
      py::arg("seed") = 0);

  m.def("make_icosphere", &make_icosphere, py::arg("subdivisions"));
  m.def("make_torus", &make_torus, py::arg("major_r") = 0.35, py::arg("minor_r") = 0.12,
      py::arg("segments_u") = 96, py::arg("segments_v") = 48);
  m.def("make_plate_with_holes", &make_plate_with_holes, py::arg("hole_count"),
      py::arg("hole_radius") = 0.07, py::arg("grid_x") = 48, py::arg("grid_y") = 34);
  m.def("make_box_grid_chairlike", &make_box_grid_chairlike);

  m.def("load_mask",
      [](const std::string& path, bool luma) { return array_from_mask(load_mask(path, luma)); },
      py::arg("path"), py::arg("luma") = false);
  m.def("save_mask",
      [](const DoubleArray& mask, const std::string& path, int bit_depth) {
        save_mask(mask_from_array(mask), path, bit_depth);
      },
      py::arg("mask"), py::arg("path"), py::arg("bit_depth") = 8);

  m.def("set_thread_count", &set_thread_count, py::arg("count"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
