"""Mask-guided face pruning for triangle meshes.

Soft-rasterizes a mesh into per-face probability maps, scores every rendered
face against a ground-truth alpha mask with a soft IoU, and prunes the faces
scoring below an adaptive quantile threshold.
"""

from maskprune._core import (
    __version__,
    CameraPose,
    TriangleMesh,
    chamfer,
    compact,
    euler_characteristic,
    f_score,
    face_scores,
    iou_2d,
    is_watertight,
    load_mask,
    load_obj,
    make_box_grid_chairlike,
    make_icosphere,
    make_plate_with_holes,
    make_torus,
    metro,
    normalize_unit,
    prune,
    quantile_threshold,
    refine_multi_view,
    remove_faces,
    render_hard,
    render_soft,
    sample_surface,
    save_mask,
    save_obj,
    set_thread_count,
    surface_area,
    turntable_poses,
)

__all__ = [
    "__version__",
    "CameraPose",
    "TriangleMesh",
    "chamfer",
    "compact",
    "euler_characteristic",
    "f_score",
    "face_scores",
    "iou_2d",
    "is_watertight",
    "load_mask",
    "load_obj",
    "make_box_grid_chairlike",
    "make_icosphere",
    "make_plate_with_holes",
    "make_torus",
    "metro",
    "normalize_unit",
    "prune",
    "quantile_threshold",
    "refine_multi_view",
    "remove_faces",
    "render_hard",
    "render_soft",
    "sample_surface",
    "save_mask",
    "save_obj",
    "set_thread_count",
    "surface_area",
    "turntable_poses",
]
