"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import maskprune as mp


def test_scene_generators():
    ico = mp.make_icosphere(0)
    assert ico.vertex_count == 12
    assert ico.face_count == 20
    assert mp.make_icosphere(4).vertex_count == 2562
    assert mp.euler_characteristic(mp.make_torus()) == 0
    assert mp.euler_characteristic(mp.make_plate_with_holes(2)) == -2
    assert mp.is_watertight(mp.make_box_grid_chairlike())


def test_mesh_array_round_trip():
    mesh = mp.make_icosphere(1)
    rebuilt = mp.TriangleMesh(mesh.vertices, mesh.faces)
    assert rebuilt.face_count == mesh.face_count
    np.testing.assert_array_equal(rebuilt.faces, mesh.faces)

    with pytest.raises(Exception):
        mp.TriangleMesh(mesh.vertices, np.array([[0, 1, 99999]], dtype=np.int32))


def test_obj_and_mask_io(tmp_path):
    mesh = mp.normalize_unit(mp.make_icosphere(2))
    path = str(tmp_path / "mesh.obj")
    mp.save_obj(mesh, path)
    loaded = mp.load_obj(path)
    assert loaded.face_count == mesh.face_count
    np.testing.assert_allclose(loaded.vertices, mesh.vertices, atol=1e-6)

    mask = np.linspace(0.0, 1.0, 64).reshape(8, 8)
    mask_path = str(tmp_path / "mask.png")
    mp.save_mask(mask, mask_path)
    back = mp.load_mask(mask_path)
    np.testing.assert_allclose(back, mask, atol=1.0 / 510.0)


def test_color_masks_need_luma(tmp_path):
    from PIL import Image

    rgb_path = str(tmp_path / "rgb.png")
    Image.new("RGB", (8, 8), (200, 100, 50)).save(rgb_path)
    with pytest.raises(Exception):
        mp.load_mask(rgb_path)
    luma = mp.load_mask(rgb_path, luma=True)
    assert luma.shape == (8, 8)
    assert 0.0 < luma[0, 0] < 1.0


def test_render_shapes_and_ranges():
    mesh = mp.normalize_unit(mp.make_icosphere(2))
    pose = mp.CameraPose(azimuth=0.0, elevation=0.0, image_size=128)
    soft = mp.render_soft(mesh, pose)
    hard = mp.render_hard(mesh, pose)
    assert soft.shape == (128, 128)
    assert hard.shape == (128, 128)
    assert soft.min() >= 0.0 and soft.max() <= 1.0
    assert set(np.unique(hard)) <= {0.0, 1.0}
    assert soft.sum() > 0


def test_prune_pipeline_improves_iou():
    sphere = mp.normalize_unit(mp.make_icosphere(3))
    torus = mp.make_torus(0.3332, 0.1868, 64, 32)
    pose = mp.CameraPose(azimuth=0.0, elevation=0.0, image_size=160)
    gt = mp.render_hard(torus, pose)

    refined, decision = mp.prune(sphere, pose, gt, tau=0.05)
    assert 0 < len(decision["pruned"]) < sphere.face_count
    assert refined.face_count == sphere.face_count - len(decision["pruned"])

    before = mp.iou_2d(mp.render_soft(sphere, pose), gt)
    after = mp.iou_2d(mp.render_soft(refined, pose), gt)
    assert after > before

    scores = mp.face_scores(sphere, pose, gt)
    assert len(scores["score"]) == len(decision["pruned"]) + len(decision["kept"])
    assert mp.quantile_threshold(list(scores["score"]), 0.0) == min(scores["score"])


def test_metric_identities():
    mesh = mp.make_torus(0.35, 0.12, 24, 12)
    cloud = mp.sample_surface(mesh, 1000, seed=3)
    assert mp.chamfer(cloud, cloud) == 0.0
    assert mp.f_score(cloud, cloud) == 100.0
    assert mp.metro(mesh, mesh, n=1000, seed=3) <= 1e-9

    pose = mp.CameraPose(image_size=96)
    mask = mp.render_hard(mesh, pose)
    assert mp.iou_2d(mask, mask) == 1.0


def test_multi_view_refine():
    sphere = mp.normalize_unit(mp.make_icosphere(2))
    torus = mp.make_torus(0.32, 0.18, 48, 24)
    views = []
    for pose in mp.turntable_poses(3, elevation=0.0, image_size=96):
        views.append((pose, mp.render_hard(torus, pose)))
    refined, removed, decisions = mp.refine_multi_view(sphere, views, tau=0.15, mode="union")
    assert len(decisions) == 3
    union = set()
    for d in decisions:
        union.update(d["pruned"])
    assert sorted(union) == sorted(removed)
    assert refined.face_count == sphere.face_count - len(removed)
