import json

import numpy as np
import pytest

from zoosim.errors import (InvalidScene, NoPath, NoSuchObject,
                           UnsupportedInteraction)
from zoosim.world import (AreaKind, InteractiveObject, find_path,
                          generate_scene, load_scene, save_scene,
                          scene_from_doc, scene_to_doc, scene_to_json,
                          set_object_state)
from zoosim.world.generate import object_mask_color
from zoosim.world.scene import AREA_COSTS


def test_flat_scene_is_uniform():
    s = generate_scene("Flat", 0, 10, 10)
    assert (s.ground == 0).all()
    assert (s.area == AreaKind.WALKWAY).all()
    assert np.isinf(s.clearance).all()
    assert not s.objects


def test_urban_has_both_area_kinds():
    s = generate_scene("Urban", 7, 32, 32)
    assert (s.area == AreaKind.WALKWAY).any()
    assert (s.area == AreaKind.ROADWAY).any()


def test_generation_deterministic_byte_identical():
    a = generate_scene("ObstacleField", 3, 16, 16)
    b = generate_scene("ObstacleField", 3, 16, 16)
    assert scene_to_json(a) == scene_to_json(b)


def test_different_seed_differs():
    a = generate_scene("ObstacleField", 3, 16, 16)
    b = generate_scene("ObstacleField", 4, 16, 16)
    assert scene_to_json(a) != scene_to_json(b)


def test_dims_too_small_rejected():
    with pytest.raises(InvalidScene):
        generate_scene("Flat", 0, 3, 8)


def test_multilevel_has_plateaus_and_climbable():
    s = generate_scene("MultiLevel", 1, 20, 16)
    assert np.unique(s.ground).size >= 3  # two plateaus plus stair steps
    assert s.climbable.any()


def test_safe_starts_on_passable_cells():
    for kind in ("Flat", "ObstacleField", "MultiLevel", "Urban"):
        for seed in (0, 1, 2):
            s = generate_scene(kind, seed, 16, 16)
            area = s.effective_area()
            for x, y in s.safe_start:
                assert area[s.cell_of(x, y)] != AreaKind.BLOCKED


def test_scene_json_round_trip(tmp_path, obstacle_scene):
    path = tmp_path / "scene.json"
    save_scene(obstacle_scene, path)
    loaded = load_scene(path)
    assert scene_to_json(loaded) == scene_to_json(obstacle_scene)


def test_scene_doc_rejects_wrong_format(obstacle_scene):
    doc = scene_to_doc(obstacle_scene)
    doc["format"] = "something-else"
    with pytest.raises(InvalidScene):
        scene_from_doc(doc)


def test_area_cost_invariants():
    for group, costs in AREA_COSTS.items():
        assert costs[AreaKind.BLOCKED] == float("inf"), group
    ped = AREA_COSTS["pedestrian"]
    veh = AREA_COSTS["vehicle"]
    assert ped[AreaKind.WALKWAY] < ped[AreaKind.ROADWAY]
    assert veh[AreaKind.ROADWAY] < veh[AreaKind.WALKWAY]


def _door_scene():
    s = generate_scene("Flat", 0, 12, 12)
    # wall across x = 5..6 with a door gap at y in [5, 6)
    for iy in range(12):
        if iy == 5:
            continue
        s.ground[5, iy] = 3.0
        s.area[5, iy] = AreaKind.BLOCKED
    s.objects.append(InteractiveObject(
        id="door0", kind="Door", x=5.5, y=5.5, yaw=0.0,
        footprint=(5.0, 6.0, 5.0, 6.0), height=2.2, state="closed",
        mask_color=object_mask_color(0)))
    s.touch()
    return s


def test_closed_door_blocks_then_open_clears():
    s = _door_scene()
    with pytest.raises(NoPath):
        find_path(s, "pedestrian", (2.5, 5.5), (9.5, 5.5))
    set_object_state(s, "door0", "open")
    path = find_path(s, "pedestrian", (2.5, 5.5), (9.5, 5.5))
    assert path.length == 7.0


def test_open_already_open_door_is_noop():
    s = _door_scene()
    set_object_state(s, "door0", "open")
    before = scene_to_json(s)
    version = s._version
    set_object_state(s, "door0", "open")
    assert scene_to_json(s) == before
    assert s._version == version


def test_set_state_on_box_unsupported():
    s = _door_scene()
    s.objects.append(InteractiveObject(
        id="box0", kind="Box", x=2.5, y=2.5, yaw=0.0,
        footprint=(2.0, 3.0, 2.0, 3.0), height=0.45,
        mask_color=object_mask_color(1)))
    with pytest.raises(UnsupportedInteraction):
        set_object_state(s, "box0", "open")


def test_set_state_unknown_object():
    s = _door_scene()
    with pytest.raises(NoSuchObject):
        set_object_state(s, "nope", "open")


def test_scene_doc_is_json_stable(obstacle_scene):
    text = scene_to_json(obstacle_scene)
    assert json.loads(text)  # parses
    assert scene_to_json(scene_from_doc(json.loads(text))) == text
