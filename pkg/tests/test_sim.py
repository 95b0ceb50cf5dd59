import math

import numpy as np
import pytest

from zoosim.constants import TICK_DT
from zoosim.errors import DuplicateId, NoSuchEntity, OccupiedSpawn
from zoosim.sim import (ContinuousMoveAction, DiscreteNavAction, ENTITY_CLASSES,
                        NavController, RandomWalkController, Stance, World,
                        control_interval_for_fps, step_entity, wrap_angle)
from zoosim.world import AreaKind, generate_scene


def make_world(nx=12, ny=12):
    return World(generate_scene("Flat", 0, nx, ny), seed=0)


def test_entity_class_table():
    assert len(ENTITY_CLASSES) == 7
    assert ENTITY_CLASSES["Human"].eye_height > ENTITY_CLASSES["RobotDog"].eye_height
    for cls in ENTITY_CLASSES.values():
        assert cls.planner_group in ("pedestrian", "vehicle", "aerial")


def test_continuous_action_clamps_on_construction():
    a = ContinuousMoveAction(99.0, -7.0)
    assert a.angular == 30.0
    assert a.linear == -1.0
    b = ContinuousMoveAction(-12.5, 0.25)
    assert (b.angular, b.linear) == (-12.5, 0.25)


def test_control_interval_rule():
    assert control_interval_for_fps(30) == 1
    assert control_interval_for_fps(10) == 3
    assert control_interval_for_fps(3) == 10
    assert control_interval_for_fps(None) == 0
    assert control_interval_for_fps(1000) == 1  # floors at 1


def test_hold_is_identity_on_settled_state():
    w = make_world()
    e = w.spawn("Human", 5.5, 5.5, 30.0, "h")
    before = e.state_doc()
    step_entity(w.scene, e, DiscreteNavAction.HOLD, TICK_DT)
    after = e.state_doc()
    before.pop("hold"), after.pop("hold")  # hold streak is bookkeeping
    assert before == after


def test_forward_one_second_moves_one_meter():
    w = make_world()
    e = w.spawn("Human", 2.5, 5.5, 0.0, "h")
    step_entity(w.scene, e, DiscreteNavAction.FORWARD, 1.0)
    assert e.x == pytest.approx(3.5, abs=1e-12)
    assert e.y == pytest.approx(5.5, abs=1e-12)


def test_forward_into_wall_is_cancelled():
    w = make_world()
    s = w.scene
    s.ground[4, :] = 2.0
    s.area[4, :] = AreaKind.BLOCKED
    s.touch()
    e = w.spawn("Human", 3.3, 5.5, 0.0, "h")  # wall face 0.4 m ahead
    step_entity(s, e, DiscreteNavAction.FORWARD, 1.0)
    assert (e.x, e.y) == (3.3, 5.5)
    assert e.linear_v == 0.0


def test_yaw_convention_turn_right_positive():
    w = make_world()
    e = w.spawn("Human", 5.5, 5.5, 0.0, "h")
    step_entity(w.scene, e, DiscreteNavAction.TURN_RIGHT, 1.0)
    assert e.yaw == pytest.approx(15.0)
    step_entity(w.scene, e, ContinuousMoveAction(0.0, 1.0), 1.0)
    assert e.y < 5.5  # right turn swings heading toward -y


def test_step_world_empty_actions_only_ticks():
    w = make_world()
    w.spawn("Human", 5.5, 5.5, 0.0, "h")
    before = w.entities["h"].state_doc()
    w.step({})
    assert w.tick_index == 1
    assert w.entities["h"].state_doc() == before


def test_step_world_unknown_id():
    w = make_world()
    with pytest.raises(NoSuchEntity):
        w.step({"ghost": DiscreteNavAction.HOLD})


def test_two_entities_contest_one_cell_id_order_wins():
    w = make_world()
    a = w.spawn("Human", 4.4, 5.5, 0.0, "a")      # heads +x
    b = w.spawn("Human", 6.6, 5.5, 180.0, "b")    # heads -x
    act = ContinuousMoveAction(0.0, 1.0)
    for _ in range(15):
        w.step({"a": act, "b": act}, dt=TICK_DT)
    # entity "a" steps first each tick and claims the middle ground
    assert a.x > 4.4
    assert a.linear_v > 0 or b.linear_v == 0.0
    d = math.hypot(a.x - b.x, a.y - b.y)
    assert d >= a.cls.radius + b.cls.radius - 1e-9


def test_500_step_determinism():
    def run():
        w = make_world()
        w.spawn("Human", 3.5, 3.5, 10.0, "h")
        w.spawn("Human", 8.5, 8.5, -120.0, "g")
        rng = np.random.default_rng(42)
        for i in range(500):
            act = ContinuousMoveAction(float(rng.uniform(-30, 30)),
                                       float(rng.uniform(-1, 1)))
            w.step({"h": act, "g": ContinuousMoveAction(5.0, 0.5)})
        return w.state_digest()

    assert run() == run()


def test_spawn_destroy_round_trip():
    w = make_world()
    w.spawn("Human", 5.5, 5.5, 0.0, "h")
    digest = w.state_digest()
    w.spawn("Human", 2.5, 2.5, 0.0, "x")
    w.destroy("x")
    assert w.state_digest() == digest


def test_spawn_occupied_raises():
    w = make_world()
    w.spawn("Human", 5.5, 5.5, 0.0, "h")
    with pytest.raises(OccupiedSpawn):
        w.spawn("Human", 5.6, 5.5, 0.0, "g")


def test_spawn_duplicate_id_raises():
    w = make_world()
    w.spawn("Human", 5.5, 5.5, 0.0, "h")
    with pytest.raises(DuplicateId):
        w.spawn("Human", 2.5, 2.5, 0.0, "h")


def test_destroy_unknown_raises():
    w = make_world()
    with pytest.raises(NoSuchEntity):
        w.destroy("nope")


def test_mask_colors_unique_over_ten_spawns():
    w = make_world(20, 20)
    colors = set()
    for i in range(10):
        e = w.spawn("Human", 1.5 + 1.7 * i, 1.5 + 0.9 * i, 0.0, f"h{i}")
        colors.add(e.mask_color)
        assert e.mask_color != (0, 0, 0)
    assert len(colors) == 10


def test_navigate_corridor_reaches_goal():
    w = make_world()
    e = w.spawn("Human", 2.5, 5.5, 0.0, "h")
    ctrl = NavController("h", goal=(7.5, 5.5), speed=1.0)
    ticks = 0
    while ticks < 8 * 30:
        act = ctrl.action(w)
        w.step({"h": act})
        ticks += 1
        if math.hypot(e.x - 7.5, e.y - 5.5) <= 0.5:
            break
    assert math.hypot(e.x - 7.5, e.y - 5.5) <= 0.5
    assert ticks < 8 * 30


def test_navigate_goal_at_position_zero_action():
    w = make_world()
    w.spawn("Human", 5.5, 5.5, 0.0, "h")
    ctrl = NavController("h", goal=(5.5, 5.5))
    act = ctrl.action(w)
    assert (act.angular, act.linear) == (0.0, 0.0)
    assert ctrl.arrived


def test_navigate_blocked_goal_flags_event():
    w = make_world()
    s = w.scene
    s.area[8, 8] = AreaKind.BLOCKED
    s.touch()
    w.spawn("Human", 2.5, 2.5, 0.0, "h")
    ctrl = NavController("h", goal=(8.5, 8.5))
    act = ctrl.action(w)
    assert (act.angular, act.linear) == (0.0, 0.0)
    assert any(ev[1] == "path_blocked" for ev in w.events)


def test_random_walk_deterministic_and_contained():
    def run(n):
        w = World(generate_scene("Flat", 0, 16, 16), seed=0)
        e = w.spawn("Human", 8.5, 8.5, 0.0, "d")
        ctrl = RandomWalkController("d", w.scene, np.random.default_rng(9))
        traj = []
        for _ in range(n):
            w.step({"d": ctrl.action(w)})
            traj.append((e.x, e.y))
        return traj

    t1, t2 = run(1000), run(1000)
    assert t1 == t2
    x0, x1, y0, y1 = World(generate_scene("Flat", 0, 16, 16), 0).scene.reset_area[:4]
    m = 0.5  # steering slack around waypoints at area edge
    assert all(x0 - m <= x <= x1 + m and y0 - m <= y <= y1 + m for x, y in t1)


def test_random_walk_zero_area_degenerates_to_hold():
    w = make_world()
    w.scene.reset_area = (100.0, 100.0, 100.0, 100.0, 0.0, 1.0)  # off-grid
    w.scene.touch()
    e = w.spawn("Human", 5.5, 5.5, 0.0, "d")
    ctrl = RandomWalkController("d", w.scene, np.random.default_rng(3))
    for _ in range(30):
        act = ctrl.action(w)
        assert (act.angular, act.linear) == (0.0, 0.0)
        w.step({"d": act})
    assert (e.x, e.y) == (5.5, 5.5)


def test_double_jump_near_climbable_wall_climbs():
    w = make_world()
    s = w.scene
    s.ground[6:, :] = 1.8
    s.climbable[6, 5] = True
    s.touch()
    e = w.spawn("Human", 5.5, 5.5, 0.0, "h")  # faces +x toward the wall
    w.step({"h": DiscreteNavAction.JUMP})
    assert e.stance == Stance.AIRBORNE
    w.step({"h": DiscreteNavAction.JUMP})
    assert e.stance == Stance.CLIMB
    assert (e.x, e.y) == (6.5, 5.5)
    assert e.z == pytest.approx(1.8)
    w.step({"h": DiscreteNavAction.HOLD})
    assert e.stance == Stance.STAND


def test_double_jump_without_wall_no_climb():
    w = make_world()
    e = w.spawn("Human", 5.5, 5.5, 0.0, "h")
    w.step({"h": DiscreteNavAction.JUMP})
    w.step({"h": DiscreteNavAction.JUMP})
    assert e.stance == Stance.AIRBORNE
    assert e.z == pytest.approx(0.5)  # jump boost


def test_hold_two_ticks_returns_to_stand():
    w = make_world()
    e = w.spawn("Human", 5.5, 5.5, 0.0, "h")
    w.step({"h": DiscreteNavAction.CROUCH})
    assert e.stance == Stance.CROUCH
    w.step({"h": DiscreteNavAction.HOLD})
    w.step({"h": DiscreteNavAction.HOLD})
    assert e.stance == Stance.STAND


def test_crouch_forced_by_low_clearance():
    w = make_world()
    s = w.scene
    e = w.spawn("Human", 5.5, 5.5, 0.0, "h")
    s.clearance[:, :] = 1.2  # ceiling drops below standing headroom
    s.touch()
    w.step({"h": DiscreteNavAction.CROUCH})
    for _ in range(3):
        w.step({"h": DiscreteNavAction.HOLD})
    assert e.stance == Stance.CROUCH  # clearance forces it


def test_crouch_passes_low_passage_standing_blocked():
    w = make_world()
    s = w.scene
    s.clearance[6, :] = 1.2
    s.touch()
    e = w.spawn("Human", 5.5, 5.5, 0.0, "h")
    step_entity(s, e, DiscreteNavAction.FORWARD, 1.0)
    assert e.x == 5.5  # standing entry blocked
    w.step({"h": DiscreteNavAction.CROUCH})
    step_entity(s, e, DiscreteNavAction.FORWARD, 1.0, edge=False)
    assert e.x > 5.5


def test_boundedness_random_rollout(rng):
    w = World(generate_scene("ObstacleField", 5, 16, 16), seed=0)
    sx, sy = w.scene.safe_start[0]
    e = w.spawn("Human", sx, sy, 0.0, "h")
    blocked = w.scene.effective_area() == AreaKind.BLOCKED
    for i in range(2000):
        act = ContinuousMoveAction(float(rng.uniform(-30, 30)),
                                   float(rng.uniform(-1, 1)))
        w.step({"h": act})
        assert 0 <= e.x <= 16 and 0 <= e.y <= 16
        assert not blocked[w.scene.cell_of(e.x, e.y)]


def test_wrap_angle_range():
    assert wrap_angle(180.0) == 180.0
    assert wrap_angle(-180.0) == 180.0
    assert wrap_angle(540.0) == 180.0
    assert wrap_angle(-90.0) == -90.0
    assert wrap_angle(0.0) == 0.0
