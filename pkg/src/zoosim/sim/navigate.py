"""Built-in navigation controllers: waypoint steering, random walk, courses.

Controllers produce ContinuousMoveAction each tick and re-plan when the
scene mutates (doors), the goal moves, or the entity strays off path.
"""

from __future__ import annotations

import math

import numpy as np

from ..constants import (DISTRACTOR_REPICK_MAX_S, DISTRACTOR_REPICK_MIN_S,
                         GOAL_TOLERANCE, REPLAN_OFFPATH_DIST, TICK_DT,
                         WAYPOINT_TOLERANCE)
from ..errors import NoPath
from ..world.planner import find_path, reachable_cells
from ..world.scene import SceneSpec
from .actions import ContinuousMoveAction
from .entities import EntityState
from .motion import bearing_deg, wrap_angle

STEER_GAIN = 4.0  # deg/s per deg of heading error


def steer_to(state: EntityState, tx: float, ty: float,
             speed: float) -> ContinuousMoveAction:
    err = wrap_angle(bearing_deg(tx - state.x, ty - state.y) - state.yaw)
    ang = max(-state.cls.max_angular,
              min(state.cls.max_angular, STEER_GAIN * err))
    if abs(err) > 90.0:
        lin = 0.0
    elif abs(err) > 30.0:
        lin = 0.2 * speed
    else:
        lin = speed
    return ContinuousMoveAction(ang, lin)


def turn_radius(state: EntityState, speed: float) -> float:
    """Kinematic turn radius; waypoint acceptance must exceed it or the
    entity orbits its waypoint forever."""
    return speed / math.radians(max(state.cls.max_angular, 1e-6))


class NavController:
    """Steers an entity toward a goal along planned waypoints."""

    def __init__(self, entity_id: str, goal, speed: float = 0.8):
        self.entity_id = entity_id
        self.goal = goal
        self.speed = speed
        self._path = None
        self._wp_i = 0
        self._scene_version = -1
        self.blocked = False
        self.arrived = False

    def set_goal(self, goal) -> None:
        self.goal = goal
        self._path = None
        self.arrived = False
        self.blocked = False

    def _replan(self, scene: SceneSpec, state: EntityState) -> None:
        self._scene_version = scene._version
        try:
            self._path = find_path(scene, state.cls, (state.x, state.y),
                                   self.goal)
            self._wp_i = 1 if len(self._path.waypoints) > 1 else 0
            self.blocked = False
        except NoPath:
            self._path = None
            self.blocked = True

    def action(self, world) -> ContinuousMoveAction:
        scene = world.scene
        state = world.entity(self.entity_id)
        gx, gy = self.goal[0], self.goal[1]
        if math.hypot(gx - state.x, gy - state.y) <= GOAL_TOLERANCE:
            self.arrived = True
            return ContinuousMoveAction(0.0, 0.0)

        if self._path is None or scene._version != self._scene_version:
            self._replan(scene, state)
        if self.blocked or self._path is None:
            world.events.append((world.tick_index, "path_blocked",
                                 self.entity_id, tuple(self.goal[:2])))
            return ContinuousMoveAction(0.0, 0.0)

        wps = self._path.waypoints
        lookahead = max(WAYPOINT_TOLERANCE, 1.1 * turn_radius(state, self.speed))
        while self._wp_i < len(wps) - 1 and math.hypot(
                wps[self._wp_i][0] - state.x,
                wps[self._wp_i][1] - state.y) <= lookahead:
            self._wp_i += 1
        tx, ty = wps[min(self._wp_i, len(wps) - 1)]
        if math.hypot(tx - state.x, ty - state.y) > REPLAN_OFFPATH_DIST:
            self._replan(scene, state)
            if self.blocked or self._path is None:
                return ContinuousMoveAction(0.0, 0.0)
            wps = self._path.waypoints
            tx, ty = wps[min(self._wp_i, len(wps) - 1)]
        return steer_to(state, tx, ty, self.speed)


def builtin_navigate(scene_or_world, state: EntityState, goal,
                     controller: NavController | None = None):
    """One-shot facade: action steering toward the next planned waypoint."""
    from .world import World

    if isinstance(scene_or_world, World):
        world = scene_or_world
    else:
        world = World(scene_or_world, seed=0)
        world.entities[state.id] = state
    ctrl = controller or NavController(state.id, goal)
    if controller is not None and tuple(controller.goal[:2]) != tuple(goal[:2]):
        controller.set_goal(goal)
    return ctrl.action(world)


class RandomWalkController(NavController):
    """Re-picks a random reachable waypoint in reset_area every 5-15 s.

    An explicit `area` box overrides reset_area; `exclusion` rejects
    waypoints inside an inner box (annulus walking)."""

    def __init__(self, entity_id: str, scene: SceneSpec, rng: np.random.Generator,
                 speed: float = 0.8, area=None, exclusion=None):
        super().__init__(entity_id, goal=(0.0, 0.0), speed=speed)
        self.rng = rng
        self.area = area
        self.exclusion = exclusion
        self._next_pick = 0
        self._have_goal = False

    def _candidate_cells(self, scene: SceneSpec, state: EntityState):
        x0, x1, y0, y1 = (self.area or scene.reset_area)[:4]
        reach = reachable_cells(scene, state.cls.planner_group,
                                (state.x, state.y))
        cells = []
        for ix in range(scene.nx):
            for iy in range(scene.ny):
                cx, cy = scene.cell_center(ix, iy)
                if not (x0 <= cx <= x1 and y0 <= cy <= y1 and reach[ix, iy]):
                    continue
                if self.exclusion is not None:
                    ex0, ex1, ey0, ey1 = self.exclusion[:4]
                    if ex0 <= cx <= ex1 and ey0 <= cy <= ey1:
                        continue
                cells.append((cx, cy))
        return cells

    def action(self, world) -> ContinuousMoveAction:
        scene = world.scene
        state = world.entity(self.entity_id)
        if not self._have_goal or world.tick_index >= self._next_pick:
            cells = self._candidate_cells(scene, state)
            span = int(round((DISTRACTOR_REPICK_MAX_S - DISTRACTOR_REPICK_MIN_S)
                             / TICK_DT))
            base = int(round(DISTRACTOR_REPICK_MIN_S / TICK_DT))
            delay = base + int(self.rng.integers(0, span + 1))
            self._next_pick = world.tick_index + delay
            if not cells:
                self._have_goal = False
                return ContinuousMoveAction(0.0, 0.0)
            pick = int(self.rng.integers(0, len(cells)))
            self.set_goal(cells[pick])
            self._have_goal = True
        if not self._have_goal:
            return ContinuousMoveAction(0.0, 0.0)
        return super().action(world)


def random_walk_policy(rng: np.random.Generator, scene: SceneSpec,
                       state: EntityState,
                       controller: RandomWalkController | None = None):
    ctrl = controller or RandomWalkController(state.id, scene, rng)
    from .world import World

    world = World(scene, seed=0)
    world.entities[state.id] = state
    return ctrl.action(world)


class CourseController(NavController):
    """Cycles through a fixed waypoint list (serpentine target courses)."""

    def __init__(self, entity_id: str, waypoints, speed: float = 0.8,
                 loop: bool = True):
        super().__init__(entity_id, goal=tuple(waypoints[0]), speed=speed)
        self.course = [tuple(w) for w in waypoints]
        self.course_i = 0
        self.loop = loop

    def action(self, world) -> ContinuousMoveAction:
        state = world.entity(self.entity_id)
        gx, gy = self.goal[0], self.goal[1]
        accept = max(2 * WAYPOINT_TOLERANCE,
                     1.2 * turn_radius(state, self.speed))
        if math.hypot(gx - state.x, gy - state.y) <= accept:
            if self.course_i + 1 < len(self.course) or self.loop:
                self.course_i = (self.course_i + 1) % len(self.course)
                self.set_goal(self.course[self.course_i])
        return super().action(world)


def ring_course(box, inset: float = 3.0, advance: float = 3.0,
                width: float = 3.0):
    """Slalom lobes along a rectangular ring inside box = (x0, x1, y0, y1).

    The circuit covers the whole arena, so a tracker that drops the target
    watches it recede around the ring instead of being handed it back.
    """
    x0, x1, y0, y1 = box[0] + inset, box[1] - inset, box[2] + inset, \
        box[3] - inset
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    pts = []
    side = 1.0
    for a, b in zip(corners, corners[1:] + corners[:1]):
        ex, ey = b[0] - a[0], b[1] - a[1]
        seg = math.hypot(ex, ey)
        ux, uy = ex / seg, ey / seg
        nxv, nyv = -uy, ux  # inward for CCW traversal
        k = 1
        while k * advance < seg:
            px = a[0] + ux * (k * advance)
            py = a[1] + uy * (k * advance)
            pts.append((px + nxv * width * 0.5 * side,
                        py + nyv * width * 0.5 * side))
            side = -side
            k += 1
        pts.append(b)
    return pts


def nearest_course_index(course, pos) -> int:
    return min(range(len(course)),
               key=lambda i: (math.hypot(course[i][0] - pos[0],
                                         course[i][1] - pos[1]), i))


def serpentine_course(origin, yaw_deg: float, legs: int = 4,
                      advance: float = 2.0, width: float = 3.0):
    """Closed S-shaped circuit in the frame of (origin, yaw).

    Zigzags `legs` waypoints forward, then zigzags back with opposite
    lateral phase, so a looping CourseController traces a continuous
    slalom around the spine.
    """
    from .motion import heading

    hx, hy = heading(yaw_deg)
    rx, ry = heading(yaw_deg + 90.0)

    def pt(fwd, lat):
        return (origin[0] + hx * fwd + rx * lat,
                origin[1] + hy * fwd + ry * lat)

    pts = []
    side = 1.0
    for k in range(1, legs + 1):
        pts.append(pt(advance * k, width * 0.5 * side))
        side = -side
    for k in range(legs, 0, -1):
        pts.append(pt(advance * k, width * 0.5 * side))
        side = -side
    pts.append(pt(advance * 0.5, 0.0))
    return pts
