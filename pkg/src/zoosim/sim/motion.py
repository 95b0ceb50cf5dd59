"""Per-entity locomotion: action integration, collision, stance machine.

Yaw convention: yaw 0 faces +x, positive yaw turns clockwise (to the
right), heading(yaw) = (cos yaw, -sin yaw). A step is all-or-nothing:
any collision along the swept circle cancels the whole translation and
zeroes linear velocity; rotation still applies.
"""

from __future__ import annotations

import math

from ..constants import (CLIMB_MAX_RISE, CROUCH_AUTO_STAND_TICKS,
                         CROUCH_MIN_CLEARANCE, HOLD_TICKS_TO_STAND,
                         JUMP_AIR_TICKS, JUMP_BOOST, JUMP_CLEARANCE,
                         STAND_MIN_CLEARANCE, STEP_HEIGHT)
from ..world.scene import AreaKind, SceneSpec
from .actions import ContinuousMoveAction, DiscreteNavAction
from .entities import EntityState, Stance


def wrap_angle(deg: float) -> float:
    """Wrap into (-180, 180]."""
    return 180.0 - ((180.0 - deg) % 360.0)


def heading(yaw_deg: float) -> tuple[float, float]:
    r = math.radians(yaw_deg)
    return math.cos(r), -math.sin(r)


def bearing_deg(dx: float, dy: float) -> float:
    """Bearing of a planar offset under the yaw convention above."""
    return -math.degrees(math.atan2(dy, dx))


def required_clearance(state: EntityState, stance: str) -> float:
    if stance == Stance.CROUCH:
        return min(CROUCH_MIN_CLEARANCE, state.cls.height)
    return min(STAND_MIN_CLEARANCE, state.cls.height)


def support_z(state: EntityState) -> float:
    if state.stance == Stance.AIRBORNE:
        return state.z - JUMP_BOOST
    return state.z


def position_blocked(scene: SceneSpec, state: EntityState, x: float, y: float,
                     others=(), step_allow: float = STEP_HEIGHT,
                     stance: str | None = None) -> bool:
    """True when the collision circle cannot occupy (x, y)."""
    cls = state.cls
    r = cls.radius
    cs = scene.cell_size
    if x - r < 0.0 or y - r < 0.0 or x + r > scene.nx * cs or \
            y + r > scene.ny * cs:
        return True

    if not cls.aerial:
        stance = stance or state.stance
        base = support_z(state)
        need = required_clearance(state, stance)
        eff_g = scene.effective_ground()
        area = scene.effective_area()
        ix0 = max(int((x - r) // cs), 0)
        ix1 = min(int((x + r) // cs), scene.nx - 1)
        iy0 = max(int((y - r) // cs), 0)
        iy1 = min(int((y + r) // cs), scene.ny - 1)
        for ix in range(ix0, ix1 + 1):
            for iy in range(iy0, iy1 + 1):
                cx = min(max(x, ix * cs), (ix + 1) * cs)
                cy = min(max(y, iy * cs), (iy + 1) * cs)
                if (x - cx) ** 2 + (y - cy) ** 2 >= r * r:
                    continue
                if area[ix, iy] == AreaKind.BLOCKED:
                    return True
                if eff_g[ix, iy] - base > step_allow:
                    return True
                if scene.clearance[ix, iy] < need:
                    return True

    h = state.body_height()
    base = support_z(state)
    for other in others:
        if other.id == state.id:
            continue
        d2 = (other.x - x) ** 2 + (other.y - y) ** 2
        rr = r + other.cls.radius
        if d2 >= rr * rr:
            continue
        ob = support_z(other)
        if base < ob + other.body_height() and ob < base + h:
            return True
    return False


def _resolve_discrete(state: EntityState, action: str, edge: bool,
                      move_table=None):
    """Returns (angular, linear, is_jump, is_crouch, is_hold)."""
    table = move_table or DiscreteNavAction.DEFAULT_MOVES
    if action == DiscreteNavAction.JUMP:
        return 0.0, state.linear_v, True, False, False
    if action == DiscreteNavAction.CROUCH:
        ang, lin = table[DiscreteNavAction.CROUCH]
        return ang, lin, False, True, False
    if action == DiscreteNavAction.HOLD:
        ang, lin = table[DiscreteNavAction.HOLD]
        return ang, lin, False, False, True
    ang, lin = table[action]
    return ang, lin, False, False, False


def _try_stand(scene: SceneSpec, state: EntityState) -> str:
    ix, iy = scene.cell_of(state.x, state.y)
    if scene.clearance[ix, iy] >= required_clearance(state, Stance.STAND):
        return Stance.STAND
    if state.cls.can_crouch:
        return Stance.CROUCH
    return Stance.STAND


def _climb_target(scene: SceneSpec, state: EntityState):
    """Facing-most climbable neighbor within the climbable rise window."""
    ix, iy = scene.cell_of(state.x, state.y)
    eff_g = scene.effective_ground()
    base = support_z(state)
    best = None
    best_cos = -2.0
    for dx, dy in ((-1, 0), (0, -1), (0, 1), (1, 0)):
        jx, jy = ix + dx, iy + dy
        if not (0 <= jx < scene.nx and 0 <= jy < scene.ny):
            continue
        if not scene.climbable[jx, jy]:
            continue
        rise = eff_g[jx, jy] - base
        if not (STEP_HEIGHT < rise <= CLIMB_MAX_RISE):
            continue
        cx, cy = scene.cell_center(jx, jy)
        err = wrap_angle(bearing_deg(cx - state.x, cy - state.y) - state.yaw)
        c = math.cos(math.radians(err))
        if abs(err) <= 60.0 and c > best_cos:
            best_cos = c
            best = (jx, jy)
    return best


def step_entity(scene: SceneSpec, state: EntityState, action, dt: float,
                others=(), edge: bool = True, move_table=None) -> EntityState:
    """Advance one entity by dt. Mutates and returns state."""
    _, events = step_entity_events(scene, state, action, dt, others, edge,
                                   move_table)
    return state


def step_entity_events(scene: SceneSpec, state: EntityState, action, dt: float,
                       others=(), edge: bool = True, move_table=None):
    events = []
    cls = state.cls

    # settle a climb begun on the previous tick
    if state.stance == Stance.CLIMB:
        state.stance = _try_stand(scene, state)

    if isinstance(action, ContinuousMoveAction):
        ang, lin = action.angular, action.linear
        is_jump = is_crouch = is_hold = False
    elif isinstance(action, str) and action in DiscreteNavAction.ALL:
        ang, lin, is_jump, is_crouch, is_hold = _resolve_discrete(
            state, action, edge, move_table)
    else:
        # unknown action degrades to Hold semantics
        ang, lin, is_jump, is_crouch, is_hold = 0.0, 0.0, False, False, True

    if edge:
        if is_jump and cls.can_jump:
            state.consecutive_jumps += 1
            if state.consecutive_jumps >= 2:
                tgt = _climb_target(scene, state)
                if tgt is not None:
                    cx, cy = scene.cell_center(*tgt)
                    state.x, state.y = cx, cy
                    state.z = float(scene.effective_ground()[tgt])
                    state.stance = Stance.CLIMB
                    state.linear_v = 0.0
                    state.angular_v = 0.0
                    state.airborne_ticks = 0
                    state.consecutive_jumps = 0
                    events.append(("climb", state.id, tgt))
                    return state, events
            state.stance = Stance.AIRBORNE
            state.airborne_ticks = JUMP_AIR_TICKS
        elif is_jump:
            is_hold = True
        else:
            state.consecutive_jumps = 0
        if is_crouch and cls.can_crouch:
            state.stance = Stance.CROUCH
            state.crouch_ticks = CROUCH_AUTO_STAND_TICKS

    if is_hold:
        state.hold_streak += 1
        if state.hold_streak >= HOLD_TICKS_TO_STAND:
            state.airborne_ticks = 0
            if state.stance in (Stance.AIRBORNE, Stance.CROUCH):
                state.stance = _try_stand(scene, state)
    else:
        state.hold_streak = 0

    ang = min(max(ang, -cls.max_angular), cls.max_angular)
    lin = min(max(lin, -cls.max_linear), cls.max_linear)

    new_yaw = wrap_angle(state.yaw + ang * dt)
    dist = lin * dt
    moved = False
    if dist != 0.0:
        hx, hy = heading(new_yaw)
        nsub = max(1, math.ceil(abs(dist) / max(cls.radius * 0.5, 1e-6)))
        step_allow = JUMP_CLEARANCE if state.stance == Stance.AIRBORNE \
            else STEP_HEIGHT
        blocked = False
        px, py = state.x, state.y
        for s in range(1, nsub + 1):
            qx = state.x + hx * dist * (s / nsub)
            qy = state.y + hy * dist * (s / nsub)
            if position_blocked(scene, state, qx, qy, others, step_allow):
                blocked = True
                break
            px, py = qx, qy
        if blocked:
            events.append(("collision", state.id, (state.x, state.y)))
            lin = 0.0
        else:
            state.x, state.y = px, py
            moved = True

    state.yaw = new_yaw
    state.angular_v = ang
    state.linear_v = lin if moved or dist == 0.0 else 0.0

    # stance timers
    if state.stance == Stance.AIRBORNE:
        state.airborne_ticks -= 1
        if state.airborne_ticks <= 0:
            state.stance = _try_stand(scene, state)
    elif state.stance == Stance.CROUCH and state.crouch_ticks > 0:
        state.crouch_ticks -= 1
        if state.crouch_ticks == 0:
            state.stance = _try_stand(scene, state)

    # rest on the effective ground (aerial hovers at its altitude)
    g = scene.ground_at(state.x, state.y)
    if cls.aerial:
        state.z = g + cls.eye_height
    elif state.stance == Stance.AIRBORNE:
        state.z = g + JUMP_BOOST
    else:
        state.z = g

    return state, events
