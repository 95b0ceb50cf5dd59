"""Procedural scene generators.

Four desk-scale stand-ins for scene categories: Flat (open ground),
ObstacleField (narrow pathways, crouch passages, jumpable steps),
MultiLevel (plateaus joined by stairs and climbable walls) and Urban
(walkway/roadway partition around building blocks). Deterministic for
(kind, seed, dims); connectivity of spawn/target cells is by construction
(obstacles never touch the carved lane skeleton).
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidScene
from .scene import AreaKind, SceneSpec

KINDS = ("Flat", "ObstacleField", "MultiLevel", "Urban")

_OBJ_COLOR_BASE = 65536  # object mask colors: encode24(base + index)


def encode_mask_color(i: int) -> tuple[int, int, int]:
    """24-bit little-endian encoding; i >= 1 so black stays background."""
    return (i & 0xFF, (i >> 8) & 0xFF, (i >> 16) & 0xFF)


def object_mask_color(j: int) -> tuple[int, int, int]:
    return encode_mask_color(_OBJ_COLOR_BASE + 1 + j)


def generate_scene(kind: str, seed: int, nx: int, ny: int) -> SceneSpec:
    if kind not in KINDS:
        raise InvalidScene(f"unknown scene kind {kind!r} (one of {KINDS})")
    if nx < 4 or ny < 4:
        raise InvalidScene(f"dims too small: {nx}x{ny} (need at least 4x4)")
    rng = np.random.default_rng([KINDS.index(kind), seed, nx, ny])
    builder = {
        "Flat": _flat,
        "ObstacleField": _obstacle_field,
        "MultiLevel": _multi_level,
        "Urban": _urban,
    }[kind]
    scene = builder(rng, seed, nx, ny)
    scene.validate()
    return scene


def _base(name, tags, nx, ny) -> SceneSpec:
    return SceneSpec(
        name=name,
        tags=tags,
        nx=nx,
        ny=ny,
        cell_size=1.0,
        ground=np.zeros((nx, ny)),
        clearance=np.full((nx, ny), np.inf),
        area=np.full((nx, ny), AreaKind.WALKWAY, dtype=np.uint8),
        climbable=np.zeros((nx, ny), dtype=bool),
        reset_area=(0.0, float(nx), 0.0, float(ny), 0.0, 3.0),
    )


def _center(nx, ny):
    return ((nx // 2) + 0.5, (ny // 2) + 0.5)


def _flat(rng, seed, nx, ny) -> SceneSpec:
    s = _base(f"flat-{seed}-{nx}x{ny}", ("exterior", "landscape", "flat"), nx, ny)
    s.safe_start = [_center(nx, ny), (1.5, 1.5), (nx - 1.5, ny - 1.5)]
    s.target_locations = [(nx - 2.5, ny - 2.5), (1.5, ny - 1.5)]
    return s


def _obstacle_field(rng, seed, nx, ny) -> SceneSpec:
    s = _base(f"obstacles-{seed}-{nx}x{ny}",
              ("interior", "building", "topological"), nx, ny)
    lane_rows = sorted({1, ny // 2, ny - 2})
    lane_cols = sorted({1, nx // 2, nx - 2})
    lane = np.zeros((nx, ny), dtype=bool)
    for iy in lane_rows:
        lane[:, iy] = True
    for ix in lane_cols:
        lane[ix, :] = True

    # tall blocks off the lane skeleton -> narrow pathways
    n_blocks = max(2, (nx * ny) // 24)
    for _ in range(n_blocks):
        ix = int(rng.integers(0, nx))
        iy = int(rng.integers(0, ny))
        w = int(rng.integers(1, 3))
        h = int(rng.integers(1, 3))
        cells = [(a, b) for a in range(ix, min(ix + w, nx))
                 for b in range(iy, min(iy + h, ny))]
        if any(lane[a, b] for a, b in cells):
            continue
        for a, b in cells:
            s.ground[a, b] = 2.0
            s.area[a, b] = AreaKind.BLOCKED

    # jumpable steps (0.4 m) sprinkled off-lane
    for _ in range(max(2, (nx * ny) // 40)):
        ix = int(rng.integers(0, nx))
        iy = int(rng.integers(0, ny))
        if not lane[ix, iy] and s.area[ix, iy] == AreaKind.WALKWAY:
            s.ground[ix, iy] = 0.4

    # crouch passages: low ceilings over a span of the middle lane row
    iy = ny // 2
    x0 = max(2, nx // 3)
    x1 = min(nx - 2, x0 + max(2, nx // 6))
    for ix in range(x0, x1):
        s.clearance[ix, iy] = 1.2

    s.safe_start = [(1.5, 1.5), _center(nx, ny)]
    s.target_locations = [(nx - 1.5, ny - 1.5)]
    return s


def _multi_level(rng, seed, nx, ny) -> SceneSpec:
    s = _base(f"levels-{seed}-{nx}x{ny}",
              ("exterior", "community", "multi-floor"), nx, ny)
    ramp_len = min(8, max(1, nx // 2 - 1))
    plateau_h = min(2.0, 0.29 * ramp_len)
    split = nx // 2
    s.ground[split:, :] = plateau_h

    # stair band: one row ramps up in <=0.29 m increments
    stair_row = int(rng.integers(1, ny - 1))
    rise = plateau_h / ramp_len
    for k in range(ramp_len):
        ix = split - ramp_len + k
        if 0 <= ix < nx:
            s.ground[ix, stair_row] = rise * (k + 1)

    # a climbable wall face on the plateau edge, away from the stairs
    wall_rows = [iy for iy in range(ny) if abs(iy - stair_row) > 1]
    if wall_rows:
        iy = wall_rows[int(rng.integers(0, len(wall_rows)))]
        s.climbable[split, iy] = True

    s.safe_start = [(1.5, stair_row + 0.5), (1.5, 1.5)]
    s.target_locations = [(nx - 1.5, ny - 1.5)]
    return s


def _urban(rng, seed, nx, ny) -> SceneSpec:
    s = _base(f"urban-{seed}-{nx}x{ny}",
              ("exterior", "community", "urban"), nx, ny)
    block = max(6, min(nx, ny) // 4)
    road = np.zeros((nx, ny), dtype=bool)
    for ix in range(nx):
        if ix % block in (0, 1):
            road[ix, :] = True
    for iy in range(ny):
        if iy % block in (0, 1):
            road[:, iy] = True
    side = np.zeros((nx, ny), dtype=bool)
    for ix in range(nx):
        for iy in range(ny):
            if road[ix, iy]:
                continue
            near_road = any(
                0 <= ix + dx < nx and 0 <= iy + dy < ny and road[ix + dx, iy + dy]
                for dx, dy in ((-1, 0), (1, 0), (0, -1), (0, 1)))
            if near_road:
                side[ix, iy] = True

    s.area[road] = AreaKind.ROADWAY
    s.area[side] = AreaKind.WALKWAY
    objects = []
    interior = ~road & ~side
    for ix in range(nx):
        for iy in range(ny):
            if interior[ix, iy]:
                if rng.random() < 0.8:
                    s.area[ix, iy] = AreaKind.BLOCKED
                    s.ground[ix, iy] = 6.0
                else:
                    s.area[ix, iy] = AreaKind.ROUGH  # pocket park
    s.objects = objects

    walk_cells = [(ix, iy) for ix in range(nx) for iy in range(ny)
                  if s.area[ix, iy] == AreaKind.WALKWAY]
    picks = rng.choice(len(walk_cells), size=min(4, len(walk_cells)),
                       replace=False)
    pts = [s.cell_center(*walk_cells[int(i)]) for i in picks]
    s.safe_start = pts[:2]
    s.target_locations = pts[2:] or pts[:1]
    return s


def parse_generator_spec(spec: str) -> SceneSpec:
    """Parse 'generator:<kind>:<seed>:<nx>x<ny>' CLI scene specs."""
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] != "generator":
        raise InvalidScene(f"bad generator spec {spec!r}")
    kind, seed_s, dims = parts[1], parts[2], parts[3]
    try:
        seed = int(seed_s)
        nx_s, ny_s = dims.lower().split("x")
        nx, ny = int(nx_s), int(ny_s)
    except ValueError as e:
        raise InvalidScene(f"bad generator spec {spec!r}: {e}") from None
    return generate_scene(kind, seed, nx, ny)
