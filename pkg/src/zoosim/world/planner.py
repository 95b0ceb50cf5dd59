"""Area-prioritized shortest paths on the scene grid.

Minimizes sum(cost_multiplier(entered cell) * cell_size) over 4-connected
moves; ties break by off-priority cell count, then hop count, then the
heap's ascending flat-index order (see kernels.gridpath). Planning is
conservative: elevation steps above STEP_HEIGHT are only crossed via cells
tagged climbable (pedestrian group only), and cells whose clearance is
below the group minimum are blocked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..constants import STEP_HEIGHT
from ..errors import NoPath
from ..kernels.gridpath import dijkstra_grid
from .scene import AREA_COSTS, GROUP_MIN_CLEARANCE, PREFERRED_KIND, SceneSpec


@dataclass(frozen=True)
class Path:
    waypoints: tuple[tuple[float, float], ...]  # cell centers, meters
    length: float                               # meters, planar
    cost: float                                 # weighted cost (internal)


def _planner_group(entity_class) -> str:
    if isinstance(entity_class, str):
        return entity_class
    return entity_class.planner_group


def build_cost_fields(scene: SceneSpec, group: str):
    """Per-cell multiplier (inf = blocked) and off-priority indicator."""
    area = scene.effective_area()
    table = np.array(AREA_COSTS[group])
    mult = table[area].astype(np.float64)
    if group != "aerial":
        min_c = GROUP_MIN_CLEARANCE[group]
        mult = np.where(scene.clearance < min_c, np.inf, mult)
    pref = PREFERRED_KIND[group]
    if pref < 0:
        offpref = np.zeros_like(area, dtype=np.uint8)
    else:
        offpref = (area != pref).astype(np.uint8)
    return mult.ravel(), offpref.ravel()


def _run_dijkstra(scene: SceneSpec, group: str, src_flat: int):
    mult, offpref = build_cost_fields(scene, group)
    elev = scene.effective_ground().ravel().astype(np.float64)
    climb = scene.climbable.ravel().astype(np.uint8)
    step_h = math.inf if group == "aerial" else STEP_HEIGHT
    allow_climb = group == "pedestrian"
    return dijkstra_grid(mult, offpref, elev, climb, scene.ny,
                         scene.cell_size, step_h, allow_climb, src_flat)


def find_path(scene: SceneSpec, entity_class, frm, to) -> Path:
    group = _planner_group(entity_class)
    if not scene.in_bounds(frm[0], frm[1]) or not scene.in_bounds(to[0], to[1]):
        raise NoPath("endpoint outside the grid")
    src = scene.cell_of(frm[0], frm[1])
    dst = scene.cell_of(to[0], to[1])
    src_flat = src[0] * scene.ny + src[1]
    dst_flat = dst[0] * scene.ny + dst[1]

    mult, _ = build_cost_fields(scene, group)
    if not np.isfinite(mult[src_flat]) or not np.isfinite(mult[dst_flat]):
        raise NoPath("endpoint on an impassable cell")
    if src_flat == dst_flat:
        return Path((scene.cell_center(*src),), 0.0, 0.0)

    dist, hops, parent = _run_dijkstra(scene, group, src_flat)
    if not np.isfinite(dist[dst_flat]):
        raise NoPath(f"no finite-cost route for group {group!r}")

    cells = []
    cur = dst_flat
    while cur != -1:
        cells.append(cur)
        cur = int(parent[cur])
    cells.reverse()
    wps = tuple(scene.cell_center(c // scene.ny, c % scene.ny) for c in cells)
    length = (len(cells) - 1) * scene.cell_size
    return Path(wps, length, float(dist[dst_flat]))


def shortest_path_length(scene: SceneSpec, entity_class, frm, to) -> float:
    """Geometric length (meters) of the minimum-cost path."""
    return find_path(scene, entity_class, frm, to).length


def reachable_cells(scene: SceneSpec, group: str, frm) -> np.ndarray:
    """Boolean (nx, ny) mask of cells with a finite-cost route from frm."""
    src = scene.cell_of(frm[0], frm[1])
    dist, _, _ = _run_dijkstra(scene, group, src[0] * scene.ny + src[1])
    return np.isfinite(dist).reshape(scene.nx, scene.ny)
