"""Procedural scene model: heightfield, clearance, traversal areas, objects.

Grid convention: cell (ix, iy) covers [ix*cs, (ix+1)*cs) x [iy*cs, (iy+1)*cs)
in meters, center at ((ix+.5)*cs, (iy+.5)*cs). Internal units are meters.

Objects fold into the collision/render model as "effective" fields: a
footprint raises effective ground to the object's top, and a closed Door
additionally marks its footprint cells Blocked. Mutation goes through
set_object_state only and bumps a version counter that invalidates caches.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidScene, NoSuchObject, UnsupportedInteraction

SCENE_FORMAT = "zoosim-scene"
SCENE_VERSION = 1


class AreaKind:
    WALKWAY = 0
    ROADWAY = 1
    ROUGH = 2
    BLOCKED = 3

    NAMES = ("walkway", "roadway", "rough", "blocked")


# cost multiplier per planner group, indexed by AreaKind code
AREA_COSTS = {
    "pedestrian": (1.0, 4.0, 2.0, math.inf),
    "vehicle": (4.0, 1.0, math.inf, math.inf),
    "aerial": (1.0, 1.0, 1.0, math.inf),
}

# the kind a group prefers; used by the tie-break (see kernels.gridpath)
PREFERRED_KIND = {
    "pedestrian": AreaKind.WALKWAY,
    "vehicle": AreaKind.ROADWAY,
    "aerial": -1,
}

# minimum clearance a group needs to occupy a cell (crouched passage for
# pedestrians); aerial ignores clearance entirely
GROUP_MIN_CLEARANCE = {"pedestrian": 0.9, "vehicle": 1.7, "aerial": 0.0}

OBJECT_KINDS = ("Door", "Box", "TargetMarker")
DEFAULT_OBJECT_HEIGHT = {"Door": 2.2, "Box": 0.45, "TargetMarker": 2.5}
# TargetMarker is a rendered beacon only: no collision footprint
COLLIDING_KINDS = ("Door", "Box")


@dataclass
class InteractiveObject:
    id: str
    kind: str
    x: float
    y: float
    yaw: float
    footprint: tuple[float, float, float, float]  # x0, x1, y0, y1 meters
    height: float
    state: str | None = None  # "open"/"closed" for doors
    albedo: tuple[float, float, float] = (0.8, 0.6, 0.3)
    mask_color: tuple[int, int, int] = (0, 0, 0)

    def blocks(self) -> bool:
        if self.kind == "Door":
            return self.state == "closed"
        return self.kind in COLLIDING_KINDS


@dataclass
class SceneSpec:
    name: str
    tags: tuple[str, ...]
    nx: int
    ny: int
    cell_size: float
    ground: np.ndarray          # (nx, ny) float64
    clearance: np.ndarray       # (nx, ny) float64, inf = open sky
    area: np.ndarray            # (nx, ny) uint8 AreaKind codes
    climbable: np.ndarray       # (nx, ny) bool
    objects: list[InteractiveObject] = field(default_factory=list)
    safe_start: list[tuple[float, float]] = field(default_factory=list)
    reset_area: tuple[float, float, float, float, float, float] = (0, 1, 0, 1, 0, 3)
    target_locations: list[tuple[float, float]] = field(default_factory=list)
    palette: dict[int, tuple[float, float, float]] = field(default_factory=lambda: {
        AreaKind.WALKWAY: (0.72, 0.70, 0.66),
        AreaKind.ROADWAY: (0.35, 0.35, 0.38),
        AreaKind.ROUGH: (0.45, 0.58, 0.35),
        AreaKind.BLOCKED: (0.55, 0.45, 0.40),
    })
    illumination: float = 1.0
    _version: int = 0
    _eff_cache: dict = field(default_factory=dict, repr=False)

    # -- geometry helpers ---------------------------------------------------

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        ix = min(max(int(x // self.cell_size), 0), self.nx - 1)
        iy = min(max(int(y // self.cell_size), 0), self.ny - 1)
        return ix, iy

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.nx * self.cell_size and \
            0.0 <= y < self.ny * self.cell_size

    def cell_center(self, ix: int, iy: int) -> tuple[float, float]:
        return (ix + 0.5) * self.cell_size, (iy + 0.5) * self.cell_size

    def footprint_cells(self, fp: tuple[float, float, float, float]):
        """Cells whose square intersects the footprint rect interior."""
        cs = self.cell_size
        eps = 1e-9
        ix0 = max(int((fp[0] + eps) // cs), 0)
        ix1 = min(int((fp[1] - eps) // cs), self.nx - 1)
        iy0 = max(int((fp[2] + eps) // cs), 0)
        iy1 = min(int((fp[3] - eps) // cs), self.ny - 1)
        for ix in range(ix0, ix1 + 1):
            for iy in range(iy0, iy1 + 1):
                yield ix, iy

    # -- effective fields (objects baked in) --------------------------------

    def _effective(self):
        cached = self._eff_cache.get(self._version)
        if cached is not None:
            return cached
        ground = self.ground.copy()
        area = self.area.copy()
        for obj in self.objects:
            if not obj.blocks():
                continue
            for ix, iy in self.footprint_cells(obj.footprint):
                top = self.ground[ix, iy] + obj.height
                if top > ground[ix, iy]:
                    ground[ix, iy] = top
            if obj.kind == "Door":
                for ix, iy in self.footprint_cells(obj.footprint):
                    area[ix, iy] = AreaKind.BLOCKED
        ground.setflags(write=False)
        area.setflags(write=False)
        self._eff_cache.clear()
        self._eff_cache[self._version] = (ground, area)
        return ground, area

    def effective_ground(self) -> np.ndarray:
        return self._effective()[0]

    def effective_area(self) -> np.ndarray:
        return self._effective()[1]

    def ground_at(self, x: float, y: float) -> float:
        ix, iy = self.cell_of(x, y)
        return float(self.effective_ground()[ix, iy])

    def find_object(self, object_id: str) -> InteractiveObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise NoSuchObject(f"no object with id {object_id!r}")

    def touch(self) -> None:
        """Invalidate derived-field caches after direct field mutation."""
        self._version += 1

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise InvalidScene("grid must be at least 1x1")
        if not self.cell_size > 0:
            raise InvalidScene("cell_size must be positive")
        if not np.isfinite(self.ground).all():
            raise InvalidScene("elevations must be finite")
        if (self.clearance < 0).any():
            raise InvalidScene("clearance must be >= 0")
        area = self.effective_area()
        for i, (x, y) in enumerate(self.safe_start):
            if not self.in_bounds(x, y):
                raise InvalidScene(f"safe_start[{i}] outside grid")
            if area[self.cell_of(x, y)] == AreaKind.BLOCKED:
                raise InvalidScene(f"safe_start[{i}] on a blocked cell")
        for i, (x, y) in enumerate(self.target_locations):
            if not self.in_bounds(x, y):
                raise InvalidScene(f"target_locations[{i}] outside grid")
            if area[self.cell_of(x, y)] == AreaKind.BLOCKED:
                raise InvalidScene(f"target_locations[{i}] on a blocked cell")
        x0, x1, y0, y1 = self.reset_area[:4]
        if x1 <= 0 or y1 <= 0 or x0 >= self.nx * self.cell_size or \
                y0 >= self.ny * self.cell_size:
            raise InvalidScene("reset_area does not intersect the grid")


def set_object_state(scene: SceneSpec, object_id: str, state: str) -> SceneSpec:
    """Flip a Door open/closed. Idempotent; other kinds are not switchable."""
    obj = scene.find_object(object_id)
    if obj.kind != "Door":
        raise UnsupportedInteraction(f"{obj.kind} has no switchable state")
    if state not in ("open", "closed"):
        raise UnsupportedInteraction(f"unknown state {state!r}")
    if obj.state != state:
        obj.state = state
        scene._version += 1
    return scene


# -- serialization -----------------------------------------------------------

def _grid_to_list(arr: np.ndarray):
    return [[None if math.isinf(v) else v for v in row] for row in arr.tolist()]


def scene_to_doc(scene: SceneSpec) -> dict:
    return {
        "format": SCENE_FORMAT,
        "version": SCENE_VERSION,
        "name": scene.name,
        "tags": sorted(scene.tags),
        "nx": scene.nx,
        "ny": scene.ny,
        "cell_size": scene.cell_size,
        "ground": scene.ground.tolist(),
        "clearance": _grid_to_list(scene.clearance),
        "area": scene.area.tolist(),
        "climbable": scene.climbable.astype(int).tolist(),
        "objects": [
            {
                "id": o.id, "kind": o.kind, "x": o.x, "y": o.y, "yaw": o.yaw,
                "footprint": list(o.footprint), "height": o.height,
                "state": o.state, "albedo": list(o.albedo),
                "mask_color": list(o.mask_color),
            }
            for o in scene.objects
        ],
        "safe_start": [list(p) for p in scene.safe_start],
        "reset_area": list(scene.reset_area),
        "target_locations": [list(p) for p in scene.target_locations],
        "palette": {str(k): list(v) for k, v in sorted(scene.palette.items())},
        "illumination": scene.illumination,
    }


def scene_from_doc(doc: dict) -> SceneSpec:
    if doc.get("format") != SCENE_FORMAT:
        raise InvalidScene(f"not a {SCENE_FORMAT} document")
    if doc.get("version") != SCENE_VERSION:
        raise InvalidScene(f"unsupported scene version {doc.get('version')!r}")
    clearance = np.array(
        [[math.inf if v is None else v for v in row] for row in doc["clearance"]],
        dtype=np.float64)
    scene = SceneSpec(
        name=doc["name"],
        tags=tuple(doc["tags"]),
        nx=doc["nx"],
        ny=doc["ny"],
        cell_size=doc["cell_size"],
        ground=np.array(doc["ground"], dtype=np.float64),
        clearance=clearance,
        area=np.array(doc["area"], dtype=np.uint8),
        climbable=np.array(doc["climbable"], dtype=bool),
        objects=[
            InteractiveObject(
                id=o["id"], kind=o["kind"], x=o["x"], y=o["y"], yaw=o["yaw"],
                footprint=tuple(o["footprint"]), height=o["height"],
                state=o["state"], albedo=tuple(o["albedo"]),
                mask_color=tuple(o["mask_color"]),
            )
            for o in doc["objects"]
        ],
        safe_start=[tuple(p) for p in doc["safe_start"]],
        reset_area=tuple(doc["reset_area"]),
        target_locations=[tuple(p) for p in doc["target_locations"]],
        palette={int(k): tuple(v) for k, v in doc["palette"].items()},
        illumination=doc["illumination"],
    )
    scene.validate()
    return scene


def scene_to_json(scene: SceneSpec) -> str:
    """Canonical (byte-stable) JSON form."""
    return json.dumps(scene_to_doc(scene), sort_keys=True, separators=(",", ":"))


def save_scene(scene: SceneSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(scene_to_json(scene))


def load_scene(path) -> SceneSpec:
    with open(path, encoding="utf-8") as f:
        return scene_from_doc(json.load(f))
