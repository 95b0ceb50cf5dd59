"""Benchmark the numba kernels against their pure-numpy fallbacks."""

from __future__ import annotations

import time

import numpy as np

from ..kernels import NUMBA_ENABLED
from ..sensors import CameraConfig, CameraPose
from ..sensors.render import raycast
from ..sim.world import World
from ..world.generate import generate_scene
from ..world.planner import build_cost_fields
from ..kernels.gridpath import dijkstra_grid, dijkstra_grid_py


def _time(fn, repeat: int) -> float:
    fn()  # warmup (and JIT compile)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench_raycast(width: int = 320, height: int = 240, repeat: int = 5):
    scene = generate_scene("ObstacleField", 3, 24, 24)
    world = World(scene, seed=0)
    sx, sy = scene.safe_start[0]
    world.spawn("Human", sx, sy, 0.0, "a")
    world.spawn("Human", sx + 2.0, sy, 90.0, "b")
    cfg = CameraConfig(width=width, height=height)
    pose = CameraPose(sx, sy + 1.0, 1.6, 0.0, -30.0, 0.0)
    ents = list(world.entities.values())
    rows = []
    backends = (["numba"] if NUMBA_ENABLED else []) + ["numpy"]
    for backend in backends:
        dt = _time(lambda: raycast(scene, ents, pose, cfg, backend=backend),
                   repeat)
        rows.append((f"raycast {width}x{height} [{backend}]", dt))
    return rows


def bench_dijkstra(nx: int = 64, ny: int = 64, repeat: int = 20):
    scene = generate_scene("Urban", 5, nx, ny)
    mult, offpref = build_cost_fields(scene, "pedestrian")
    elev = scene.effective_ground().ravel().astype(np.float64)
    climb = scene.climbable.ravel().astype(np.uint8)
    rows = []
    impls = ([("numba", dijkstra_grid)] if NUMBA_ENABLED else []) \
        + [("numpy", dijkstra_grid_py)]
    for name, fn in impls:
        dt = _time(lambda: fn(mult, offpref, elev, climb, ny,
                              scene.cell_size, 0.3, True, 0),
                   repeat if name == "numba" else max(1, repeat // 10))
        rows.append((f"dijkstra {nx}x{ny} [{name}]", dt))
    return rows


def run(width: int = 320, height: int = 240) -> str:
    rows = bench_raycast(width, height) + bench_dijkstra()
    lines = ["kernel benchmark (mean seconds per call)"]
    for name, dt in rows:
        lines.append(f"  {name:<34} {dt * 1e3:9.3f} ms")
    by_kind = {}
    for name, dt in rows:
        kind = name.split(" [")[0]
        by_kind.setdefault(kind, {})[name.split("[")[1].rstrip("]")] = dt
    for kind, impls in by_kind.items():
        if "numba" in impls and "numpy" in impls:
            lines.append(f"  {kind}: numba is "
                         f"{impls['numpy'] / impls['numba']:.1f}x faster")
    return "\n".join(lines)
