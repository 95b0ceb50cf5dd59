"""Evaluation scenario fixtures: pillared tracking arenas and task configs.

The arena is a flat court whose scripted target runs a slalom ring. With a
full pillar lattice the course weaves through occluders, so trackers that
react late watch the target slip behind a pillar and go blind: that is the
control-frequency study. With pillars confined to the interior the ring
corridor is clear and only the wandering crowd occludes: that is the
distractor study. Occlusion frequency, not raw target speed, separates
the conditions.
"""

from __future__ import annotations

import json
import os

import numpy as np

from ..world.generate import generate_scene
from ..world.scene import AreaKind, SceneSpec, save_scene

ARENA_NX = 44
ARENA_NY = 24
PILLAR_HEIGHT = 2.4


def build_tracking_arena(seed: int = 0, spacing: int = 6,
                         pillars: str = "lattice") -> SceneSpec:
    """Flat 44x24 court with a jittered pillar lattice.

    pillars: "lattice" covers the whole court (the serpentine ring weaves
    through them), "interior" keeps the ring corridor clear so occlusions
    come only from crowding, "none" leaves the court open.
    """
    s = generate_scene("Flat", seed, ARENA_NX, ARENA_NY)
    rng = np.random.default_rng([seed, 1151])
    if pillars == "interior":
        cells = [(gx, gy) for gx in range(9, ARENA_NX - 8, spacing)
                 for gy in range(8, ARENA_NY - 7, spacing)]
    elif pillars == "none":
        cells = []
    else:
        cells = [(gx, gy) for gx in range(6, ARENA_NX - 4, spacing)
                 for gy in range(4, ARENA_NY - 3, spacing)]
    for gx, gy in cells:
        ix = gx + int(rng.integers(-1, 2))
        iy = gy + int(rng.integers(-1, 2))
        s.ground[ix, iy] = PILLAR_HEIGHT
        s.area[ix, iy] = AreaKind.BLOCKED
    s.name = f"track-arena-{seed}"
    s.safe_start = [(5.0, ARENA_NY / 2.0)]
    s.reset_area = (2.0, ARENA_NX - 2.0, 2.0, ARENA_NY - 2.0, 0.0, 3.0)
    s.target_locations = [(ARENA_NX - 2.5, ARENA_NY - 2.5)]
    s.touch()
    s.validate()
    return s


def tracking_eval_config(scene_path: str, *, speed: float = 70.0,
                         advance: float = 300.0, width: float = 240.0,
                         width_px: int = 96, height_px: int = 72,
                         max_steps: int = 500,
                         random_init: bool = True) -> dict:
    """Task-config document for the ring-course tracking evaluation."""
    return {
        "env_name": "tracking_arena",
        "scene": scene_path,
        "task": "Tracking",
        "agents": {
            "player": {"class_name": "Human", "cam_id": 1,
                       "relative_location": [20, 0, 0]},
            "target": {"class_name": "Human", "internal_nav": True,
                       "policy": "circuit", "speed": speed,
                       "course": {"advance": advance, "width": width}},
        },
        "observation": {"modalities": ["mask"], "width": width_px,
                        "height": height_px, "far_clip": 2500},
        "safe_start": [[500, ARENA_NY * 100 / 2, 0]],
        "reset_area": [200, (ARENA_NX - 2) * 100, 200, (ARENA_NY - 2) * 100,
                       0, 300],
        "random_init": random_init,
        "max_steps": max_steps,
    }


def distractor_band() -> tuple[tuple, tuple]:
    """(outer box, inner exclusion) hugging the ring corridor."""
    outer = (3.5, ARENA_NX - 3.5, 3.5, ARENA_NY - 3.5)
    inner = (7.5, ARENA_NX - 7.5, 7.5, ARENA_NY - 7.5)
    return outer, inner


def build_tracking_eval_env(cfg, distractors: int = 0, control_fps=None,
                            distractor_speed: float = 1.0):
    """Standard eval wiring: population on the corridor band + dilation."""
    from ..envapi import make_env, wrap_time_dilation

    env = make_env(cfg)
    if distractors:
        outer, inner = distractor_band()
        from ..envapi.wrappers import PopulationWrapper

        env = PopulationWrapper(env, distractors, speed=distractor_speed,
                                area=outer, exclusion=inner)
    if control_fps is not None:
        env = wrap_time_dilation(env, control_fps)
    return env


def write_tracking_scenario(out_dir, seed: int = 0, pillars: str = "lattice",
                            name: str = "tracking", **kw) -> str:
    """Write arena scene + task config into out_dir; returns config path."""
    os.makedirs(out_dir, exist_ok=True)
    scene_path = os.path.join(str(out_dir), f"{name}_arena.json")
    save_scene(build_tracking_arena(seed, pillars=pillars), scene_path)
    cfg_path = os.path.join(str(out_dir), f"{name}.json")
    with open(cfg_path, "w", encoding="utf-8") as f:
        json.dump(tracking_eval_config(scene_path, **kw), f, indent=2,
                  sort_keys=True)
    return cfg_path


def write_frequency_study_scenario(out_dir) -> str:
    """Arena for the control-frequency trend: pillars on the ring, random
    tracker starts, a 0.7 m/s slalom target."""
    return write_tracking_scenario(out_dir, pillars="lattice",
                                   name="freq_study", speed=70.0,
                                   advance=300.0, width=240.0,
                                   random_init=True)


def write_distractor_study_scenario(out_dir) -> str:
    """Arena for the distractor trend: clean ring corridor, deterministic
    start, a 1.0 m/s target; all variation comes from the crowd."""
    return write_tracking_scenario(out_dir, pillars="interior",
                                   name="distractor_study", speed=100.0,
                                   advance=200.0, width=200.0,
                                   random_init=False)
