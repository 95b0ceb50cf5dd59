"""Toolkit wrappers: population control, time dilation, augmentation.

Wrappers delegate attribute access to the wrapped env, so they compose in
any order and remote serving keeps working through the innermost Env.
"""

from __future__ import annotations

import numpy as np

from ..errors import SpawnSpaceExhausted, OccupiedSpawn
from ..sim.actions import control_interval_for_fps
from ..sim.navigate import RandomWalkController
from ..world.generate import generate_scene
from ..world.scene import scene_to_doc
from .env import Env


class EnvWrapper:
    def __init__(self, env):
        self.env = env

    def __getattr__(self, name):
        return getattr(self.env, name)

    def reset(self, seed=None):
        return self.env.reset(seed)

    def step(self, action):
        return self.env.step(action)

    @property
    def unwrapped(self) -> Env:
        inner = self.env
        while isinstance(inner, EnvWrapper):
            inner = inner.env
        return inner


class PopulationWrapper(EnvWrapper):
    """Spawns N wandering Human distractors inside reset_area per episode.

    `area` overrides the spawn/waypoint box (defaults to reset_area);
    `exclusion` carves an inner box out of it, giving an annulus for
    corridor-style scenes.
    """

    def __init__(self, env, n: int, speed: float = 0.8, area=None,
                 exclusion=None):
        super().__init__(env)
        self.n = int(n)
        self.speed = speed
        self.area = area
        self.exclusion = exclusion
        base = self.unwrapped
        if self.n > 0:
            base._post_reset_hooks.append(self._populate)

    def _inside_exclusion(self, x, y) -> bool:
        if self.exclusion is None:
            return False
        x0, x1, y0, y1 = self.exclusion[:4]
        return x0 <= x <= x1 and y0 <= y <= y1

    def _populate(self, base: Env) -> None:
        rng = np.random.default_rng([base._seed, 7211])
        area = self.area or base._reset_area_m()
        placed = 0
        attempts = 0
        while placed < self.n:
            attempts += 1
            if attempts > 200 * self.n + 200:
                raise SpawnSpaceExhausted(
                    f"placed {placed}/{self.n} distractors")
            x = float(rng.uniform(max(area[0], 0.0), area[1]))
            y = float(rng.uniform(max(area[2], 0.0), area[3]))
            if self._inside_exclusion(x, y):
                continue
            yaw = float(rng.uniform(-180.0, 180.0))
            eid = f"distractor_{placed}"
            try:
                base.world.spawn("Human", x, y, yaw, eid,
                                 appearance_id=placed % 8)
            except OccupiedSpawn:
                continue
            base.world.controllers[eid] = RandomWalkController(
                eid, base.world.scene,
                np.random.default_rng([base._seed, 7333, placed]),
                speed=self.speed, area=area, exclusion=self.exclusion)
            placed += 1

    def unwrap(self) -> Env:
        base = self.unwrapped
        if self._populate in base._post_reset_hooks:
            base._post_reset_hooks.remove(self._populate)
        for eid in list(base.world.entities):
            if eid.startswith("distractor_"):
                base.world.destroy(eid)
        return self.env


class TimeDilationWrapper(EnvWrapper):
    """Sets the control interval from a target control frequency.

    control_fps None/'none' emulates uncontrolled wall-clock jitter with a
    per-step random interval in {1..4}; world dynamics per sim-second are
    unchanged either way.
    """

    def __init__(self, env, control_fps):
        super().__init__(env)
        base = self.unwrapped
        interval = control_interval_for_fps(control_fps)
        if interval == 0:
            base.jitter_interval = True
        else:
            base.jitter_interval = False
            base.control_interval = interval


class AugmentationWrapper(EnvWrapper):
    """Reseeds albedos, illumination, appearances (and optionally layout)
    deterministically from (seed, episode index) on every reset."""

    def __init__(self, env, illumination_range=(0.5, 1.5), reseed_albedo=True,
                 reshuffle_appearance=True, layout: bool = False, seed: int = 0):
        super().__init__(env)
        self.illumination_range = illumination_range
        self.reseed_albedo = reseed_albedo
        self.reshuffle_appearance = reshuffle_appearance
        self.layout = layout
        self.seed = int(seed)
        base = self.unwrapped
        self._gen_params = self._parse_gen(base.config.scene)
        base._augment = self._augment

    @staticmethod
    def _parse_gen(spec: str):
        if isinstance(spec, str) and spec.startswith("generator:"):
            _, kind, seed, dims = spec.split(":")
            nx, ny = dims.lower().split("x")
            return kind, int(seed), int(nx), int(ny)
        return None

    def _augment(self, episode_seed: int, episode_index: int):
        rng = np.random.default_rng([self.seed, episode_index, 31337])
        if self.layout and self._gen_params is not None:
            kind, _, nx, ny = self._gen_params
            layout_seed = int(rng.integers(0, 2**31 - 1))
            doc = scene_to_doc(generate_scene(kind, layout_seed, nx, ny))
        else:
            doc = dict(self.unwrapped._base_scene_doc)
        if self.reseed_albedo:
            doc = dict(doc)
            doc["palette"] = {
                k: [float(c) for c in rng.uniform(0.15, 0.9, size=3)]
                for k in sorted(doc["palette"])}
        lo, hi = self.illumination_range
        illumination = float(rng.uniform(lo, hi)) if hi > lo else float(lo)
        appearance_seed = int(rng.integers(0, 2**31 - 1)) \
            if self.reshuffle_appearance else None
        return doc, illumination, appearance_seed


def wrap_population(env, n: int) -> PopulationWrapper:
    return PopulationWrapper(env, n)


def wrap_time_dilation(env, control_fps) -> TimeDilationWrapper:
    return TimeDilationWrapper(env, control_fps)


def wrap_augmentation(env, ranges=None, seed: int = 0) -> AugmentationWrapper:
    ranges = ranges or {}
    return AugmentationWrapper(
        env,
        illumination_range=tuple(ranges.get("illumination", (0.5, 1.5))),
        reseed_albedo=bool(ranges.get("albedo", True)),
        reshuffle_appearance=bool(ranges.get("appearance", True)),
        layout=bool(ranges.get("layout", False)),
        seed=seed)
