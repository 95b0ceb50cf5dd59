"""Baseline policies: PID tracker, state-based expert, random, oracle nav.

The PID tracker servos on the target's mask bounding box: angular from the
horizontal offset of the box center, linear from the box height against
the height expected at the 2.5 m set distance. When the target is absent
it rotates toward the side it last saw at full rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..envapi.rewards import TrackingRewardParams
from ..sensors import bbox_from_mask
from ..sensors.render import Frame
from ..sim.actions import ContinuousMoveAction, DiscreteNavAction
from ..sim.motion import bearing_deg, wrap_angle
from ..world.planner import find_path
from ..errors import NoPath


@dataclass
class PIDGains:
    kp: float = 1.2
    ki: float = 0.0
    kd: float = 0.3


class PID:
    def __init__(self, gains: PIDGains):
        self.g = gains
        self.reset()

    def reset(self):
        self._i = 0.0
        self._prev = None

    def update(self, err: float) -> float:
        self._i += err
        d = 0.0 if self._prev is None else err - self._prev
        self._prev = err
        return self.g.kp * err + self.g.ki * self._i + self.g.kd * d


class HoldPolicy:
    def act(self, obs):
        return (0.0, 0.0)


class RandomTrackerPolicy:
    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def reset(self, env, obs):
        pass

    def act(self, obs):
        return (float(self.rng.uniform(-30, 30)),
                float(self.rng.uniform(-1, 1)))


class PIDTrackerPolicy:
    """Mask-driven tracker; needs the env to query the target's mask color."""

    def __init__(self, gains: PIDGains | None = None):
        self.gains = gains or PIDGains()
        self.pid_ang = PID(self.gains)
        self.pid_lin = PID(self.gains)
        self.target_color = None
        self.expected_h = None
        self.last_side = 1.0

    def reset(self, env, obs):
        base = env.unwrapped if hasattr(env, "unwrapped") else env
        target = base.world.entity("target")
        self.target_color = target.mask_color
        obs_spec = base.config.observation
        tan_v = math.tan(math.radians(obs_spec.hfov) / 2.0) \
            * obs_spec.height / obs_spec.width
        rho_star = base.track_params.rho_star
        self.expected_h = (target.cls.height /
                           (2.0 * rho_star * tan_v)) * obs_spec.height
        self.pid_ang.reset()
        self.pid_lin.reset()
        self.last_side = 1.0

    def act(self, obs):
        mask = obs.get("frames", {}).get("mask")
        if mask is None and "mask" in obs:
            arr = np.ascontiguousarray(obs["mask"], dtype=np.uint8)
            mask = Frame("mask", arr.shape[1], arr.shape[0], arr.tobytes())
        if mask is None:
            return (0.0, 0.0)
        box = bbox_from_mask(mask, self.target_color)
        if box is None:
            return (30.0 * self.last_side, 0.0)
        cx, _ = box.center()
        half_w = mask.width / 2.0
        err_x = (cx - half_w) / half_w          # -1 .. 1, + means right
        if abs(err_x) > 0.05:
            self.last_side = 1.0 if err_x > 0 else -1.0
        err_h = (self.expected_h - box.height) / self.expected_h
        ang = self.pid_ang.update(err_x) * 30.0
        lin = self.pid_lin.update(err_h) * 1.0
        return (float(np.clip(ang, -30, 30)), float(np.clip(lin, -1, 1)))


# perturbation levels: (gaussian stddev on normalized action,
#                       probability of a uniform random action)
PERTURBATION_LEVELS = {
    0: (0.0, 0.0),
    1: (0.15, 0.12),
    2: (0.45, 0.40),
    3: (1.00, 0.75),
}


@dataclass(frozen=True)
class PerturbationLevel:
    level: int

    @property
    def noise_std(self) -> float:
        return PERTURBATION_LEVELS[self.level][0]

    @property
    def random_prob(self) -> float:
        return PERTURBATION_LEVELS[self.level][1]


def expert_tracker(rel, level: PerturbationLevel,
                   rng: np.random.Generator,
                   params: TrackingRewardParams = TrackingRewardParams()
                   ) -> ContinuousMoveAction:
    """Proportional controller on ground truth, then perturbed."""
    rho, theta = rel[0], rel[1]
    ang = 2.0 * theta
    lin = 1.5 * (rho - params.rho_star)
    if level.random_prob > 0 and rng.random() < level.random_prob:
        ang = float(rng.uniform(-30.0, 30.0))
        lin = float(rng.uniform(-1.0, 1.0))
    if level.noise_std > 0:
        ang += float(rng.normal(0.0, level.noise_std * 30.0))
        lin += float(rng.normal(0.0, level.noise_std * 1.0))
    return ContinuousMoveAction(ang, lin)


class ExpertTrackerPolicy:
    def __init__(self, level: int = 0, seed: int = 0):
        self.level = PerturbationLevel(level)
        self.seed = seed
        self.rng = np.random.default_rng([seed, level])

    def reset(self, env, obs):
        # keyed on the episode's reset seed so stored runs replay exactly
        episode_seed = int(getattr(env.unwrapped, "_seed", 0))
        self.rng = np.random.default_rng([self.seed, self.level.level,
                                          episode_seed])

    def act(self, obs):
        rel = obs["relative_state"]
        return expert_tracker(rel, self.level, self.rng)


class OracleNavigatorPolicy:
    """Follows the planner toward the goal, then turns to face it."""

    ALIGN_TOLERANCE = 7.0  # degrees

    def reset(self, env, obs):
        base = env.unwrapped if hasattr(env, "unwrapped") else env
        self.base = base
        self.goal = base._goal

    def _heading_err(self, state, tx, ty):
        return wrap_angle(bearing_deg(tx - state.x, ty - state.y) - state.yaw)

    def act(self, obs):
        base = self.base
        state = base.world.entity("player")
        rel = obs["relative_state"]
        rho, theta = float(rel[0]), float(rel[1])
        if rho <= base.nav_params.success_dist:
            # close enough: align to the goal for the orientation predicate
            if abs(theta) >= base.nav_params.success_angle:
                return DiscreteNavAction.TURN_RIGHT if theta > 0 \
                    else DiscreteNavAction.TURN_LEFT
            return DiscreteNavAction.HOLD
        try:
            path = find_path(base.world.scene, state.cls,
                             (state.x, state.y), self.goal)
        except NoPath:
            return DiscreteNavAction.HOLD
        wps = path.waypoints
        tx, ty = wps[1] if len(wps) > 1 else wps[0]
        err = self._heading_err(state, tx, ty)
        if abs(err) > self.ALIGN_TOLERANCE:
            return DiscreteNavAction.TURN_RIGHT if err > 0 \
                else DiscreteNavAction.TURN_LEFT
        return DiscreteNavAction.FORWARD
