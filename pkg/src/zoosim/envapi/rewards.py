"""Task reward functions and their parameter records.

Tracking: r = 1 - |rho - rho*|/rho_max - |theta - theta*|/theta_max,
clamped to [-1, 1]; optimum at rho* = 2.5 m, theta* = 0. The normalizers
tie to the default 90-degree camera: rho_max 6 m, theta_max 45 degrees.

Navigation (distances in cm, angles in degrees):
r = tanh((d_prev - d_now)/max(d_prev, 300) - |ori_err|/90).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ConfigError


@dataclass(frozen=True)
class TrackingRewardParams:
    rho_star: float = 2.5     # meters
    theta_star: float = 0.0   # degrees
    rho_max: float = 6.0      # meters
    theta_max: float = 45.0   # degrees
    max_steps: int = 500
    lost_patience: int = 50   # consecutive out-of-region steps -> failure

    def __post_init__(self):
        if not (self.rho_max > self.rho_star > 0):
            raise ConfigError("reward_params: need rho_max > rho_star > 0")
        if not self.theta_max > 0:
            raise ConfigError("reward_params: need theta_max > 0")


@dataclass(frozen=True)
class NavRewardParams:
    success_dist: float = 3.0    # meters
    success_angle: float = 30.0  # degrees
    dist_floor: float = 300.0    # cm; denominator floor
    angle_norm: float = 90.0     # degrees
    max_steps: int = 2000


def tracking_reward(rel, p: TrackingRewardParams) -> float:
    r = 1.0 - abs(rel.distance - p.rho_star) / p.rho_max \
        - abs(rel.direction - p.theta_star) / p.theta_max
    return min(1.0, max(-1.0, r))


def nav_reward(d_prev_cm: float, d_now_cm: float, ori_err_deg: float,
               p: NavRewardParams = NavRewardParams()) -> float:
    progress = (d_prev_cm - d_now_cm) / max(d_prev_cm, p.dist_floor)
    return math.tanh(progress - abs(ori_err_deg) / p.angle_norm)
