"""Pinhole camera configuration and pose math.

Camera basis at (pitch, yaw, roll) = (0, 0, 0): forward (1, 0, 0),
right (0, -1, 0), up (0, 0, 1) — consistent with the yaw convention of the
sim (yaw 0 faces +x, +y is to the LEFT). Positive pitch looks up; a pitch
of -90 looks straight down (top view). Roll rotates right/up about forward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidModality

MODALITIES = ("color", "mask", "depth", "normal")
MODALITY_CODES = {"color": 0, "mask": 1, "depth": 2, "normal": 3}
MODALITY_NAMES = {v: k for k, v in MODALITY_CODES.items()}
BYTES_PER_PIXEL = {"color": 3, "mask": 3, "depth": 4, "normal": 12}


@dataclass(frozen=True)
class CameraConfig:
    width: int = 320
    height: int = 240
    hfov: float = 90.0
    relative_location: tuple[float, float, float] = (0.0, 0.0, 0.0)  # m, fwd/right/up
    relative_rotation: tuple[float, float, float] = (0.0, 0.0, 0.0)  # pitch/yaw/roll deg
    far_clip: float = 50.0
    cam_id: int = 0

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise InvalidModality("camera resolution must be at least 8x8")
        if not 0.0 < self.hfov < 180.0:
            raise InvalidModality("hfov must be in (0, 180)")
        if not self.far_clip > 0:
            raise InvalidModality("far_clip must be positive")

    def tangents(self) -> tuple[float, float]:
        tan_h = math.tan(math.radians(self.hfov) / 2.0)
        return tan_h, tan_h * self.height / self.width


def camera_basis(pitch: float, yaw: float, roll: float):
    """Forward/right/up unit vectors for a world-frame camera rotation."""
    cp, sp = math.cos(math.radians(pitch)), math.sin(math.radians(pitch))
    cy, sy = math.cos(math.radians(yaw)), math.sin(math.radians(yaw))
    f = np.array([cp * cy, -cp * sy, sp])
    r = np.array([-sy, -cy, 0.0])
    # pitch tilts up toward -f_z ... recompute up as r x f
    u = np.cross(r, f)
    if roll != 0.0:
        cr, sr = math.cos(math.radians(roll)), math.sin(math.radians(roll))
        r, u = cr * r + sr * u, cr * u - sr * r
    return f, r, u


@dataclass(frozen=True)
class CameraPose:
    x: float
    y: float
    z: float
    pitch: float
    yaw: float
    roll: float


def entity_camera_pose(state, config: CameraConfig) -> CameraPose:
    """World pose of an entity-mounted camera.

    relative_location is (forward, right, up) meters from the eye anchor
    (feet + eye_height for ground classes; aerial classes hover at their
    altitude already, so the anchor is the entity origin).
    """
    from ..sim.motion import heading

    hx, hy = heading(state.yaw)
    rx, ry = heading(state.yaw + 90.0)
    fwd, right, up = config.relative_location
    eye = 0.0 if state.cls.aerial else state.cls.eye_height
    x = state.x + hx * fwd + rx * right
    y = state.y + hy * fwd + ry * right
    z = state.z + eye + up
    pitch, ryaw, roll = config.relative_rotation
    return CameraPose(x, y, z, pitch, state.yaw + ryaw, roll)
