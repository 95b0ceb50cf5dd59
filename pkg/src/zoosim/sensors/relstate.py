"""Ground-truth relative state and mask-derived bounding boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidModality
from ..sim.motion import bearing_deg, wrap_angle
from .render import Frame


@dataclass(frozen=True)
class RelativeState:
    distance: float   # rho, planar meters
    direction: float  # theta, degrees in (-180, 180], + when target is right
    height: float     # target z - observer z, meters

    def as_tuple(self):
        return (self.distance, self.direction, self.height)


def relative_state(observer, target) -> RelativeState:
    dx = target.x - observer.x
    dy = target.y - observer.y
    rho = math.hypot(dx, dy)
    if rho == 0.0:
        theta = 0.0
    else:
        theta = wrap_angle(bearing_deg(dx, dy) - observer.yaw)
    return RelativeState(rho, theta, target.z - observer.z)


@dataclass(frozen=True)
class BBox:
    x_min: int
    y_min: int
    x_max: int
    y_max: int

    @property
    def width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def height(self) -> int:
        return self.y_max - self.y_min + 1

    def center(self) -> tuple[float, float]:
        return ((self.x_min + self.x_max) / 2.0,
                (self.y_min + self.y_max) / 2.0)


def bbox_from_mask(frame: Frame, color) -> BBox | None:
    """Tight box over exactly-matching pixels; None when the color is absent."""
    if frame.modality != "mask":
        raise InvalidModality(f"expected a mask frame, got {frame.modality}")
    img = frame.to_array()
    match = (img == np.array(color, dtype=np.uint8)).all(axis=2)
    ys, xs = np.nonzero(match)
    if xs.size == 0:
        return None
    return BBox(int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max()))
