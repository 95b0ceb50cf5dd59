"""Playable entity classes and per-entity state."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class EntityClass:
    kind: str
    radius: float        # meters, collision circle
    eye_height: float    # meters above feet (aerial: hover altitude)
    height: float        # meters, body cylinder for rendering/collision
    max_linear: float    # m/s
    max_angular: float   # deg/s
    can_crouch: bool
    can_jump: bool
    planner_group: str   # pedestrian | vehicle | aerial

    @property
    def aerial(self) -> bool:
        return self.planner_group == "aerial"


ENTITY_CLASSES = {
    "Human": EntityClass("Human", 0.30, 1.60, 1.80, 1.0, 30.0, True, True, "pedestrian"),
    "Animal": EntityClass("Animal", 0.35, 0.90, 1.00, 1.2, 60.0, False, True, "pedestrian"),
    "RobotDog": EntityClass("RobotDog", 0.30, 0.50, 0.60, 1.0, 90.0, True, True, "pedestrian"),
    "Vehicle": EntityClass("Vehicle", 0.90, 1.40, 1.60, 5.0, 45.0, False, False, "vehicle"),
    "Motorbike": EntityClass("Motorbike", 0.50, 1.30, 1.40, 6.0, 60.0, False, False, "vehicle"),
    "Drone": EntityClass("Drone", 0.40, 1.50, 0.30, 3.0, 90.0, False, False, "aerial"),
    "FlyingCamera": EntityClass("FlyingCamera", 0.20, 2.00, 0.20, 5.0, 120.0, False, False, "aerial"),
}


class Stance:
    STAND = "stand"
    CROUCH = "crouch"
    AIRBORNE = "airborne"
    CLIMB = "climb"


@dataclass
class EntityState:
    id: str
    cls: EntityClass
    x: float
    y: float
    z: float
    yaw: float                     # degrees in (-180, 180]
    stance: str = Stance.STAND
    linear_v: float = 0.0          # m/s
    angular_v: float = 0.0         # deg/s
    mask_color: tuple[int, int, int] = (0, 0, 0)
    appearance_id: int = 0
    # stance-machine bookkeeping
    airborne_ticks: int = 0
    crouch_ticks: int = 0
    hold_streak: int = 0
    consecutive_jumps: int = 0

    @property
    def position(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def body_height(self) -> float:
        if self.stance == Stance.CROUCH:
            return min(self.cls.height, 0.9)
        return self.cls.height

    def state_doc(self) -> dict:
        """Canonical dict for digests and determinism checks."""
        return {
            "id": self.id, "class": self.cls.kind,
            "x": self.x, "y": self.y, "z": self.z, "yaw": self.yaw,
            "stance": self.stance, "lin": self.linear_v, "ang": self.angular_v,
            "mask": list(self.mask_color), "appearance": self.appearance_id,
            "air": self.airborne_ticks, "crouch": self.crouch_ticks,
            "hold": self.hold_streak, "jumps": self.consecutive_jumps,
        }
