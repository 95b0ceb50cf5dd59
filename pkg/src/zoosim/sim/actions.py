"""Action types and the simulation clock."""

from __future__ import annotations

from dataclasses import dataclass

from ..constants import BASE_TICK_RATE, TICK_DT


class DiscreteNavAction:
    FORWARD = "Forward"
    BACKWARD = "Backward"
    TURN_LEFT = "TurnLeft"
    TURN_RIGHT = "TurnRight"
    JUMP = "Jump"
    CROUCH = "Crouch"
    HOLD = "Hold"

    ALL = (FORWARD, BACKWARD, TURN_LEFT, TURN_RIGHT, JUMP, CROUCH, HOLD)

    # index -> (angular deg/s, linear m/s); Jump carries prior momentum
    DEFAULT_MOVES = {
        FORWARD: (0.0, 1.0),
        BACKWARD: (0.0, -1.0),
        TURN_LEFT: (-15.0, 0.0),
        TURN_RIGHT: (15.0, 0.0),
        CROUCH: (0.0, 0.0),
        HOLD: (0.0, 0.0),
    }


ANGULAR_BOUND = 30.0  # deg/s
LINEAR_BOUND = 1.0    # m/s


@dataclass(frozen=True)
class ContinuousMoveAction:
    angular: float  # deg/s, clamped to [-30, 30]
    linear: float   # m/s, clamped to [-1, 1]

    def __post_init__(self):
        object.__setattr__(self, "angular",
                           min(max(float(self.angular), -ANGULAR_BOUND), ANGULAR_BOUND))
        object.__setattr__(self, "linear",
                           min(max(float(self.linear), -LINEAR_BOUND), LINEAR_BOUND))


def control_interval_for_fps(control_fps) -> int:
    """Ticks per control step; None/'none' means jittered (caller decides)."""
    if control_fps in (None, "none"):
        return 0
    interval = round(BASE_TICK_RATE / float(control_fps))
    return max(1, int(interval))


@dataclass
class SimClock:
    tick_index: int = 0
    tick_dt: float = TICK_DT
    control_interval: int = 1

    def advance(self, n: int = 1) -> None:
        self.tick_index += n
