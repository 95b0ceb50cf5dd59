from .actions import (ContinuousMoveAction, DiscreteNavAction, SimClock,
                      control_interval_for_fps)
from .entities import ENTITY_CLASSES, EntityClass, EntityState, Stance
from .motion import (bearing_deg, heading, position_blocked, step_entity,
                     wrap_angle)
from .navigate import (CourseController, NavController, RandomWalkController,
                       builtin_navigate, random_walk_policy, serpentine_course,
                       steer_to)
from .world import World

__all__ = [
    "ContinuousMoveAction", "DiscreteNavAction", "SimClock",
    "control_interval_for_fps", "ENTITY_CLASSES", "EntityClass", "EntityState",
    "Stance", "bearing_deg", "heading", "position_blocked", "step_entity",
    "wrap_angle", "CourseController", "NavController", "RandomWalkController",
    "builtin_navigate", "random_walk_policy", "serpentine_course", "steer_to",
    "World",
]
