"""Tunable locomotion / timing constants.

Jump, climb and clearance geometry is not dictated by any external source;
the values below were chosen so that ObstacleField scenes exercise all four
locomotion modes (walk, crouch, jump, climb). Revise here, nowhere else.
"""

BASE_TICK_RATE = 30
TICK_DT = 1.0 / BASE_TICK_RATE

# vertical geometry (meters)
STEP_HEIGHT = 0.3           # max walkable rise between adjacent cells
JUMP_CLEARANCE = 0.5        # max rise while airborne
JUMP_BOOST = 0.5            # z offset added during the airborne phase
CLIMB_MAX_RISE = 2.0        # max rise of a climbable face
CROUCH_MIN_CLEARANCE = 0.9  # crouched passage needs clearance in [0.9, 1.7)
STAND_MIN_CLEARANCE = 1.7

# stance timing (ticks at 30 Hz)
JUMP_AIR_TICKS = 12             # 0.4 s airborne per jump
CROUCH_AUTO_STAND_TICKS = 60    # 2 s, then stand up if clearance allows
HOLD_TICKS_TO_STAND = 2

# built-in navigation
WAYPOINT_TOLERANCE = 0.3        # meters; waypoint considered reached
GOAL_TOLERANCE = 0.3
REPLAN_OFFPATH_DIST = 1.5
DISTRACTOR_REPICK_MIN_S = 5.0
DISTRACTOR_REPICK_MAX_S = 15.0

CM_PER_M = 100.0

# wire protocol
PAYLOAD_CAP = 16 * 1024 * 1024
REQUEST_MAGIC = b"UZP1"
RESPONSE_MAGIC = b"UZR1"
