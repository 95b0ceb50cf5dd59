"""JSON task configuration.

Distances in config files are centimeters (engine convention) and convert
exactly *0.01 at this boundary; angles are degrees. Continuous move bounds
are [deg/s, cm/s] pairs. See README for the full schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ConfigError
from ..sim.actions import DiscreteNavAction

TASKS = ("Tracking", "Navigation")
TARGET_POLICIES = ("serpentine", "circuit", "random", "static")
MODALITIES = ("color", "mask", "depth", "normal")


def _require(cond, path, msg):
    if not cond:
        raise ConfigError(f"{path}: {msg}")


@dataclass
class AgentSpec:
    class_name: str = "Human"
    cam_id: int = 0                      # 0 = no camera bound
    relative_location: tuple = (20.0, 0.0, 0.0)   # cm fwd/right/up from eye
    relative_rotation: tuple = (0.0, 0.0, 0.0)    # deg pitch/yaw/roll
    move_action: list | None = None      # discrete table [deg/s, cm/s]
    move_action_continuous: dict = field(
        default_factory=lambda: {"high": [30.0, 100.0], "low": [-30.0, -100.0]})
    internal_nav: bool = False
    policy: str = "static"               # scripted agents only
    speed: float = 80.0                  # cm/s, scripted agents
    course: dict = field(default_factory=lambda: {
        "legs": 4, "advance": 200.0, "width": 300.0})  # cm

    def to_doc(self):
        return {
            "class_name": self.class_name,
            "cam_id": self.cam_id,
            "relative_location": list(self.relative_location),
            "relative_rotation": list(self.relative_rotation),
            "move_action": self.move_action,
            "move_action_continuous": self.move_action_continuous,
            "internal_nav": self.internal_nav,
            "policy": self.policy,
            "speed": self.speed,
            "course": self.course,
        }


@dataclass
class ObservationSpec:
    modalities: tuple = ("color", "mask")
    width: int = 320
    height: int = 240
    hfov: float = 90.0
    far_clip: float = 5000.0  # cm

    def to_doc(self):
        return {"modalities": list(self.modalities), "width": self.width,
                "height": self.height, "hfov": self.hfov,
                "far_clip": self.far_clip}


@dataclass
class TaskConfig:
    env_name: str = "task"
    scene: str = "generator:Flat:0:24x24"
    task: str = "Tracking"
    agents: dict = field(default_factory=dict)      # name -> AgentSpec
    observation: ObservationSpec = field(default_factory=ObservationSpec)
    third_cam: dict = field(default_factory=lambda: {
        "cam_id": 0, "pitch": -90.0, "yaw": 0.0, "roll": 0.0,
        "height_top_view": 1460.0, "fov": 90.0})
    safe_start: list = field(default_factory=list)  # [x, y, z] cm
    reset_area: tuple | None = None                 # 6 numbers, cm
    target_location: tuple | None = None            # cm, navigation
    random_init: bool = False
    interval: int = 1                               # control ticks per step
    max_steps: int = 0                              # 0 -> task default
    reward_params: dict = field(default_factory=dict)
    seed: int = 0

    def to_doc(self):
        return {
            "env_name": self.env_name,
            "scene": self.scene,
            "task": self.task,
            "agents": {k: v.to_doc() for k, v in sorted(self.agents.items())},
            "observation": self.observation.to_doc(),
            "third_cam": self.third_cam,
            "safe_start": [list(p) for p in self.safe_start],
            "reset_area": list(self.reset_area) if self.reset_area else None,
            "target_location": list(self.target_location)
                if self.target_location else None,
            "random_init": self.random_init,
            "interval": self.interval,
            "max_steps": self.max_steps,
            "reward_params": self.reward_params,
            "seed": self.seed,
        }


def _parse_agent(name: str, doc: dict) -> AgentSpec:
    path = f"agents.{name}"
    _require(isinstance(doc, dict), path, "must be an object")
    spec = AgentSpec()
    spec.class_name = doc.get("class_name", spec.class_name)
    spec.cam_id = int(doc.get("cam_id", spec.cam_id))
    if "relative_location" in doc:
        loc = doc["relative_location"]
        _require(len(loc) == 3, f"{path}.relative_location", "needs 3 numbers")
        spec.relative_location = tuple(float(v) for v in loc)
    if "relative_rotation" in doc:
        rot = doc["relative_rotation"]
        _require(len(rot) == 3, f"{path}.relative_rotation", "needs 3 numbers")
        spec.relative_rotation = tuple(float(v) for v in rot)
    if doc.get("move_action") is not None:
        table = doc["move_action"]
        _require(isinstance(table, list) and
                 all(len(row) == 2 for row in table),
                 f"{path}.move_action", "must be [[deg/s, cm/s], ...]")
        _require(len(table) <= len(DiscreteNavAction.ALL),
                 f"{path}.move_action",
                 f"at most {len(DiscreteNavAction.ALL)} rows")
        spec.move_action = [[float(a), float(b)] for a, b in table]
    if "move_action_continuous" in doc:
        mac = doc["move_action_continuous"]
        _require(isinstance(mac, dict) and "high" in mac and "low" in mac,
                 f"{path}.move_action_continuous", "needs high and low")
        high, low = mac["high"], mac["low"]
        _require(len(high) == len(low) == 2,
                 f"{path}.move_action_continuous", "bounds need 2 components")
        _require(all(h > l for h, l in zip(high, low)),
                 f"{path}.move_action_continuous",
                 "high must exceed low componentwise")
        spec.move_action_continuous = {"high": [float(v) for v in high],
                                       "low": [float(v) for v in low]}
    spec.internal_nav = bool(doc.get("internal_nav", False))
    spec.policy = doc.get("policy", "static")
    _require(spec.policy in TARGET_POLICIES, f"{path}.policy",
             f"must be one of {TARGET_POLICIES}")
    spec.speed = float(doc.get("speed", spec.speed))
    if "course" in doc:
        c = doc["course"]
        _require(isinstance(c, dict), f"{path}.course", "must be an object")
        spec.course = {"legs": int(c.get("legs", 4)),
                       "advance": float(c.get("advance", 200.0)),
                       "width": float(c.get("width", 300.0))}
    return spec


def parse_config(doc: dict) -> TaskConfig:
    _require(isinstance(doc, dict), "$", "config must be a JSON object")
    cfg = TaskConfig()
    cfg.env_name = doc.get("env_name", cfg.env_name)
    cfg.scene = doc.get("scene", cfg.scene)
    cfg.task = doc.get("task", cfg.task)
    _require(cfg.task in TASKS, "task", f"must be one of {TASKS}")

    agents_doc = doc.get("agents", {"player": {}})
    _require(isinstance(agents_doc, dict) and agents_doc,
             "agents", "must be a non-empty object")
    _require("player" in agents_doc, "agents", "needs a 'player' entry")
    cfg.agents = {name: _parse_agent(name, a) for name, a in agents_doc.items()}

    obs = doc.get("observation", {})
    spec = ObservationSpec()
    if "modalities" in obs:
        mods = tuple(obs["modalities"])
        _require(all(m in MODALITIES for m in mods),
                 "observation.modalities", f"must be among {MODALITIES}")
        spec.modalities = mods
    spec.width = int(obs.get("width", spec.width))
    spec.height = int(obs.get("height", spec.height))
    _require(spec.width >= 8 and spec.height >= 8,
             "observation", "resolution must be at least 8x8")
    spec.hfov = float(obs.get("hfov", spec.hfov))
    spec.far_clip = float(obs.get("far_clip", spec.far_clip))
    cfg.observation = spec

    if "third_cam" in doc:
        cfg.third_cam = doc["third_cam"]

    cfg.safe_start = [tuple(float(v) for v in p)
                      for p in doc.get("safe_start", [])]
    _require(bool(cfg.safe_start), "safe_start", "must be non-empty")
    for i, p in enumerate(cfg.safe_start):
        _require(len(p) == 3, f"safe_start[{i}]", "needs [x, y, z] cm")

    if doc.get("reset_area") is not None:
        ra = doc["reset_area"]
        _require(len(ra) == 6, "reset_area", "needs 6 numbers (cm)")
        cfg.reset_area = tuple(float(v) for v in ra)
    if doc.get("target_location") is not None:
        tl = doc["target_location"]
        _require(len(tl) in (2, 3), "target_location", "needs [x, y(, z)] cm")
        cfg.target_location = tuple(float(v) for v in tl)

    cfg.random_init = bool(doc.get("random_init", False))
    cfg.interval = int(doc.get("interval", 1))
    _require(cfg.interval >= 1, "interval", "must be >= 1")
    cfg.max_steps = int(doc.get("max_steps", 0))
    default_max = 500 if cfg.task == "Tracking" else 2000
    if cfg.max_steps <= 0:
        cfg.max_steps = default_max
    cfg.reward_params = dict(doc.get("reward_params", {}))
    cfg.seed = int(doc.get("seed", 0))
    return cfg


def load_config(path) -> TaskConfig:
    with open(path, encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"$: invalid JSON ({e})") from None
    return parse_config(doc)


def dump_config(cfg: TaskConfig) -> str:
    return json.dumps(cfg.to_doc(), sort_keys=True, indent=2)
