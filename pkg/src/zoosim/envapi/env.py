"""Gym-style task environments over the simulation world.

One Env owns one World for its whole life; reset() rebuilds the scene and
entity population in place so protocol dispatchers keep valid references.
The learner's action is zero-order held across the control interval;
scripted actors act every tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..constants import CM_PER_M, TICK_DT
from ..errors import (ActionTypeError, ConfigError, LifecycleError,
                      NoSuchEntity, OccupiedSpawn)
from ..sensors import (CameraConfig, entity_camera_pose, relative_state,
                       render)
from ..sim.actions import ContinuousMoveAction, DiscreteNavAction
from ..sim.entities import ENTITY_CLASSES, EntityState
from ..sim.motion import heading, position_blocked, wrap_angle
from ..sim.navigate import (CourseController, RandomWalkController,
                            nearest_course_index, ring_course,
                            serpentine_course)
from ..sim.world import World
from ..world.generate import object_mask_color, parse_generator_spec
from ..world.scene import InteractiveObject, scene_from_doc, scene_to_doc
from ..world.planner import shortest_path_length
from .config import TaskConfig
from .rewards import (NavRewardParams, TrackingRewardParams, nav_reward,
                      tracking_reward)


@dataclass
class StepResult:
    observation: dict
    reward: float
    terminated: bool
    truncated: bool
    info: dict

    def as_tuple(self):
        return (self.observation, self.reward, self.terminated,
                self.truncated, self.info)


def _tracking_params(doc: dict) -> TrackingRewardParams:
    return TrackingRewardParams(
        rho_star=float(doc.get("rho_star_cm", 250.0)) / CM_PER_M,
        theta_star=float(doc.get("theta_star", 0.0)),
        rho_max=float(doc.get("rho_max_cm", 600.0)) / CM_PER_M,
        theta_max=float(doc.get("theta_max", 45.0)),
        max_steps=int(doc.get("max_steps", 500)),
        lost_patience=int(doc.get("lost_patience", 50)),
    )


def _nav_params(doc: dict) -> NavRewardParams:
    return NavRewardParams(
        success_dist=float(doc.get("success_dist_cm", 300.0)) / CM_PER_M,
        success_angle=float(doc.get("success_angle", 30.0)),
        dist_floor=float(doc.get("dist_floor_cm", 300.0)),
        angle_norm=float(doc.get("angle_norm", 90.0)),
        max_steps=int(doc.get("max_steps", 2000)),
    )


class Env:
    def __init__(self, config: TaskConfig):
        self.config = config
        self._base_scene_doc = scene_to_doc(self._load_scene(config.scene))
        self.world = World(self._clone_scene(), seed=config.seed)
        self.tracking = config.task == "Tracking"
        if self.tracking:
            self.track_params = _tracking_params(config.reward_params)
        else:
            self.nav_params = _nav_params(config.reward_params)
        self.max_steps = config.max_steps
        self.control_interval = config.interval
        self.jitter_interval = False  # time-dilation "none" mode
        self.episode_index = -1
        self._augment = None
        self._post_reset_hooks = []
        self._done = True
        self._status = {"episode": -1, "step": 0}
        self._last_obs = None
        self._move_table = self._build_move_table()
        self._bounds = self._continuous_bounds()
        self.step_count = 0

    @property
    def unwrapped(self) -> "Env":
        return self

    # -- construction helpers --------------------------------------------------

    @staticmethod
    def _load_scene(spec: str):
        if isinstance(spec, str) and spec.startswith("generator:"):
            return parse_generator_spec(spec)
        from ..world.scene import load_scene

        try:
            return load_scene(spec)
        except OSError as e:
            raise ConfigError(f"scene: cannot load {spec!r} ({e})") from None

    def _clone_scene(self, doc=None):
        return scene_from_doc(doc or self._base_scene_doc)

    def _build_move_table(self):
        spec = self.config.agents["player"]
        if spec.move_action is None:
            return None
        table = dict(DiscreteNavAction.DEFAULT_MOVES)
        names = [DiscreteNavAction.FORWARD, DiscreteNavAction.BACKWARD,
                 DiscreteNavAction.TURN_LEFT, DiscreteNavAction.TURN_RIGHT,
                 DiscreteNavAction.JUMP, DiscreteNavAction.CROUCH,
                 DiscreteNavAction.HOLD]
        for name, (ang, lin_cm) in zip(names, spec.move_action):
            if name == DiscreteNavAction.JUMP:
                continue  # jump keeps its momentum-carry semantics
            table[name] = (float(ang), float(lin_cm) / CM_PER_M)
        return table

    def _continuous_bounds(self):
        mac = self.config.agents["player"].move_action_continuous
        high = (float(mac["high"][0]), float(mac["high"][1]) / CM_PER_M)
        low = (float(mac["low"][0]), float(mac["low"][1]) / CM_PER_M)
        return low, high

    def camera_bindings(self):
        """cam_id -> (entity_id, CameraConfig) for protocol serving."""
        out = {}
        obs = self.config.observation
        for name, spec in self.config.agents.items():
            if spec.cam_id > 0:
                cfg = CameraConfig(
                    width=obs.width, height=obs.height, hfov=obs.hfov,
                    relative_location=tuple(v / CM_PER_M
                                            for v in spec.relative_location),
                    relative_rotation=tuple(spec.relative_rotation),
                    far_clip=obs.far_clip / CM_PER_M, cam_id=spec.cam_id)
                out[spec.cam_id] = (name, cfg)
        return out

    # -- reset -------------------------------------------------------------------

    def _sample_free_pose(self, rng, area):
        x0, x1, y0, y1 = area[:4]
        scene = self.world.scene
        x0 = max(x0, 0.0)
        y0 = max(y0, 0.0)
        x1 = min(x1, scene.nx * scene.cell_size)
        y1 = min(y1, scene.ny * scene.cell_size)
        probe = EntityState(id="__probe", cls=ENTITY_CLASSES["Human"],
                            x=0, y=0, z=0, yaw=0)
        for _ in range(200):
            x = float(rng.uniform(x0, x1))
            y = float(rng.uniform(y0, y1))
            if not position_blocked(scene, probe, x, y,
                                    self.world.entities.values()):
                return x, y
        raise ConfigError("reset_area: no free pose found after 200 draws")

    def _reset_area_m(self):
        if self.config.reset_area is not None:
            return tuple(v / CM_PER_M for v in self.config.reset_area)
        return self.world.scene.reset_area

    def _clamp_to_area(self, p):
        x0, x1, y0, y1 = self._reset_area_m()[:4]
        scene = self.world.scene
        x0 = max(x0, 0.7)
        y0 = max(y0, 0.7)
        x1 = min(x1, scene.nx * scene.cell_size - 0.7)
        y1 = min(y1, scene.ny * scene.cell_size - 0.7)
        return (min(max(p[0], x0), x1), min(max(p[1], y0), y1))

    def reset(self, seed: int | None = None) -> dict:
        if seed is None:
            seed = self.config.seed + self.episode_index + 1
        self.episode_index += 1
        self._seed = int(seed)
        rng = np.random.default_rng([int(seed), 977])
        self._jitter_rng = np.random.default_rng([int(seed), 4441])

        scene_doc = self._base_scene_doc
        illumination = None
        appearance_seed = None
        if self._augment is not None:
            scene_doc, illumination, appearance_seed = \
                self._augment(self._seed, self.episode_index)
        w = self.world
        w.scene = self._clone_scene(scene_doc)
        if illumination is not None:
            w.scene.illumination = illumination
        w.entities.clear()
        w.held_actions.clear()
        w.controllers.clear()
        w.events.clear()
        w.tick_index = 0
        w._color_i = 0

        if self.tracking:
            self._reset_tracking(rng)
        else:
            self._reset_navigation(rng)

        if appearance_seed is not None:
            arng = np.random.default_rng([appearance_seed])
            for eid in sorted(w.entities):
                w.entities[eid].appearance_id = int(arng.integers(0, 8))

        self.step_count = 0
        self._lost_streak = 0
        self._path_length = 0.0
        self._done = False
        self._status = {"episode": self.episode_index, "step": 0,
                        "reward": 0.0, "terminated": False, "truncated": False,
                        "info": {}}
        for hook in self._post_reset_hooks:
            hook(self)
        self._last_obs = self._observe()
        return self._last_obs

    def _spawn_player(self, rng):
        cfg = self.config
        spec = cfg.agents["player"]
        if cfg.random_init:
            if self.tracking:
                x, y = self._sample_free_pose(rng, self._reset_area_m())
            else:
                pick = int(rng.integers(0, len(cfg.safe_start)))
                sx = cfg.safe_start[pick]
                x, y = sx[0] / CM_PER_M, sx[1] / CM_PER_M
            yaw = float(rng.uniform(-180.0, 180.0))
        else:
            sx = cfg.safe_start[0]
            x, y = sx[0] / CM_PER_M, sx[1] / CM_PER_M
            yaw = 0.0
        return self.world.spawn(spec.class_name, x, y, yaw, "player")

    def _reset_tracking(self, rng):
        cfg = self.config
        tspec = cfg.agents.get("target")
        if tspec is None:
            raise ConfigError("agents: tracking needs a 'target' entry")
        target = None
        for _ in range(100):
            player = self._spawn_player(rng)
            hx, hy = heading(player.yaw)
            tx = player.x + hx * self.track_params.rho_star
            ty = player.y + hy * self.track_params.rho_star
            try:
                target = self.world.spawn(tspec.class_name, tx, ty,
                                          player.yaw, "target")
                break
            except (OccupiedSpawn, NoSuchEntity):
                # target spot blocked: resample the player pose
                self.world.destroy("player")
                if not cfg.random_init:
                    raise
        if target is None:
            raise ConfigError("reset_area: no tracker/target placement found")
        speed = tspec.speed / CM_PER_M
        if tspec.policy == "serpentine":
            cp = tspec.course
            course = [self._clamp_to_area(p)
                      for p in serpentine_course(
                          (target.x, target.y), player.yaw,
                          legs=cp["legs"],
                          advance=cp["advance"] / CM_PER_M,
                          width=cp["width"] / CM_PER_M)]
            self.world.controllers["target"] = CourseController(
                "target", course, speed=speed)
        elif tspec.policy == "circuit":
            cp = tspec.course
            course = [self._clamp_to_area(p)
                      for p in ring_course(
                          self._reset_area_m()[:4],
                          advance=cp["advance"] / CM_PER_M,
                          width=cp["width"] / CM_PER_M)]
            ctrl = CourseController("target", course, speed=speed)
            ctrl.course_i = nearest_course_index(course, (target.x, target.y))
            ctrl.set_goal(course[ctrl.course_i])
            self.world.controllers["target"] = ctrl
        elif tspec.policy == "random":
            self.world.controllers["target"] = RandomWalkController(
                "target", self.world.scene,
                np.random.default_rng([self._seed, 55]), speed=speed)
        self._prev_pos = (player.x, player.y)

    def _reset_navigation(self, rng):
        cfg = self.config
        player = self._spawn_player(rng)
        scene = self.world.scene
        if cfg.target_location is not None:
            tx, ty = (cfg.target_location[0] / CM_PER_M,
                      cfg.target_location[1] / CM_PER_M)
        else:
            tx, ty = scene.target_locations[0]
        half = 0.2
        marker = InteractiveObject(
            id="goal", kind="TargetMarker", x=tx, y=ty, yaw=0.0,
            footprint=(tx - half, tx + half, ty - half, ty + half),
            height=2.5, albedo=(0.95, 0.85, 0.1),
            mask_color=object_mask_color(len(scene.objects)))
        scene.objects.append(marker)
        scene.touch()
        self._goal = (tx, ty)
        self._d_prev_cm = math.hypot(tx - player.x, ty - player.y) * CM_PER_M
        self._prev_pos = (player.x, player.y)
        self._start_pos = (player.x, player.y)
        try:
            self._shortest0 = shortest_path_length(
                scene, "pedestrian", self._start_pos, self._goal)
        except Exception:
            self._shortest0 = float("nan")

    # -- observation ---------------------------------------------------------------

    def _goal_rel(self):
        """Navigation: relative state against the goal marker point."""
        player = self.world.entity("player")
        gx, gy = self._goal
        from ..sim.motion import bearing_deg

        dx, dy = gx - player.x, gy - player.y
        rho = math.hypot(dx, dy)
        theta = 0.0 if rho == 0.0 else wrap_angle(bearing_deg(dx, dy)
                                                  - player.yaw)
        gz = self.world.scene.ground_at(gx, gy)
        return rho, theta, gz - player.z

    def _relstate(self):
        if self.tracking:
            rel = relative_state(self.world.entity("player"),
                                 self.world.entity("target"))
            return rel.distance, rel.direction, rel.height
        return self._goal_rel()

    def _observe(self) -> dict:
        obs_spec = self.config.observation
        player = self.world.entity("player")
        obs = {"relative_state": np.array(self._relstate()),
               "step": self.step_count}
        if obs_spec.modalities:
            bindings = self.camera_bindings()
            spec = self.config.agents["player"]
            if spec.cam_id in bindings:
                _, cam_cfg = bindings[spec.cam_id]
                pose = entity_camera_pose(player, cam_cfg)
                others = [e for i, e in self.world.entities.items()
                          if i != "player"]
                for m in obs_spec.modalities:
                    frame = render(self.world.scene, others, pose, cam_cfg, m)
                    obs[m] = frame.to_array()
                    obs.setdefault("frames", {})[m] = frame
        return obs

    # -- step ------------------------------------------------------------------------

    def _coerce_action(self, action):
        if self.tracking:
            if isinstance(action, ContinuousMoveAction):
                a = action
            elif isinstance(action, (tuple, list, np.ndarray)) and len(action) == 2:
                a = ContinuousMoveAction(float(action[0]), float(action[1]))
            else:
                raise ActionTypeError(
                    f"tracking expects (angular, linear), got {action!r}")
            low, high = self._bounds
            return ContinuousMoveAction(
                min(max(a.angular, low[0]), high[0]),
                min(max(a.linear, low[1]), high[1]))
        if isinstance(action, (int, np.integer)):
            try:
                return DiscreteNavAction.ALL[int(action)]
            except IndexError:
                raise ActionTypeError(f"discrete index {action} out of range") \
                    from None
        if isinstance(action, str) and action in DiscreteNavAction.ALL:
            return action
        raise ActionTypeError(
            f"navigation expects a discrete action, got {action!r}")

    def _interval(self) -> int:
        if self.jitter_interval:
            return int(self._jitter_rng.integers(1, 5))
        return self.control_interval

    def step(self, action) -> StepResult:
        if self._done:
            raise LifecycleError("episode finished; call reset()")
        act = self._coerce_action(action)
        w = self.world
        player = w.entity("player")
        interval = self._interval()
        for k in range(interval):
            actions = {}
            for eid, ctrl in sorted(w.controllers.items()):
                if eid in w.entities:
                    actions[eid] = ctrl.action(w)
            actions["player"] = act
            tables = {"player": self._move_table} if self._move_table else None
            w.step(actions, TICK_DT, edge=(k == 0), move_tables=tables)
            self._path_length += math.hypot(player.x - self._prev_pos[0],
                                            player.y - self._prev_pos[1])
            self._prev_pos = (player.x, player.y)

        self.step_count += 1
        rho, theta, h = self._relstate()
        if self.tracking:
            reward, terminated, truncated, info = self._tracking_outcome(
                rho, theta, h)
        else:
            reward, terminated, truncated, info = self._nav_outcome(
                rho, theta, h)
        self._done = terminated or truncated
        self._status = {"episode": self.episode_index, "step": self.step_count,
                        "reward": reward, "terminated": terminated,
                        "truncated": truncated, "info": info}
        self._last_obs = self._observe()
        return StepResult(self._last_obs, reward, terminated, truncated, info)

    def _tracking_outcome(self, rho, theta, h):
        from ..sensors import RelativeState

        p = self.track_params
        reward = tracking_reward(RelativeState(rho, theta, h), p)
        in_region = rho <= p.rho_max and abs(theta) <= p.theta_max
        self._lost_streak = 0 if in_region else self._lost_streak + 1
        terminated = self._lost_streak >= p.lost_patience
        truncated = (not terminated) and self.step_count >= self.max_steps
        success = truncated
        info = {"success": success, "in_region": in_region,
                "lost_streak": self._lost_streak,
                "path_length": self._path_length,
                "relstate": [rho, theta, h]}
        return reward, terminated, truncated, info

    def _nav_outcome(self, rho, theta, h):
        p = self.nav_params
        d_now_cm = rho * CM_PER_M
        reward = nav_reward(self._d_prev_cm, d_now_cm, theta, p)
        self._d_prev_cm = d_now_cm
        success = rho <= p.success_dist and abs(theta) < p.success_angle
        terminated = success
        truncated = (not terminated) and self.step_count >= self.max_steps
        info = {"success": success, "path_length": self._path_length,
                "relstate": [rho, theta, h],
                "shortest_length": self._shortest0}
        return reward, terminated, truncated, info

    # -- remote surface ----------------------------------------------------------------

    def describe(self) -> dict:
        obs = self.config.observation
        if self.tracking:
            low, high = self._bounds
            space = {"type": "continuous", "low": list(low),
                     "high": list(high), "units": ["deg/s", "m/s"]}
        else:
            space = {"type": "discrete", "n": len(DiscreteNavAction.ALL),
                     "names": list(DiscreteNavAction.ALL)}
        return {"env_name": self.config.env_name, "task": self.config.task,
                "action_space": space,
                "modalities": list(obs.modalities),
                "resolution": [obs.width, obs.height],
                "max_steps": self.max_steps,
                "control_interval": self.control_interval,
                "player_cam_id": self.config.agents["player"].cam_id}

    def observe_summary(self) -> dict:
        rel = self._relstate() if self.episode_index >= 0 else (0.0, 0.0, 0.0)
        return {"relstate": list(rel), "step": self.step_count,
                "episode": self.episode_index, "done": self._done}

    def last_status(self) -> dict:
        return self._status

    def step_remote(self, args) -> dict:
        if self.tracking:
            if len(args) != 2:
                raise ActionTypeError("tracking action: <angular> <linear>")
            result = self.step((float(args[0]), float(args[1])))
        else:
            if len(args) != 1:
                raise ActionTypeError("navigation action: <name|index>")
            token = args[0]
            result = self.step(int(token) if token.lstrip("-").isdigit()
                               else token)
        return {"reward": result.reward, "terminated": result.terminated,
                "truncated": result.truncated, "info": result.info}


def make_env(config: TaskConfig) -> Env:
    return Env(config)
