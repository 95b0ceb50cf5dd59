"""Text command vocabulary and dispatch.

One line per path (arguments in <>, optional in []):

  vget /env/name                          scene name
  vget /env/info                          world summary JSON
  vget /env/scene                         scene document JSON
  vget /env/objects                       objects (id, kind, state, mask_color)
  vget /env/object/<id>/state             door state
  vset /env/object/<id>/state <open|closed>
  vset /env/spawn <class> <id> <x> <y> [yaw]      meters/degrees
  vset /env/destroy <id>
  vset /env/tick [n]                      advance n sim ticks (held actions)
  vget /env/tick                          current tick index
  vset /agent/<id>/move <ang> <lin>       held continuous action (deg/s, m/s)
  vset /agent/<id>/action <name|index>    held discrete action
  vget /agent/<id>/pose                   "x y z yaw"
  vset /agent/<id>/pose <x> <y> <yaw>     teleport
  vget /agent/<id>/relstate <other_id>    "rho theta height"
  vget /agent/<id>/mask_color             "r g b"
  vget /camera/<cam_id>/<modality> [WxH]  frame payload (color|mask|depth|normal)

Task mode (server started with a task config):

  vget /env/task                          task metadata JSON
  vset /env/reset [seed]                  reset episode, returns obs JSON
  vset /env/action <a...>                 apply learner action, step result JSON
  vget /env/obs                           observation summary JSON
  vget /env/status                        last step result JSON

Unknown or failing commands answer with "error: <Kind>: <message>" and turn
the batch status to partial; other items are unaffected.
"""

from __future__ import annotations

import json

from ..errors import ZoosimError
from ..sensors import (CameraConfig, CameraPose, entity_camera_pose, render,
                       relative_state)
from ..sim.actions import ContinuousMoveAction, DiscreteNavAction
from ..world.scene import scene_to_doc, set_object_state


def _fmt(x: float) -> str:
    return repr(float(x))


class Dispatcher:
    """Executes commands against a world (and optionally a task env)."""

    def __init__(self, world, env=None, resolution=(320, 240)):
        self.world = world
        self.env = env
        self.resolution = resolution
        # cam_id -> ("entity", id, CameraConfig) | ("fixed", CameraPose, cfg)
        self.cameras: dict[int, tuple] = {}
        self._next_cam = 1
        cx = world.scene.nx * world.scene.cell_size / 2.0
        cy = world.scene.ny * world.scene.cell_size / 2.0
        top = CameraPose(cx, cy, 14.6, -90.0, 0.0, 0.0)
        self.cameras[0] = ("fixed", top, self._cfg(0))

    def _cfg(self, cam_id: int, width=None, height=None) -> CameraConfig:
        return CameraConfig(width=width or self.resolution[0],
                            height=height or self.resolution[1],
                            cam_id=cam_id)

    def register_entity_camera(self, entity_id: str,
                               config: CameraConfig) -> int:
        cam_id = config.cam_id if config.cam_id > 0 else self._next_cam
        self.cameras[cam_id] = ("entity", entity_id, config)
        self._next_cam = max(self._next_cam, cam_id) + 1
        return cam_id

    # -- entry point ---------------------------------------------------------

    def execute(self, command: str):
        """Returns a payload (str or Frame); raises ZoosimError on failure."""
        tokens = command.strip().split()
        if len(tokens) < 2 or tokens[0] not in ("vget", "vset"):
            raise ZoosimError(f"unparseable command {command!r}")
        verb, path, args = tokens[0], tokens[1], tokens[2:]
        seg = [s for s in path.split("/") if s]
        if not seg:
            raise ZoosimError(f"empty path in {command!r}")
        if seg[0] == "env":
            return self._env_cmd(verb, seg, args)
        if seg[0] == "agent":
            return self._agent_cmd(verb, seg, args)
        if seg[0] == "camera":
            return self._camera_cmd(verb, seg, args)
        raise ZoosimError(f"unknown path /{seg[0]}")

    def execute_batch(self, commands: list[str]):
        """Returns (status, items). Caller holds the world lock."""
        items = []
        failed = 0
        for cmd in commands:
            try:
                items.append(self.execute(cmd))
            except ZoosimError as e:
                items.append(f"error: {type(e).__name__}: {e}")
                failed += 1
            except Exception as e:  # defensive: never kill the batch
                items.append(f"error: {type(e).__name__}: {e}")
                failed += 1
        status = 0 if failed == 0 else 1
        return status, items

    # -- /env ------------------------------------------------------------------

    def _env_cmd(self, verb, seg, args):
        w = self.world
        sub = seg[1] if len(seg) > 1 else ""
        if verb == "vget" and sub == "name":
            return w.scene.name
        if verb == "vget" and sub == "info":
            return json.dumps({
                "name": w.scene.name,
                "nx": w.scene.nx, "ny": w.scene.ny,
                "cell_size": w.scene.cell_size,
                "tick": w.tick_index,
                "entities": sorted(w.entities),
                "cameras": {str(k): (v[1] if v[0] == "entity" else "fixed")
                            for k, v in sorted(self.cameras.items())},
                "task": bool(self.env is not None),
            }, sort_keys=True)
        if verb == "vget" and sub == "scene":
            return json.dumps(scene_to_doc(w.scene), sort_keys=True)
        if verb == "vget" and sub == "objects":
            return json.dumps([
                {"id": o.id, "kind": o.kind, "state": o.state,
                 "mask_color": list(o.mask_color)}
                for o in w.scene.objects], sort_keys=True)
        if sub == "object" and len(seg) == 4 and seg[3] == "state":
            obj_id = seg[2]
            if verb == "vget":
                return str(w.scene.find_object(obj_id).state)
            if not args:
                raise ZoosimError("missing state argument")
            set_object_state(w.scene, obj_id, args[0])
            return "ok"
        if verb == "vset" and sub == "spawn":
            if len(args) < 4:
                raise ZoosimError("usage: vset /env/spawn <class> <id> <x> <y> [yaw]")
            yaw = float(args[4]) if len(args) > 4 else 0.0
            st = w.spawn(args[0], float(args[2]), float(args[3]), yaw, args[1])
            self.register_entity_camera(st.id, self._cfg(self._next_cam))
            return "ok"
        if verb == "vset" and sub == "destroy":
            w.destroy(args[0])
            return "ok"
        if sub == "tick":
            if verb == "vget":
                return str(w.tick_index)
            n = int(args[0]) if args else 1
            w.tick(n)
            return f"ok {w.tick_index}"
        if self.env is not None:
            if verb == "vget" and sub == "task":
                return json.dumps(self.env.describe(), sort_keys=True)
            if verb == "vset" and sub == "reset":
                seed = int(args[0]) if args else None
                self.env.reset(seed)
                return json.dumps(self.env.observe_summary(), sort_keys=True)
            if verb == "vset" and sub == "action":
                result = self.env.step_remote(args)
                return json.dumps(result, sort_keys=True)
            if verb == "vget" and sub == "obs":
                return json.dumps(self.env.observe_summary(), sort_keys=True)
            if verb == "vget" and sub == "status":
                return json.dumps(self.env.last_status(), sort_keys=True)
        raise ZoosimError(f"unknown env command {verb} /{'/'.join(seg)}")

    # -- /agent ------------------------------------------------------------------

    def _agent_cmd(self, verb, seg, args):
        if len(seg) < 3:
            raise ZoosimError("agent commands need /agent/<id>/<op>")
        w = self.world
        eid, op = seg[1], seg[2]
        state = w.entity(eid)
        if op == "pose":
            if verb == "vget":
                return " ".join(_fmt(v) for v in
                                (state.x, state.y, state.z, state.yaw))
            state.x, state.y = float(args[0]), float(args[1])
            if len(args) > 2:
                state.yaw = float(args[2])
            g = w.scene.ground_at(state.x, state.y)
            state.z = g + (state.cls.eye_height if state.cls.aerial else 0.0)
            return "ok"
        if verb == "vset" and op == "move":
            w.held_actions[eid] = ContinuousMoveAction(float(args[0]),
                                                       float(args[1]))
            return "ok"
        if verb == "vset" and op == "action":
            name = args[0]
            if name.isdigit():
                name = DiscreteNavAction.ALL[int(name)]
            if name not in DiscreteNavAction.ALL:
                raise ZoosimError(f"unknown discrete action {name!r}")
            w.held_actions[eid] = name
            return "ok"
        if verb == "vget" and op == "relstate":
            other = w.entity(args[0]) if args else w.entity(eid)
            rel = relative_state(state, other)
            return " ".join(_fmt(v) for v in rel.as_tuple())
        if verb == "vget" and op == "mask_color":
            return " ".join(str(c) for c in state.mask_color)
        raise ZoosimError(f"unknown agent command {verb} {op}")

    # -- /camera -----------------------------------------------------------------

    def _camera_cmd(self, verb, seg, args):
        if verb != "vget" or len(seg) != 3:
            raise ZoosimError("camera commands are vget /camera/<id>/<modality>")
        try:
            cam_id = int(seg[1])
        except ValueError:
            raise ZoosimError(f"camera id must be an integer, got {seg[1]!r}")
        modality = seg[2]
        if cam_id not in self.cameras:
            raise ZoosimError(f"no camera with id {cam_id}")
        kind, ref, cfg = self.cameras[cam_id]
        if args:
            wpx, hpx = args[0].lower().split("x")
            cfg = CameraConfig(width=int(wpx), height=int(hpx), hfov=cfg.hfov,
                               relative_location=cfg.relative_location,
                               relative_rotation=cfg.relative_rotation,
                               far_clip=cfg.far_clip, cam_id=cam_id)
        w = self.world
        if kind == "entity":
            state = w.entity(ref)
            pose = entity_camera_pose(state, cfg)
            entities = [e for i, e in w.entities.items() if i != ref]
        else:
            pose = ref
            entities = list(w.entities.values())
        return render(w.scene, entities, pose, cfg, modality)
