"""World: scene + entities + tick counter behind a single command queue.

All mutation is serialized through `lock` (the protocol server holds it for
a whole batch). Stepping order is deterministic: entities sorted by id.
"""

from __future__ import annotations

import hashlib
import json
import threading

from ..constants import TICK_DT
from ..errors import DuplicateId, NoSuchEntity, OccupiedSpawn
from ..world.scene import SceneSpec
from .entities import ENTITY_CLASSES, EntityState
from .motion import position_blocked, step_entity_events, wrap_angle


def encode_mask_color(i: int) -> tuple[int, int, int]:
    return (i & 0xFF, (i >> 8) & 0xFF, (i >> 16) & 0xFF)


class World:
    def __init__(self, scene: SceneSpec, seed: int = 0):
        scene.validate()
        self.scene = scene
        self.seed = seed
        self.entities: dict[str, EntityState] = {}
        self.tick_index = 0
        self.lock = threading.RLock()
        self.events: list[tuple] = []
        self.held_actions: dict[str, object] = {}
        self.controllers: dict[str, object] = {}
        self._color_i = 0

    # -- entity lifecycle ----------------------------------------------------

    def spawn(self, class_name: str, x: float, y: float, yaw: float = 0.0,
              entity_id: str | None = None, appearance_id: int = 0) -> EntityState:
        if class_name not in ENTITY_CLASSES:
            raise NoSuchEntity(f"unknown entity class {class_name!r}")
        cls = ENTITY_CLASSES[class_name]
        if entity_id is None:
            entity_id = f"{class_name.lower()}_{len(self.entities)}"
        if entity_id in self.entities:
            raise DuplicateId(f"entity id {entity_id!r} already exists")
        probe = EntityState(id=entity_id, cls=cls, x=x, y=y, z=0.0,
                            yaw=wrap_angle(yaw))
        if position_blocked(self.scene, probe, x, y, self.entities.values()):
            raise OccupiedSpawn(f"pose ({x:.2f}, {y:.2f}) is not free")
        self._color_i += 1
        probe.mask_color = encode_mask_color(self._color_i)
        probe.appearance_id = appearance_id
        g = self.scene.ground_at(x, y)
        probe.z = g + (cls.eye_height if cls.aerial else 0.0)
        self.entities[entity_id] = probe
        return probe

    def destroy(self, entity_id: str) -> None:
        if entity_id not in self.entities:
            raise NoSuchEntity(f"no entity with id {entity_id!r}")
        del self.entities[entity_id]
        self.held_actions.pop(entity_id, None)
        self.controllers.pop(entity_id, None)

    def entity(self, entity_id: str) -> EntityState:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise NoSuchEntity(f"no entity with id {entity_id!r}") from None

    # -- stepping ------------------------------------------------------------

    def step(self, actions: dict, dt: float = TICK_DT, edge: bool = True,
             move_tables: dict | None = None) -> list[tuple]:
        """Apply one tick. Unknown ids raise; order is ascending entity id."""
        for eid in actions:
            if eid not in self.entities:
                raise NoSuchEntity(f"no entity with id {eid!r}")
        tick_events: list[tuple] = []
        for eid in sorted(actions):
            state = self.entities[eid]
            others = [e for oid, e in self.entities.items() if oid != eid]
            table = (move_tables or {}).get(eid)
            _, ev = step_entity_events(self.scene, state, actions[eid], dt,
                                       others, edge=edge, move_table=table)
            tick_events.extend(ev)
        self.tick_index += 1
        self.events.extend((self.tick_index, *e) for e in tick_events)
        if len(self.events) > 1000:
            del self.events[:-1000]
        return tick_events

    def tick(self, n: int = 1, dt: float = TICK_DT) -> None:
        """Advance using held actions and attached controllers."""
        for _ in range(n):
            actions = {}
            for eid, ctrl in sorted(self.controllers.items()):
                if eid in self.entities:
                    actions[eid] = ctrl.action(self)
            for eid, act in self.held_actions.items():
                if eid in self.entities:
                    actions[eid] = act
            self.step(actions, dt, edge=True)

    # -- determinism helpers ---------------------------------------------------

    def state_doc(self) -> dict:
        return {
            "tick": self.tick_index,
            "entities": [self.entities[k].state_doc()
                         for k in sorted(self.entities)],
            "objects": [(o.id, o.state) for o in self.scene.objects],
        }

    def state_digest(self) -> str:
        doc = json.dumps(self.state_doc(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(doc.encode()).hexdigest()
