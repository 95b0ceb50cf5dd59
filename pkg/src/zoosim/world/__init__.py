from .scene import (AreaKind, InteractiveObject, SceneSpec, load_scene,
                    save_scene, scene_from_doc, scene_to_doc, scene_to_json,
                    set_object_state)
from .generate import generate_scene, parse_generator_spec
from .planner import Path, find_path, shortest_path_length

__all__ = [
    "AreaKind", "InteractiveObject", "SceneSpec", "load_scene", "save_scene",
    "scene_from_doc", "scene_to_doc", "scene_to_json", "set_object_state",
    "generate_scene", "parse_generator_spec", "Path", "find_path",
    "shortest_path_length",
]
