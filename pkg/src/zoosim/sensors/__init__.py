from .camera import (BYTES_PER_PIXEL, MODALITIES, MODALITY_CODES,
                     MODALITY_NAMES, CameraConfig, CameraPose, camera_basis,
                     entity_camera_pose)
from .render import APPEARANCE_PALETTE, Frame, raycast, render
from .relstate import BBox, RelativeState, bbox_from_mask, relative_state

__all__ = [
    "BYTES_PER_PIXEL", "MODALITIES", "MODALITY_CODES", "MODALITY_NAMES",
    "CameraConfig", "CameraPose", "camera_basis", "entity_camera_pose",
    "APPEARANCE_PALETTE", "Frame", "raycast", "render", "BBox",
    "RelativeState", "bbox_from_mask", "relative_state",
]
