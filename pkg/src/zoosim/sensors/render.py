"""Frame rendering: modality payloads from the raycast kernels.

Byte formats (little-endian, row-major, top-left origin):
  color / mask : 3 bytes RGB per pixel
  depth        : 4-byte IEEE-754 float, meters along the ray
  normal       : 3 x 4-byte floats

Color shading: albedo * 1/(1 + 0.1*depth) * illumination; sky pixels use a
fixed sky albedo. Mask: instance mask colors, black background (terrain and
sky). Normals: unit face/surface normals, (0, 0, 1) for sky.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidModality
from ..kernels import BACKEND
from ..kernels.raycast import (KIND_BOX, KIND_CYL, KIND_TERRAIN, render_scalar,
                               render_vectorized)
from ..world.scene import SceneSpec
from .camera import BYTES_PER_PIXEL, CameraConfig, CameraPose, camera_basis

SKY_ALBEDO = (0.53, 0.67, 0.90)

# entity appearance palette; appearance_id indexes it (augmentation reshuffles)
APPEARANCE_PALETTE = (
    (0.85, 0.30, 0.25), (0.25, 0.45, 0.85), (0.30, 0.70, 0.35),
    (0.85, 0.75, 0.25), (0.60, 0.35, 0.70), (0.90, 0.55, 0.20),
    (0.35, 0.70, 0.70), (0.75, 0.45, 0.45),
)


@dataclass(frozen=True)
class Frame:
    modality: str
    width: int
    height: int
    payload: bytes

    def __post_init__(self):
        expect = self.width * self.height * BYTES_PER_PIXEL[self.modality]
        if len(self.payload) != expect:
            raise InvalidModality(
                f"{self.modality} payload must be {expect} bytes, "
                f"got {len(self.payload)}")

    def to_array(self) -> np.ndarray:
        h, w = self.height, self.width
        if self.modality in ("color", "mask"):
            return np.frombuffer(self.payload, np.uint8).reshape(h, w, 3)
        if self.modality == "depth":
            return np.frombuffer(self.payload, "<f4").reshape(h, w)
        return np.frombuffer(self.payload, "<f4").reshape(h, w, 3)


def _scene_arrays(scene: SceneSpec, entities):
    boxes = []
    box_colors = []
    box_albedo = []
    g = scene.ground
    for obj in scene.objects:
        if obj.kind == "Door" and obj.state == "open":
            continue
        x0, x1, y0, y1 = obj.footprint
        ix, iy = scene.cell_of((x0 + x1) / 2, (y0 + y1) / 2)
        z0 = float(g[ix, iy])
        boxes.append((x0, x1, y0, y1, z0, z0 + obj.height))
        box_colors.append(obj.mask_color)
        box_albedo.append(obj.albedo)
    cyls = []
    cyl_colors = []
    cyl_albedo = []
    for e in entities:
        base = e.z
        cyls.append((e.x, e.y, base, base + e.body_height(), e.cls.radius))
        cyl_colors.append(e.mask_color)
        cyl_albedo.append(APPEARANCE_PALETTE[e.appearance_id
                                             % len(APPEARANCE_PALETTE)])
    boxes_a = np.array(boxes, dtype=np.float64).reshape(-1, 6)
    cyls_a = np.array(cyls, dtype=np.float64).reshape(-1, 5)
    return boxes_a, box_colors, box_albedo, cyls_a, cyl_colors, cyl_albedo


def raycast(scene: SceneSpec, entities, pose: CameraPose, config: CameraConfig,
            backend: str | None = None):
    """Run the kernel; returns (t, kind, idx, normal, scene arrays)."""
    W, H = config.width, config.height
    tan_h, tan_v = config.tangents()
    F, R, U = camera_basis(pose.pitch, pose.yaw, pose.roll)
    eg = np.ascontiguousarray(scene.effective_ground())
    cl = np.ascontiguousarray(scene.clearance)
    has_ceiling = bool(np.isfinite(cl).any())
    z_top = float(eg.max())
    boxes_a, box_colors, box_albedo, cyls_a, cyl_colors, cyl_albedo = \
        _scene_arrays(scene, entities)

    out_t = np.empty((H, W))
    out_kind = np.empty((H, W), dtype=np.int16)
    out_idx = np.empty((H, W), dtype=np.int64)
    out_n = np.empty((H, W, 3))
    fn = render_scalar if (backend or BACKEND) == "numba" else render_vectorized
    fn(pose.x, pose.y, pose.z, F, R, U, W, H, tan_h, tan_v,
       float(config.far_clip), eg, cl, scene.cell_size, has_ceiling, z_top,
       boxes_a, cyls_a, out_t, out_kind, out_idx, out_n)
    extras = (box_colors, box_albedo, cyl_colors, cyl_albedo)
    return out_t, out_kind, out_idx, out_n, extras


def render(scene: SceneSpec, entities, pose: CameraPose, config: CameraConfig,
           modality: str, backend: str | None = None) -> Frame:
    if modality not in BYTES_PER_PIXEL:
        raise InvalidModality(f"unknown modality {modality!r}")
    t, kind, idx, nrm, extras = raycast(scene, entities, pose, config, backend)
    box_colors, box_albedo, cyl_colors, cyl_albedo = extras
    H, W = t.shape

    if modality == "depth":
        return Frame("depth", W, H, t.astype("<f4").tobytes())

    if modality == "normal":
        return Frame("normal", W, H, nrm.astype("<f4").tobytes())

    if modality == "mask":
        img = np.zeros((H, W, 3), dtype=np.uint8)
        _paint(img, kind, idx, KIND_BOX, box_colors)
        _paint(img, kind, idx, KIND_CYL, cyl_colors)
        return Frame("mask", W, H, img.tobytes())

    # color
    albedo = np.empty((H, W, 3))
    albedo[:] = SKY_ALBEDO
    terr = kind == KIND_TERRAIN
    if terr.any():
        area = scene.effective_area().ravel()
        pal = np.zeros((256, 3))
        for k, v in scene.palette.items():
            pal[k] = v
        cells = idx[terr]
        albedo[terr] = pal[area[cells]]
    _paint_f(albedo, kind, idx, KIND_BOX, box_albedo)
    _paint_f(albedo, kind, idx, KIND_CYL, cyl_albedo)
    shade = 1.0 / (1.0 + 0.1 * t)
    shade = np.where(kind >= 0, shade, 1.0)
    rgb = albedo * shade[..., None] * scene.illumination
    img = np.clip(rgb * 255.0, 0.0, 255.0).astype(np.uint8)
    return Frame("color", W, H, img.tobytes())


def _paint(img, kind, idx, k, colors):
    if not colors:
        return
    sel = kind == k
    if sel.any():
        lut = np.array(colors, dtype=np.uint8)
        img[sel] = lut[idx[sel]]


def _paint_f(img, kind, idx, k, colors):
    if not colors:
        return
    sel = kind == k
    if sel.any():
        lut = np.array(colors, dtype=np.float64)
        img[sel] = lut[idx[sel]]
