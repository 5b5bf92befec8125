"""Slice rendering of tensor-component fields to deterministic 8-bit PNGs."""
from __future__ import annotations

import numpy as np
from PIL import Image

from .config import RenderSpec
from .grid import GridSpec

# blue -> green -> yellow -> red lookup table, jet-like anchors
_BGYR_ANCHORS = [
    (0.000, (0, 0, 143)),
    (0.125, (0, 0, 255)),
    (0.375, (0, 255, 255)),
    (0.625, (255, 255, 0)),
    (0.875, (255, 0, 0)),
    (1.000, (128, 0, 0)),
]

COLORMAPS = {"bgyr": _BGYR_ANCHORS, "gray": [(0.0, (0, 0, 0)), (1.0, (255, 255, 255))]}


def colormap_lut(name: str) -> np.ndarray:
    """(256, 3) uint8 lookup table."""
    if name not in COLORMAPS:
        raise ValueError(f"unknown colormap {name!r}; available: {sorted(COLORMAPS)}")
    anchors = COLORMAPS[name]
    pos = np.array([a[0] for a in anchors])
    x = np.linspace(0.0, 1.0, 256)
    lut = np.empty((256, 3), dtype=np.uint8)
    for c in range(3):
        vals = np.array([a[1][c] for a in anchors], dtype=float)
        lut[:, c] = np.round(np.interp(x, pos, vals)).astype(np.uint8)
    return lut


def _coordinate_to_index(offset: float, size: int) -> int:
    """Nearest voxel layer whose centre coordinate is `offset`."""
    idx = int(round(offset * size + size / 2 - 0.5))
    if not 0 <= idx < size:
        raise ValueError(f"slice offset {offset} falls outside the cell")
    return idx


def extract_slice(field: np.ndarray, spec: GridSpec, render: RenderSpec) -> np.ndarray:
    """2D array of the requested component, sliced for 3D grids, cropped to
    the optional window."""
    names = [n[1:] for n in spec.component_names]   # "11", "22", ...
    if render.component not in names:
        raise ValueError(f"component {render.component!r} not in {names}")
    comp = field[names.index(render.component)]
    if spec.dim == 3:
        if not 0 <= render.axis < 3:
            raise ValueError(f"slice axis must be 0..2, got {render.axis}")
        idx = _coordinate_to_index(render.offset, spec.size)
        comp = np.take(comp, idx, axis=render.axis)
    if render.window is not None:
        lo, hi = render.window
        i0 = _coordinate_to_index(lo, spec.size)
        i1 = _coordinate_to_index(hi, spec.size)
        comp = comp[i0:i1 + 1, i0:i1 + 1]
    return comp


def render_slice(field: np.ndarray, spec: GridSpec, render: RenderSpec,
                 path: str) -> np.ndarray:
    """Clamp, map through the colormap, write PNG + sidecar. Returns the
    clamped byte image (pre-colormap)."""
    plane = extract_slice(field, spec, render)
    lo, hi = render.clamp
    scaled = np.clip((plane - lo) / (hi - lo), 0.0, 1.0)
    bytes_img = np.round(scaled * 255).astype(np.uint8)
    lut = colormap_lut(render.colormap)
    rgb = lut[bytes_img]
    # row 0 at the top of the image: flip the second axis up
    rgb_img = np.transpose(rgb[:, ::-1], (1, 0, 2))
    Image.fromarray(rgb_img, mode="RGB").save(path, format="PNG")
    with open(path + ".txt", "w") as fh:
        fh.write(f"component={render.component}\n")
        if spec.dim == 3:
            fh.write(f"axis={render.axis}\n")
            fh.write(f"offset={render.offset}\n")
        fh.write(f"clamp={render.clamp[0]},{render.clamp[1]}\n")
        fh.write(f"colormap={render.colormap}\n")
        if render.window is not None:
            fh.write(f"window={render.window[0]},{render.window[1]}\n")
    return bytes_img
