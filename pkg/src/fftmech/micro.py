"""Benchmark microstructure generators and the label-grid file format.

All generators label voxels by the position of the voxel centre,
x = (n + 1/2)/L - 1/2 in the unit periodic box, and wrap distances around the
torus.  Random sphere centres are continuous (not voxel-snapped) and drawn
from a seeded PCG64 stream so grids are reproducible from (parameters, seed).
"""
from __future__ import annotations

import numpy as np

from .grid import GridSpec, PhaseGrid

RNG_NAME = "pcg64"


def _voxel_centers(size: int) -> np.ndarray:
    return (np.arange(size) + 0.5) / size - 0.5


def _periodic_delta(a: np.ndarray, b: float) -> np.ndarray:
    d = np.abs(a - b)
    return np.minimum(d, 1.0 - d)


def square_inclusion_2d(size: int) -> PhaseGrid:
    """Single square inclusion covering one quarter of the periodic cell.

    The inclusion occupies the block of voxels with both centre coordinates in
    [0, 1/2), so one inclusion corner sits at the cell centre.  Requires an
    even side so the 25% fraction is exact.
    """
    if size % 2 != 0:
        raise ValueError(f"side must be even for an exact quarter block, got {size}")
    spec = GridSpec(2, size)
    labels = np.ones(spec.shape, dtype=np.uint8)
    h = size // 2
    labels[h:, h:] = 2
    return PhaseGrid(spec, labels)


def cube_inclusion_3d(size: int) -> PhaseGrid:
    """Centred cubic inclusion of side 1/2 (volume fraction 12.5%).

    Requires the side to be a multiple of 4 so the cube faces fall on voxel
    boundaries.
    """
    if size % 4 != 0:
        raise ValueError(f"side must be divisible by 4, got {size}")
    spec = GridSpec(3, size)
    labels = np.ones(spec.shape, dtype=np.uint8)
    lo, hi = size // 4, 3 * size // 4
    labels[lo:hi, lo:hi, lo:hi] = 2
    return PhaseGrid(spec, labels)


def sphere_array(size: int, volume_fraction: float, dim: int = 3) -> PhaseGrid:
    """Single centred sphere, giving a periodic array of spheres.

    The radius solves the continuum volume fraction, r = (3f/4pi)^(1/3) in 3D
    (sqrt(f/pi) in 2D); a voxel belongs to the inclusion iff its centre lies
    within periodic distance r of the cell centre.
    """
    if not 0.0 < volume_fraction < 1.0:
        raise ValueError(f"volume fraction must be in (0, 1), got {volume_fraction}")
    if dim == 3:
        radius = (3.0 * volume_fraction / (4.0 * np.pi)) ** (1.0 / 3.0)
    else:
        radius = np.sqrt(volume_fraction / np.pi)
    spec = GridSpec(dim, size)
    x = _voxel_centers(size)
    deltas = [_periodic_delta(x, 0.0) for _ in range(dim)]
    grids = np.meshgrid(*deltas, indexing="ij")
    dist2 = sum(g * g for g in grids)
    labels = np.where(dist2 <= radius * radius, 2, 1).astype(np.uint8)
    return PhaseGrid(spec, labels)


def boolean_spheres(size: int, count: int, diameter_voxels: float, seed: int,
                    dim: int = 3) -> PhaseGrid:
    """Periodized Boolean model: union of `count` equal spheres with centres
    uniform on the torus.  The diameter is given in voxels."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if diameter_voxels <= 0:
        raise ValueError("diameter must be positive")
    spec = GridSpec(dim, size)
    labels = np.ones(spec.shape, dtype=np.uint8)
    rng = np.random.Generator(np.random.PCG64(seed))
    centers = rng.random((count, dim)) - 0.5
    radius = 0.5 * diameter_voxels / size
    x = _voxel_centers(size)
    for c in centers:
        deltas = [_periodic_delta(x, c[i]) for i in range(dim)]
        # only voxels inside the bounding box can be hit; keep the index sets small
        idx = [np.nonzero(d <= radius)[0] for d in deltas]
        if any(len(i) == 0 for i in idx):
            continue
        grids = np.meshgrid(*[deltas[i][idx[i]] for i in range(dim)], indexing="ij")
        inside = sum(g * g for g in grids) <= radius * radius
        box = np.ix_(*idx)
        labels[box] = np.where(inside, np.uint8(2), labels[box])
    return PhaseGrid(spec, labels)


def expected_boolean_fraction(size: int, count: int, diameter_voxels: float,
                              dim: int = 3) -> float:
    """1 - exp(-n v): the Boolean-model expectation for the inclusion fraction."""
    radius = 0.5 * diameter_voxels / size
    if dim == 3:
        v = 4.0 / 3.0 * np.pi * radius ** 3
    else:
        v = np.pi * radius ** 2
    return 1.0 - np.exp(-count * v)


def boolean_count_for_fraction(size: int, diameter_voxels: float, fraction: float,
                               dim: int = 3) -> int:
    """Sphere count whose Boolean expectation matches the target fraction."""
    radius = 0.5 * diameter_voxels / size
    v = 4.0 / 3.0 * np.pi * radius ** 3 if dim == 3 else np.pi * radius ** 2
    return int(round(-np.log(1.0 - fraction) / v))


# ---------------------------------------------------------------------------
# label-grid files: one byte per voxel plus a text sidecar
# ---------------------------------------------------------------------------

def save_phase_grid(path: str, grid: PhaseGrid, generator: str = "",
                    params: dict | None = None, seed: int | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(np.ascontiguousarray(grid.labels, dtype=np.uint8).tobytes())
    with open(path + ".hdr", "w") as fh:
        fh.write(f"dim={grid.spec.dim}\n")
        fh.write(f"size={grid.spec.size}\n")
        fh.write(f"generator={generator}\n")
        for key, val in (params or {}).items():
            fh.write(f"param.{key}={val}\n")
        if seed is not None:
            fh.write(f"seed={seed}\n")
        fh.write(f"rng={RNG_NAME}\n")


def load_phase_grid(path: str) -> PhaseGrid:
    header = {}
    with open(path + ".hdr") as fh:
        for line in fh:
            key, _, val = line.strip().partition("=")
            header[key] = val
    spec = GridSpec(int(header["dim"]), int(header["size"]))
    raw = np.fromfile(path, dtype=np.uint8)
    if raw.size != spec.nvox:
        raise ValueError(f"expected {spec.nvox} label bytes, found {raw.size}")
    return PhaseGrid(spec, raw.reshape(spec.shape))
