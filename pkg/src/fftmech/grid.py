"""Voxel grids, Fourier mode tables, and the discrete transform pair.

Fields live on a periodic grid of L^d voxels (d = 2 or 3) indexed by integer
coordinates; the physical cell is the unit box, so voxel n sits at
x = (n + 1/2)/L - 1/2.  Symmetric rank-2 tensor fields are stored as plain
float64 arrays of shape (ncomp, L, ..., L) with the component axis first:

    2D: (t11, t22, t12)
    3D: (t11, t22, t33, t23, t13, t12)

Shear entries hold raw tensor values (no engineering doubling).

The transform convention is the plain unnormalized forward DFT,
f(q) = sum_x f(x) e^{-iq.x}, with the 1/L^d factor on the backward transform.
Mode angles are q_i = 2*pi*m_i/L with m_i in {1-L/2, ..., L/2} for even L
(the edge mode is +pi, not -pi) and m_i in {-(L-1)/2, ..., (L-1)/2} for odd L.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

_COMPONENT_NAMES = {
    2: ("t11", "t22", "t12"),
    3: ("t11", "t22", "t33", "t23", "t13", "t12"),
}

# index pairs (i, j) of the stored components, in storage order
COMPONENT_PAIRS = {
    2: ((0, 0), (1, 1), (0, 1)),
    3: ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)),
}


@dataclass(frozen=True)
class GridSpec:
    """Periodic voxel grid: dimension (2 or 3) and voxels per side."""

    dim: int
    size: int

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.dim}")
        if self.size < 1:
            raise ValueError(f"grid size must be positive, got {self.size}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.size,) * self.dim

    @property
    def ncomp(self) -> int:
        return 3 if self.dim == 2 else 6

    @property
    def nvox(self) -> int:
        return self.size ** self.dim

    @property
    def component_names(self) -> tuple[str, ...]:
        return _COMPONENT_NAMES[self.dim]

    @property
    def component_pairs(self) -> tuple[tuple[int, int], ...]:
        return COMPONENT_PAIRS[self.dim]

    @property
    def component_weights(self) -> np.ndarray:
        """Multiplicity of each stored component in full ij sums (2 for shears)."""
        return np.array([1.0 if i == j else 2.0 for i, j in self.component_pairs])

    def zeros(self) -> np.ndarray:
        return np.zeros((self.ncomp,) + self.shape)

    def constant_field(self, tensor) -> np.ndarray:
        """Uniform field equal to the given (ncomp,) tensor."""
        tensor = np.asarray(tensor, dtype=float)
        if tensor.shape != (self.ncomp,):
            raise ValueError(f"expected {self.ncomp} components, got {tensor.shape}")
        out = np.empty((self.ncomp,) + self.shape)
        out[:] = tensor.reshape((self.ncomp,) + (1,) * self.dim)
        return out


@dataclass(frozen=True)
class PhaseGrid:
    """Two-phase voxel labelling: 1 = matrix, 2 = inclusion."""

    spec: GridSpec
    labels: np.ndarray

    def __post_init__(self):
        if self.labels.shape != self.spec.shape:
            raise ValueError(
                f"label array shape {self.labels.shape} does not match grid {self.spec.shape}")
        vals = np.unique(self.labels)
        if not np.all(np.isin(vals, (1, 2))):
            raise ValueError(f"phase labels must be 1 or 2, found {vals}")

    @property
    def inclusion_fraction(self) -> float:
        return float(np.mean(self.labels == 2))


def mode_numbers(size: int) -> np.ndarray:
    """Integer mode numbers in FFT storage order; even grids carry +L/2 as edge."""
    m = np.arange(size)
    return np.where(m <= size // 2, m, m - size)


def mode_angles(size: int) -> np.ndarray:
    """Mode angles q = 2*pi*m/L in FFT storage order, in (-pi, pi]."""
    return 2.0 * np.pi * mode_numbers(size) / size


def _workers(arr: np.ndarray) -> int:
    # thread fan-out only pays off beyond ~32^3 points per transform
    return -1 if arr.size >= 32768 else 1


def forward_transform(field: np.ndarray) -> np.ndarray:
    """Full complex DFT of each component, f(q) = sum_x f(x) e^{-iq.x}."""
    axes = tuple(range(1, field.ndim))
    return _fft.fftn(field, axes=axes, workers=_workers(field))


def backward_transform(spectrum: np.ndarray) -> np.ndarray:
    """Inverse of forward_transform; carries the 1/L^d factor. Returns complex."""
    axes = tuple(range(1, spectrum.ndim))
    return _fft.ifftn(spectrum, axes=axes, workers=_workers(spectrum))


def rfft_field(field: np.ndarray) -> np.ndarray:
    """Half-spectrum transform used internally by the solvers."""
    axes = tuple(range(1, field.ndim))
    return _fft.rfftn(field, axes=axes, workers=_workers(field))


def irfft_spectrum(spectrum: np.ndarray, spec: GridSpec) -> np.ndarray:
    axes = tuple(range(1, spectrum.ndim))
    return _fft.irfftn(spectrum, s=spec.shape, axes=axes,
                       workers=_workers(spectrum))


def mean_tensor(field: np.ndarray) -> np.ndarray:
    """Spatial mean of each stored component, shape (ncomp,)."""
    return field.reshape(field.shape[0], -1).mean(axis=1)


class ModeTable:
    """Per-mode angle grids and masks on the half-spectrum layout.

    `angles[i]` broadcasts over the spectrum shape; `weight` counts each stored
    half-spectrum mode once or twice so that weighted sums equal full-spectrum
    sums for conjugate-symmetric data.
    """

    def __init__(self, spec: GridSpec):
        self.spec = spec
        L, d = spec.size, spec.dim
        half = L // 2 + 1
        self.shape = (L,) * (d - 1) + (half,)
        full_q = mode_angles(L)
        axes_q = [full_q] * (d - 1) + [full_q[:half]]
        grids = np.meshgrid(*axes_q, indexing="ij")
        self.angles = [g for g in grids]

        # double-count the modes whose conjugate partner is dropped by the
        # half-spectrum layout (interior of the last axis)
        w_last = np.full(half, 2.0)
        w_last[0] = 1.0
        if L % 2 == 0:
            w_last[-1] = 1.0
        self.weight = np.broadcast_to(w_last, self.shape)

        is_zero = [np.isclose(q, 0.0) for q in self.angles]
        is_pi = [np.isclose(np.abs(q), np.pi) for q in self.angles]
        self.zero_mode = np.logical_and.reduce(is_zero)
        self.any_pi = np.logical_or.reduce(is_pi)
        self.all_zero_or_pi = np.logical_and.reduce(
            [z | p for z, p in zip(is_zero, is_pi)])
        self.n_pi = sum(p.astype(np.int8) for p in is_pi)


# ---------------------------------------------------------------------------
# raw field dumps: little-endian float64, voxel-major / component-minor
# ---------------------------------------------------------------------------

def dump_field(path: str, spec: GridSpec, field: np.ndarray) -> None:
    """Write a tensor field as raw doubles plus a text sidecar header."""
    if field.shape != (spec.ncomp,) + spec.shape:
        raise ValueError(f"field shape {field.shape} does not match grid {spec}")
    data = np.ascontiguousarray(np.moveaxis(field, 0, -1), dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(data.tobytes())
    with open(path + ".hdr", "w") as fh:
        fh.write(f"dim={spec.dim}\n")
        fh.write(f"size={spec.size}\n")
        fh.write(f"components={','.join(spec.component_names)}\n")
        fh.write("dtype=float64-le\n")
        fh.write("layout=voxel-major,component-minor\n")


def load_field(path: str) -> tuple[GridSpec, np.ndarray]:
    header = {}
    with open(path + ".hdr") as fh:
        for line in fh:
            key, _, val = line.strip().partition("=")
            header[key] = val
    spec = GridSpec(int(header["dim"]), int(header["size"]))
    raw = np.fromfile(path, dtype="<f8")
    expected = spec.nvox * spec.ncomp
    if raw.size != expected:
        raise ValueError(
            f"{os.path.basename(path)}: expected {expected} doubles, found {raw.size}")
    data = raw.reshape(spec.shape + (spec.ncomp,))
    return spec, np.ascontiguousarray(np.moveaxis(data, -1, 0))
