"""Isotropic moduli, the per-voxel constitutive law, and loading tensors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, PhaseGrid, mean_tensor

# matrix-phase parametrization used throughout: kappa = 1, mu = 0.6, so the
# Poisson ratio is 0.25 in both 2D and 3D and the contrast chi is the single
# free material parameter
MATRIX_BULK = 1.0
MATRIX_SHEAR = 0.6


@dataclass(frozen=True)
class IsotropicModuli:
    """Lame pair (lam, mu); bulk/Young/Poisson derived per dimension."""

    lam: float
    mu: float

    def bulk(self, dim: int) -> float:
        return self.lam + 2.0 * self.mu / dim

    def young(self, dim: int) -> float:
        k = self.bulk(dim)
        if dim == 3:
            return 9.0 * k * self.mu / (3.0 * k + self.mu)
        return 4.0 * k * self.mu / (k + self.mu)

    def poisson(self, dim: int) -> float:
        k = self.bulk(dim)
        if dim == 3:
            return (3.0 * k - 2.0 * self.mu) / (2.0 * (3.0 * k + self.mu))
        return (k - self.mu) / (k + self.mu)

    @classmethod
    def from_bulk_shear(cls, kappa: float, mu: float, dim: int) -> "IsotropicModuli":
        return cls(kappa - 2.0 * mu / dim, mu)

    @classmethod
    def from_young_poisson(cls, young: float, poisson: float, dim: int) -> "IsotropicModuli":
        mu = young / (2.0 * (1.0 + poisson))
        if dim == 3:
            kappa = young / (3.0 * (1.0 - 2.0 * poisson))
        else:
            kappa = young / (2.0 * (1.0 - poisson))
        return cls.from_bulk_shear(kappa, mu, dim)

    def scaled(self, factor: float) -> "IsotropicModuli":
        return IsotropicModuli(self.lam * factor, self.mu * factor)


def matrix_moduli(dim: int) -> IsotropicModuli:
    return IsotropicModuli.from_bulk_shear(MATRIX_BULK, MATRIX_SHEAR, dim)


def phase_moduli(chi: float, dim: int) -> dict[int, IsotropicModuli]:
    """Matrix (phase 1) at the reference parametrization, inclusion scaled by chi."""
    if chi < 0:
        raise ValueError(f"contrast must be >= 0, got {chi}")
    m = matrix_moduli(dim)
    return {1: m, 2: m.scaled(chi)}


def moduli_fields(phases: PhaseGrid, moduli_by_phase: dict[int, IsotropicModuli]):
    """Per-voxel (lam, mu) arrays from the phase labels."""
    lam_lut = np.zeros(3)
    mu_lut = np.zeros(3)
    for p, m in moduli_by_phase.items():
        lam_lut[p] = m.lam
        mu_lut[p] = m.mu
    return lam_lut[phases.labels], mu_lut[phases.labels]


def isotropic_stress(field: np.ndarray, lam, mu) -> np.ndarray:
    """sigma = lam*tr(eps)*I + 2*mu*eps, with lam/mu scalars or voxel arrays."""
    ncomp = field.shape[0]
    dim = 2 if ncomp == 3 else 3
    tr = field[:dim].sum(axis=0)
    out = np.empty_like(field)
    for c in range(dim):
        out[c] = lam * tr + 2.0 * mu * field[c]
    for c in range(dim, ncomp):
        out[c] = 2.0 * mu * field[c]
    return out


def apply_isotropic_elasticity(field: np.ndarray, phases: PhaseGrid,
                               moduli_by_phase: dict[int, IsotropicModuli]) -> np.ndarray:
    """Per-voxel constitutive law on a tensor field."""
    if field.shape != (phases.spec.ncomp,) + phases.spec.shape:
        raise ValueError(
            f"field shape {field.shape} does not match phase grid {phases.spec}")
    lam, mu = moduli_fields(phases, moduli_by_phase)
    return isotropic_stress(field, lam, mu)


def isotropic_inverse(tensor_components: np.ndarray, moduli: IsotropicModuli,
                      dim: int) -> np.ndarray:
    """eps = C^-1 : sigma for a homogeneous isotropic C (works on spectra too)."""
    lam, mu = moduli.lam, moduli.mu
    tr = tensor_components[:dim].sum(axis=0)
    f = lam / (2.0 * mu * (dim * lam + 2.0 * mu))
    out = tensor_components / (2.0 * mu)
    out[:dim] -= f * tr
    return out


def frobenius_norm(tensor: np.ndarray, dim: int) -> float:
    """Frobenius norm with off-diagonal components counted twice."""
    from .grid import COMPONENT_PAIRS
    w = np.array([1.0 if i == j else 2.0 for i, j in COMPONENT_PAIRS[dim]])
    t = np.asarray(tensor, dtype=float)
    return float(np.sqrt(np.sum(w * t * t)))


@dataclass(frozen=True)
class LoadingSpec:
    """Macroscopic strain tensor, stored in component order."""

    dim: int
    tensor: tuple[float, ...]

    def __post_init__(self):
        ncomp = 3 if self.dim == 2 else 6
        if len(self.tensor) != ncomp:
            raise ValueError(f"expected {ncomp} components, got {len(self.tensor)}")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.tensor, dtype=float)

    @classmethod
    def unit(cls, dim: int, component: str) -> "LoadingSpec":
        """Unit loading on one symmetric component: '11' -> eps11=1,
        '12' -> eps12=eps21=1/2 (so the ij+ji pair sums to one)."""
        from .grid import COMPONENT_PAIRS
        pairs = COMPONENT_PAIRS[dim]
        names = ["".join(str(i + 1) for i in p) for p in pairs]
        if component not in names:
            raise ValueError(f"unknown component {component!r}; choose from {names}")
        idx = names.index(component)
        i, j = pairs[idx]
        vec = [0.0] * len(pairs)
        vec[idx] = 1.0 if i == j else 0.5
        return cls(dim, tuple(vec))

    def unit_component_index(self) -> int:
        """Index of the single loaded component; error if the loading is not
        a unit single-component strain."""
        from .grid import COMPONENT_PAIRS
        pairs = COMPONENT_PAIRS[self.dim]
        arr = self.array
        nz = np.nonzero(arr)[0]
        if len(nz) != 1:
            raise ValueError("loading must have exactly one nonzero component")
        idx = int(nz[0])
        i, j = pairs[idx]
        expect = 1.0 if i == j else 0.5
        if not np.isclose(arr[idx], expect):
            raise ValueError(
                f"component {idx} must equal {expect} for a unit loading, got {arr[idx]}")
        return idx


def mean_stress(field: np.ndarray) -> np.ndarray:
    return mean_tensor(field)
