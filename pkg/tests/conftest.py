import itertools

import numpy as np
import pytest

from fftmech.grid import GridSpec, PhaseGrid


def random_field(spec: GridSpec, seed=0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.normal(size=(spec.ncomp,) + spec.shape)


def random_phases(spec: GridSpec, seed=0, fraction=0.4) -> PhaseGrid:
    rng = np.random.default_rng(seed)
    labels = np.where(rng.random(spec.shape) < fraction, 2, 1).astype(np.uint8)
    return PhaseGrid(spec, labels)


def acoustic_green(k: np.ndarray, lam: float, mu: float) -> np.ndarray:
    """Independent kernel oracle: assemble the d x d acoustic matrix of the
    reference medium for the symbol k, invert it numerically, sandwich with
    k and k*, and minor-symmetrize.  Conventions: equilibrium conj(k).sigma=0,
    strain = sym(k (x) u)."""
    d = len(k)
    kk = np.vdot(k, k).real
    B = (lam * np.outer(k.conj(), k) + mu * np.outer(k, k.conj())
         + mu * kk * np.eye(d))
    Binv = np.linalg.inv(B)
    G = np.einsum('i,jl,m->ijlm', k, Binv, k.conj())
    return 0.25 * (G + G.transpose(1, 0, 2, 3) + G.transpose(0, 1, 3, 2)
                   + G.transpose(1, 0, 3, 2))


def rank4_to_components(G: np.ndarray, pairs) -> np.ndarray:
    """Reduce a (d,d,d,d) kernel to the (ncomp, ncomp) matrix acting on stored
    components, with off-diagonal columns double-weighted."""
    n = len(pairs)
    M = np.empty((n, n), dtype=complex)
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            w = 1.0 if k == l else 2.0
            M[a, b] = w * G[i, j, k, l]
    return M


def all_modes(size: int, dim: int):
    from fftmech.grid import mode_angles
    q1 = mode_angles(size)
    return list(itertools.product(*([q1] * dim)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
