"""Dense reference solver for tiny grids.

Solves the same discrete equations as the FFT fixed point, but as one linear
system by direct algebra: unknowns are the displacement spectral coefficients
per mode (plus, for the continuum operator on even grids, free strain
coefficients at the edge modes where the conjugacy fix replaces the kernel),
and the equations are per-mode stress equilibrium conj(k).sigma = 0 under the
heterogeneous constitutive law, with <eps> pinned to the macroscopic strain.

Intended purely as an independent cross-check; the system is assembled by
probing the residual map with a batch of unit vectors and solved with one
least-squares call, capped at 4 voxels per side.
"""
from __future__ import annotations

import numpy as np
import scipy.fft as _fft

from .elastic import IsotropicModuli, LoadingSpec, moduli_fields
from .grid import GridSpec, PhaseGrid, mode_angles
from .green import FrequencyRule, Scheme, k_vector, special_frequency_rule


class SingularSystem(RuntimeError):
    """The assembled system is inconsistent: a null-space mode was missed."""


def dense_solve(phases: PhaseGrid, moduli_by_phase: dict[int, IsotropicModuli],
                loading: LoadingSpec, scheme: Scheme) -> np.ndarray:
    """Strain field of the discrete problem, computed without iteration."""
    spec = phases.spec
    if spec.size > 4:
        raise ValueError(f"dense oracle is capped at 4 voxels per side, got {spec.size}")
    d, L, ncomp = spec.dim, spec.size, spec.ncomp
    pairs = spec.component_pairs
    lam_f, mu_f = moduli_fields(phases, moduli_by_phase)
    ebar = loading.array
    axes = tuple(range(-d, 0))

    q1 = mode_angles(L)
    qgrids = np.meshgrid(*([q1] * d), indexing="ij")
    nmode = L ** d
    qflat = np.stack([g.reshape(-1) for g in qgrids])        # (d, nmode)
    K = np.stack([
        np.array([k_vector(scheme, qflat[:, m], d)[i] for m in range(nmode)])
        for i in range(d)
    ])
    live = np.sqrt(np.sum(np.abs(K) ** 2, axis=0)) > 1e-12

    edge = np.zeros(nmode, dtype=bool)
    for m in range(nmode):
        rule = special_frequency_rule(scheme, qflat[:, m], L, d)
        edge[m] = rule is FrequencyRule.INVERSE_REFERENCE
    n_u = d * nmode
    n_extra = ncomp * int(edge.sum())
    nx = n_u + n_extra

    # index maps between stored components and the ij pairs of the divergence
    div_terms = {2: [[(0, 0), (1, 2)], [(0, 2), (1, 1)]],
                 3: [[(0, 0), (1, 5), (2, 4)],
                     [(0, 5), (1, 1), (2, 3)],
                     [(0, 4), (1, 3), (2, 2)]]}[d]

    def strain_of(x: np.ndarray) -> np.ndarray:
        """x: (..., nx) batch -> (..., ncomp, *grid) complex strain."""
        batch = x.shape[:-1]
        u = x[..., :n_u].reshape(batch + (d, nmode))
        eh = np.zeros(batch + (ncomp, nmode), dtype=complex)
        for c, (i, j) in enumerate(pairs):
            eh[..., c, :] = 0.5 * (K[i] * u[..., j, :] + K[j] * u[..., i, :])
        if n_extra:
            eh[..., edge] = x[..., n_u:].reshape(batch + (ncomp, -1))
        eh = eh.reshape(batch + (ncomp,) + spec.shape)
        eh[(...,) + (0,) * d] += ebar * nmode
        return _fft.ifftn(eh, axes=axes, workers=-1)

    grid_sl = (slice(None),) * d

    def residual(x: np.ndarray) -> np.ndarray:
        eps = strain_of(x)
        tr = eps[(Ellipsis, slice(None, d)) + grid_sl].sum(axis=-d - 1)
        sig = np.empty_like(eps)
        for c in range(ncomp):
            val = 2.0 * mu_f * eps[(Ellipsis, c) + grid_sl]
            if c < d:
                val = val + lam_f * tr
            sig[(Ellipsis, c) + grid_sl] = val
        sh = _fft.fftn(sig, axes=axes, workers=-1).reshape(
            x.shape[:-1] + (ncomp, nmode))
        kc = K.conj()
        div = np.zeros(x.shape[:-1] + (d, nmode), dtype=complex)
        for i, terms in enumerate(div_terms):
            for (j, c) in terms:
                div[..., i, :] += kc[j] * sh[..., c, :]
        rows = [div[..., :, live].reshape(x.shape[:-1] + (-1,))]
        if n_extra:
            rows.append(sh[..., :, edge].reshape(x.shape[:-1] + (-1,)))
        return np.concatenate(rows, axis=-1)

    b = -residual(np.zeros(nx, dtype=complex))
    A = (residual(np.eye(nx, dtype=complex)) + b).T
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    misfit = float(np.max(np.abs(A @ sol - b))) if b.size else 0.0
    scale = max(float(np.max(np.abs(b))), 1.0)
    if misfit > 1e-8 * scale:
        raise SingularSystem(
            f"least-squares misfit {misfit:.2e}; a null-space mode was missed")
    eps = strain_of(sol)
    imag = float(np.max(np.abs(eps.imag)))
    if imag > 1e-9 * max(float(np.max(np.abs(eps.real))), 1e-30):
        raise SingularSystem(f"solution has imaginary residue {imag:.2e}")
    return eps.real
