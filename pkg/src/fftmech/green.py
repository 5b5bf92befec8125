"""Discrete Green operators for the four gradient discretizations.

Each scheme replaces the continuum gradient symbol i*q by a finite-difference
symbol k(q) with k ~ i*q as q -> 0:

    CONTINUUM          k_i = i q_i
    CENTERED           k_i = i sin(q_i)
    FORWARD_BACKWARD   k_i = e^{i q_i} - 1
    ROTATED            k_i = i sin(q_i/2) e^{i q_i/2} prod_{j!=i}(1+e^{i q_j}) / 2^{d-2}

The rotated symbol is evaluated in the factored form above, which is
algebraically the tan(q_i/2)-product expression but has no pole at q_i = pi.

The operator itself is the minor-symmetrized sandwich k (B^-1) k* built from
the acoustic matrix of the reference medium,

    B_jk = lam0 k_j* k_k + mu0 k_j k_k* + mu0 |k|^2 delta_jk,

so that the output strain is compatible (symmetrized k (x) u for a
displacement u) and the updated stress is divergence-free in the scheme's own
sense (conj(k).sigma = 0).  With r = k/|k| and t = sum_i r_i^2 this reduces to
the closed form

    G_ijkl = [ (lam0+2mu0) (r_i r_l* d_jk)_sym
               - lam0 Re(r_i r_j*) Re(r_k r_l*)
               - mu0 r_i r_j r_k* r_l*
               + lam0 (r_i r_l* s_jk)_sym        (3D only)
             ] / ( mu0 [2(lam0+mu0) - lam0 |t|^2] )

with s = 4 c (x) c and c = Im(r) x Re(r).  The denominator is positive for
every k != 0 and positive-definite reference.

Even grids have modes where k(q) = 0 (two-voxel-periodic null fields of the
stencils) or where the continuum symbol breaks grid conjugacy (q_i = pi);
`special_frequency_rule` encodes the per-scheme fix applied there.
"""
from __future__ import annotations

import enum

import numpy as np

from .elastic import IsotropicModuli, isotropic_inverse
from .grid import GridSpec, ModeTable, irfft_spectrum, rfft_field


class Scheme(enum.Enum):
    CONTINUUM = "continuum"
    CENTERED = "centered"
    FORWARD_BACKWARD = "forward_backward"
    ROTATED = "rotated"


class FrequencyRule(enum.Enum):
    USE_FORMULA = "use_formula"
    ZERO_TENSOR = "zero_tensor"
    INVERSE_REFERENCE = "inverse_reference"


def k_vector(scheme: Scheme, q, dim: int) -> np.ndarray:
    """Discrete gradient symbol at one mode; q holds the d mode angles."""
    q = np.asarray(q, dtype=float)
    if q.shape != (dim,):
        raise ValueError(f"expected {dim} mode angles, got shape {q.shape}")
    if scheme is Scheme.CONTINUUM:
        return 1j * q
    if scheme is Scheme.CENTERED:
        return 1j * np.sin(q)
    if scheme is Scheme.FORWARD_BACKWARD:
        return np.exp(1j * q) - 1.0
    k = np.empty(dim, dtype=complex)
    for i in range(dim):
        other = 1.0 + 0j
        for j in range(dim):
            if j != i:
                other *= 1.0 + np.exp(1j * q[j])
        k[i] = 1j * np.sin(q[i] / 2) * np.exp(1j * q[i] / 2) * other / 2 ** (dim - 2)
    return k


def special_frequency_rule(scheme: Scheme, q, size: int, dim: int) -> FrequencyRule:
    """Edge-mode handling on even grids; trivial for odd grids and q != 0."""
    q = np.asarray(q, dtype=float)
    if size % 2 != 0:
        return FrequencyRule.USE_FORMULA
    is_pi = np.isclose(np.abs(q), np.pi)
    is_zero = np.isclose(q, 0.0)
    if scheme is Scheme.CONTINUUM:
        if is_pi.any():
            return FrequencyRule.INVERSE_REFERENCE
    elif scheme is Scheme.CENTERED:
        if np.all(is_pi | is_zero) and not np.all(is_zero):
            return FrequencyRule.ZERO_TENSOR
    elif scheme is Scheme.ROTATED:
        if (dim == 2 and is_pi.all()) or (dim == 3 and is_pi.sum() >= 2):
            return FrequencyRule.ZERO_TENSOR
    return FrequencyRule.USE_FORMULA


def _sym4(T: np.ndarray) -> np.ndarray:
    return 0.25 * (T + T.transpose(1, 0, 2, 3) + T.transpose(0, 1, 3, 2)
                   + T.transpose(1, 0, 3, 2))


def _isotropic_rank4(moduli: IsotropicModuli, dim: int) -> np.ndarray:
    I = np.eye(dim)
    return (moduli.lam * np.einsum('ij,kl->ijkl', I, I)
            + moduli.mu * (np.einsum('ik,jl->ijkl', I, I)
                           + np.einsum('il,jk->ijkl', I, I)))


def _inverse_reference_rank4(reference: IsotropicModuli, dim: int) -> np.ndarray:
    lam, mu = reference.lam, reference.mu
    I = np.eye(dim)
    f = lam / (2.0 * mu * (dim * lam + 2.0 * mu))
    sym_id = 0.25 / mu * (np.einsum('ik,jl->ijkl', I, I)
                          + np.einsum('il,jk->ijkl', I, I))
    return sym_id - f * np.einsum('ij,kl->ijkl', I, I)


def green_tensor(scheme: Scheme, q, reference: IsotropicModuli, dim: int,
                 size: int | None = None) -> np.ndarray:
    """Rank-4 kernel G(q) as a (d,d,d,d) complex array.

    If `size` is given, the special-frequency rule for that grid is applied
    first; the zero mode always returns the zero tensor.
    """
    q = np.asarray(q, dtype=float)
    lam, mu = reference.lam, reference.mu
    if np.allclose(q, 0.0):
        return np.zeros((dim,) * 4, dtype=complex)
    if size is not None:
        rule = special_frequency_rule(scheme, q, size, dim)
        if rule is FrequencyRule.ZERO_TENSOR:
            return np.zeros((dim,) * 4, dtype=complex)
        if rule is FrequencyRule.INVERSE_REFERENCE:
            return _inverse_reference_rank4(reference, dim).astype(complex)
    k = k_vector(scheme, q, dim)
    nk2 = np.vdot(k, k).real
    if nk2 <= 0.0:
        raise ValueError(
            f"k({q}) = 0 for scheme {scheme.value}; pass `size` so the "
            "special-frequency rule can handle this mode")
    r = k / np.sqrt(nk2)
    t = np.sum(r * r)
    denom = mu * (2.0 * (lam + mu) - lam * abs(t) ** 2)
    I = np.eye(dim)
    T1 = _sym4(np.einsum('i,l,jk->ijkl', r, r.conj(), I))
    rr = np.einsum('i,j->ij', r, r.conj()).real
    T2 = np.einsum('ij,kl->ijkl', rr, rr)
    T3 = np.einsum('i,j,k,l->ijkl', r, r, r.conj(), r.conj())
    num = (lam + 2.0 * mu) * T1 - lam * T2 - mu * T3
    if dim == 3:
        c = np.cross(r.imag, r.real)
        s = 4.0 * np.outer(c, c)
        num = num + lam * _sym4(np.einsum('i,l,jk->ijkl', r, r.conj(), s))
    return num / denom


class GreenPlan:
    """Cached per-mode symbol arrays for one (grid, scheme) pair.

    Stores the d gradient-symbol grids on the half-spectrum layout plus the
    derived unit symbols, |t|^2, and the special-mode masks; the kernel itself
    is never materialized (it is contracted on the fly against the
    polarization spectrum through the displacement solve).
    """

    def __init__(self, spec: GridSpec, scheme: Scheme):
        self.spec = spec
        self.scheme = scheme
        self.modes = ModeTable(spec)
        d = spec.dim
        Q = self.modes.angles
        self.k = np.empty((d,) + self.modes.shape, dtype=complex)
        if scheme is Scheme.CONTINUUM:
            for i in range(d):
                self.k[i] = 1j * Q[i]
        elif scheme is Scheme.CENTERED:
            for i in range(d):
                self.k[i] = 1j * np.sin(Q[i])
        elif scheme is Scheme.FORWARD_BACKWARD:
            for i in range(d):
                self.k[i] = np.exp(1j * Q[i]) - 1.0
        else:
            for i in range(d):
                other = np.ones(self.modes.shape, dtype=complex)
                for j in range(d):
                    if j != i:
                        other *= 1.0 + np.exp(1j * Q[j])
                self.k[i] = (1j * np.sin(Q[i] / 2) * np.exp(1j * Q[i] / 2)
                             * other / 2 ** (d - 2))

        m = self.modes
        if scheme is Scheme.CONTINUUM:
            self.zero_out = m.zero_mode
            self.inverse_ref = m.any_pi & ~m.zero_mode if spec.size % 2 == 0 \
                else np.zeros(m.shape, dtype=bool)
        elif scheme is Scheme.CENTERED:
            self.zero_out = m.zero_mode | (m.all_zero_or_pi if spec.size % 2 == 0
                                           else np.zeros(m.shape, dtype=bool))
            self.inverse_ref = np.zeros(m.shape, dtype=bool)
        elif scheme is Scheme.ROTATED:
            if spec.size % 2 == 0:
                npi = m.n_pi
                special = (npi >= 2) if d == 3 else (npi == d)
                self.zero_out = m.zero_mode | special
            else:
                self.zero_out = m.zero_mode
            self.inverse_ref = np.zeros(m.shape, dtype=bool)
        else:
            self.zero_out = m.zero_mode
            self.inverse_ref = np.zeros(m.shape, dtype=bool)

        nk2 = np.sum(np.abs(self.k) ** 2, axis=0)
        dead = nk2 <= 1e-24
        if not np.all(self.zero_out[dead]):
            raise RuntimeError("a k = 0 mode escaped the special-frequency masks")
        safe = np.where(dead, 1.0, nk2)
        self.r = self.k / np.sqrt(safe)
        self.r[:, dead] = 0.0
        t = np.sum(self.r * self.r, axis=0)
        self.t = t
        self.abs_t2 = np.abs(t) ** 2

    def displacement_symbol(self, b: np.ndarray, reference: IsotropicModuli) -> np.ndarray:
        """Solve B w = b per mode (b_j = sum_i r_i* tau_ij) in closed form."""
        lam, mu = reference.lam, reference.mu
        denom = mu * (2.0 * (lam + mu) - lam * self.abs_t2)
        r = self.r
        rb = np.sum(r * b, axis=0)            # r . b
        rcb = np.sum(r.conj() * b, axis=0)    # r* . b
        w = b / mu
        w += r.conj() * (-(2.0 * lam / denom) * rb + (lam * self.t / denom) * rcb)
        w += r * (-((lam + mu) / denom) * rcb + (lam * self.t.conj() / denom) * rb)
        return w

    def apply_spectrum(self, tau_hat: np.ndarray, reference: IsotropicModuli) -> np.ndarray:
        """G(q) : tau(q) on the half-spectrum, special rules included."""
        d = self.spec.dim
        r = self.r
        if d == 2:
            b = np.stack([r[0].conj() * tau_hat[0] + r[1].conj() * tau_hat[2],
                          r[0].conj() * tau_hat[2] + r[1].conj() * tau_hat[1]])
        else:
            b = np.stack([
                r[0].conj() * tau_hat[0] + r[1].conj() * tau_hat[5] + r[2].conj() * tau_hat[4],
                r[0].conj() * tau_hat[5] + r[1].conj() * tau_hat[1] + r[2].conj() * tau_hat[3],
                r[0].conj() * tau_hat[4] + r[1].conj() * tau_hat[3] + r[2].conj() * tau_hat[2],
            ])
        w = self.displacement_symbol(b, reference)
        out = np.empty_like(tau_hat)
        if d == 2:
            out[0] = r[0] * w[0]
            out[1] = r[1] * w[1]
            out[2] = 0.5 * (r[0] * w[1] + r[1] * w[0])
        else:
            out[0] = r[0] * w[0]
            out[1] = r[1] * w[1]
            out[2] = r[2] * w[2]
            out[3] = 0.5 * (r[1] * w[2] + r[2] * w[1])
            out[4] = 0.5 * (r[0] * w[2] + r[2] * w[0])
            out[5] = 0.5 * (r[0] * w[1] + r[1] * w[0])
        out[:, self.zero_out] = 0.0
        if self.inverse_ref.any():
            inv = isotropic_inverse(tau_hat[:, self.inverse_ref], reference, d)
            out[:, self.inverse_ref] = inv
        return out

    def divergence_norm(self, sigma_hat: np.ndarray) -> float:
        """Mode-sum L2 norm of conj(k).sigma, scaled to the spatial RMS."""
        d = self.spec.dim
        kc = self.k.conj()
        if d == 2:
            div = np.stack([kc[0] * sigma_hat[0] + kc[1] * sigma_hat[2],
                            kc[0] * sigma_hat[2] + kc[1] * sigma_hat[1]])
        else:
            div = np.stack([
                kc[0] * sigma_hat[0] + kc[1] * sigma_hat[5] + kc[2] * sigma_hat[4],
                kc[0] * sigma_hat[5] + kc[1] * sigma_hat[1] + kc[2] * sigma_hat[3],
                kc[0] * sigma_hat[4] + kc[1] * sigma_hat[3] + kc[2] * sigma_hat[2],
            ])
        total = np.sum(self.modes.weight * np.sum(np.abs(div) ** 2, axis=0))
        return float(np.sqrt(total)) / self.spec.nvox


def apply_green(scheme: Scheme, tau: np.ndarray, spec: GridSpec,
                reference: IsotropicModuli, plan: GreenPlan | None = None) -> np.ndarray:
    """Convolve a real polarization field with the Green operator.

    The zero-frequency coefficient of the output is forced to zero, so the
    result has exactly zero mean.
    """
    if tau.shape != (spec.ncomp,) + spec.shape:
        raise ValueError(f"field shape {tau.shape} does not match grid {spec}")
    if plan is None:
        plan = GreenPlan(spec, scheme)
    out_hat = plan.apply_spectrum(rfft_field(tau), reference)
    return irfft_spectrum(out_hat, spec)
