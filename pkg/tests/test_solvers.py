import numpy as np
import pytest

from fftmech.elastic import (IsotropicModuli, LoadingSpec, isotropic_stress,
                             matrix_moduli, phase_moduli)
from fftmech.grid import GridSpec, PhaseGrid, mean_tensor
from fftmech.green import Scheme
from fftmech.micro import square_inclusion_2d
from fftmech.solve import (Algorithm, SolveConfig, SolverDivergence, StopCause,
                           UndefinedResidual, accelerated_solve,
                           default_reference, direct_solve,
                           equilibrium_residual, solve)

from conftest import random_phases

SCHEMES = list(Scheme)


def _config(scheme, algorithm, chi, dim, tol=1e-10, cap=30_000, beta=0.51):
    moduli = phase_moduli(chi, dim)
    ref = default_reference(algorithm, chi, moduli, dim, scheme=scheme, beta=beta)
    return moduli, SolveConfig(scheme=scheme, algorithm=algorithm, reference=ref,
                               tolerance=tol, cap=cap)


# ----------------------------------------------------------- trivial cases

@pytest.mark.parametrize("algorithm", list(Algorithm))
@pytest.mark.parametrize("scheme", SCHEMES)
def test_homogeneous_converges_immediately(scheme, algorithm):
    spec = GridSpec(2, 16)
    phases = PhaseGrid(spec, np.ones(spec.shape, dtype=np.uint8))
    moduli, config = _config(scheme, algorithm, 1.0, 2)
    loading = LoadingSpec.unit(2, "11")
    report = solve(phases, {1: moduli[1], 2: moduli[2]}, loading, config)
    assert report.stop is StopCause.TOLERANCE_REACHED
    assert report.iterations == 1
    assert np.allclose(report.strain, spec.constant_field(loading.array))
    m = matrix_moduli(2)
    assert np.isclose(report.mean_stress_trace[-1, 0], m.lam + 2 * m.mu)


def test_beta_below_half_does_not_converge():
    phases = square_inclusion_2d(16)
    moduli, config = _config(Scheme.CONTINUUM, Algorithm.DIRECT, 100.0, 2,
                             tol=1e-8, cap=1500, beta=0.49)
    loading = LoadingSpec.unit(2, "11")
    try:
        report = direct_solve(phases, moduli, loading, config)
        assert report.stop is StopCause.CAP_EXCEEDED
    except SolverDivergence as exc:
        assert exc.iteration > 0


def test_beta_slightly_above_half_converges():
    phases = square_inclusion_2d(16)
    moduli, config = _config(Scheme.CONTINUUM, Algorithm.DIRECT, 100.0, 2,
                             tol=1e-8, cap=30_000, beta=0.51)
    report = direct_solve(phases, moduli, LoadingSpec.unit(2, "11"), config)
    assert report.stop is StopCause.TOLERANCE_REACHED


# ------------------------------------------------- direct/accelerated match

@pytest.mark.parametrize("chi", [0.1, 10.0])
@pytest.mark.parametrize("dim,size", [(2, 8), (3, 4)])
def test_direct_and_accelerated_share_fixed_point(dim, size, chi):
    spec = GridSpec(dim, size)
    phases = random_phases(spec, seed=17)
    loading = LoadingSpec.unit(dim, "11")
    for scheme in SCHEMES:
        moduli, cfg_d = _config(scheme, Algorithm.DIRECT, chi, dim, tol=1e-10)
        _, cfg_a = _config(scheme, Algorithm.ACCELERATED, chi, dim, tol=1e-10)
        rep_d = direct_solve(phases, moduli, loading, cfg_d)
        rep_a = accelerated_solve(phases, moduli, loading, cfg_a)
        assert rep_d.converged and rep_a.converged
        scale = np.max(np.abs(rep_d.strain))
        assert np.max(np.abs(rep_d.strain - rep_a.strain)) < 1e-6 * scale


def test_mean_strain_exact_every_iteration():
    spec = GridSpec(2, 8)
    phases = random_phases(spec, seed=23)
    loading = LoadingSpec.unit(2, "12")
    for algorithm in Algorithm:
        moduli, config = _config(Scheme.ROTATED, algorithm, 20.0, 2)
        report = solve(phases, moduli, loading, config)
        assert report.mean_drift_max <= 1e-12
        assert np.max(np.abs(mean_tensor(report.strain) - loading.array)) <= 1e-12


def test_stagnation_stop_with_zero_tolerance():
    spec = GridSpec(2, 8)
    phases = random_phases(spec, seed=5)
    moduli = phase_moduli(5.0, 2)
    ref = default_reference(Algorithm.ACCELERATED, 5.0, moduli, 2)
    config = SolveConfig(scheme=Scheme.ROTATED, algorithm=Algorithm.ACCELERATED,
                         reference=ref, tolerance=0.0, stagnation=2e-13, cap=10_000)
    report = accelerated_solve(phases, moduli, loading=LoadingSpec.unit(2, "11"),
                               config=config)
    assert report.stop is StopCause.STAGNATED
    # round-off fixed point: residual well below any practical tolerance
    assert report.eta_final < 1e-11


def test_divergence_error_names_iteration():
    # a hugely wrong reference makes the direct iteration blow up
    phases = square_inclusion_2d(8)
    moduli = phase_moduli(1000.0, 2)
    ref = IsotropicModuli.from_young_poisson(1e-4, 0.25, 2)
    config = SolveConfig(scheme=Scheme.CONTINUUM, algorithm=Algorithm.DIRECT,
                         reference=ref, tolerance=1e-8, cap=2000)
    with pytest.raises(SolverDivergence) as err:
        direct_solve(phases, moduli, LoadingSpec.unit(2, "11"), config)
    assert "iteration" in str(err.value)


def test_algorithm_mismatch_raises():
    phases = square_inclusion_2d(8)
    moduli, config = _config(Scheme.ROTATED, Algorithm.DIRECT, 2.0, 2)
    with pytest.raises(ValueError):
        accelerated_solve(phases, moduli, LoadingSpec.unit(2, "11"), config)


# ------------------------------------------------------ equilibrium residual

def test_eta_zero_for_constant_stress():
    spec = GridSpec(2, 8)
    sigma = spec.constant_field([1.0, 0.5, 0.2])
    for scheme in SCHEMES:
        assert equilibrium_residual(sigma, scheme, spec) == 0.0


def test_eta_undefined_for_zero_mean_stress(rng):
    spec = GridSpec(2, 8)
    # small integers minus their mean: every value and every partial sum is an
    # exact multiple of 1/64, so the recomputed mean is exactly zero
    v = rng.integers(-5, 6, size=(3, 8, 8)).astype(float)
    sigma = v - v.reshape(3, -1).mean(axis=1).reshape(3, 1, 1)
    assert np.all(sigma.reshape(3, -1).mean(axis=1) == 0.0)
    with pytest.raises(UndefinedResidual):
        equilibrium_residual(sigma, Scheme.CENTERED, spec)


def test_eta_matches_backward_difference_stencil(rng):
    # forward-backward divergence: sigma_ij(x) - sigma_ij(x - e_j)
    spec = GridSpec(2, 8)
    sigma = rng.normal(size=(3, 8, 8)) + np.array([3.0, 1.0, 0.2]).reshape(3, 1, 1)
    div1 = (sigma[0] - np.roll(sigma[0], 1, axis=0)
            + sigma[2] - np.roll(sigma[2], 1, axis=1))
    div2 = (sigma[2] - np.roll(sigma[2], 1, axis=0)
            + sigma[1] - np.roll(sigma[1], 1, axis=1))
    rms = np.sqrt(np.mean(div1 ** 2 + div2 ** 2))
    mean = mean_tensor(sigma)
    norm = np.sqrt(mean[0] ** 2 + mean[1] ** 2 + 2 * mean[2] ** 2)
    expected = rms / norm
    got = equilibrium_residual(sigma, Scheme.FORWARD_BACKWARD, spec)
    assert np.isclose(got, expected, rtol=1e-12)


def test_eta_matches_centered_stencil_3d(rng):
    # centered divergence: (sigma(x+e_j) - sigma(x-e_j))/2 against the k symbol
    spec = GridSpec(3, 4)
    sigma = rng.normal(size=(6, 4, 4, 4)) + np.arange(1, 7).reshape(6, 1, 1, 1)
    comp = {(0, 0): 0, (1, 1): 1, (2, 2): 2, (1, 2): 3, (2, 1): 3,
            (0, 2): 4, (2, 0): 4, (0, 1): 5, (1, 0): 5}
    div = np.zeros((3, 4, 4, 4))
    for i in range(3):
        for j in range(3):
            s = sigma[comp[(i, j)]]
            div[i] += (np.roll(s, -1, axis=j) - np.roll(s, 1, axis=j)) / 2
    rms = np.sqrt(np.mean(np.sum(div ** 2, axis=0)))
    mean = mean_tensor(sigma)
    w = spec.component_weights
    norm = np.sqrt(np.sum(w * mean ** 2))
    got = equilibrium_residual(sigma, Scheme.CENTERED, spec)
    assert np.isclose(got, rms / norm, rtol=1e-12)


# --------------------------------------------------------- default reference

def test_default_reference_accelerated_geometric_mean():
    moduli = {1: IsotropicModuli.from_bulk_shear(1.0, 0.6, 3),
              2: IsotropicModuli.from_bulk_shear(1e4, 0.6e4, 3)}
    ref = default_reference(Algorithm.ACCELERATED, 1e4, moduli, 3)
    assert np.isclose(ref.bulk(3), 100.0)
    assert np.isclose(ref.mu, 60.0)


def test_default_reference_direct_beta():
    moduli = phase_moduli(1.0, 3)
    ref = default_reference(Algorithm.DIRECT, 1.0, moduli, 3, beta=0.51)
    assert np.isclose(ref.young(3), 1.53)


def test_default_reference_continuum_low_contrast_pin():
    moduli = phase_moduli(1e-3, 3)
    ref = default_reference(Algorithm.ACCELERATED, 1e-3, moduli, 3,
                            scheme=Scheme.CONTINUUM)
    assert abs(ref.young(3) - 0.01) <= 0.0075
    # other schemes keep the geometric mean at this contrast
    ref_r = default_reference(Algorithm.ACCELERATED, 1e-3, moduli, 3,
                              scheme=Scheme.ROTATED)
    assert np.isclose(ref_r.young(3), 1.5 * np.sqrt(1e-3), rtol=1e-6)


def test_default_reference_porous_floor():
    moduli = phase_moduli(0.0, 3)
    ref = default_reference(Algorithm.ACCELERATED, 0.0, moduli, 3)
    assert np.isclose(ref.young(3), 0.015)
    assert ref.mu > 0


def test_default_reference_rejects_double_void():
    moduli = {1: IsotropicModuli(0.0, 0.0), 2: IsotropicModuli(0.0, 0.0)}
    with pytest.raises(ValueError):
        default_reference(Algorithm.ACCELERATED, 0.0, moduli, 3)
