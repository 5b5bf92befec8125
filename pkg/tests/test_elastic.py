import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fftmech.elastic import (IsotropicModuli, LoadingSpec,
                             apply_isotropic_elasticity, frobenius_norm,
                             isotropic_inverse, isotropic_stress,
                             matrix_moduli, phase_moduli)
from fftmech.grid import GridSpec, PhaseGrid

from conftest import random_field, random_phases


def test_matrix_parametrization():
    # kappa = 1, mu = 0.6 gives nu = 0.25 and E = 3/2 in both dimensions
    for dim in (2, 3):
        m = matrix_moduli(dim)
        assert np.isclose(m.bulk(dim), 1.0)
        assert np.isclose(m.mu, 0.6)
        assert np.isclose(m.poisson(dim), 0.25)
        assert np.isclose(m.young(dim), 1.5)
    assert np.isclose(matrix_moduli(2).lam, 0.4)
    assert np.isclose(matrix_moduli(3).lam, 0.6)


def test_young_modulus_from_bulk_shear_3d():
    m = IsotropicModuli.from_bulk_shear(1.0, 0.6, 3)
    assert np.isclose(m.young(3), 9 * 1.0 * 0.6 / (3 * 1.0 + 0.6))


@given(st.floats(0.1, 10.0), st.floats(-0.4, 0.45))
@settings(max_examples=50, deadline=None)
def test_young_poisson_round_trip(young, poisson):
    for dim in (2, 3):
        m = IsotropicModuli.from_young_poisson(young, poisson, dim)
        assert np.isclose(m.young(dim), young)
        assert np.isclose(m.poisson(dim), poisson)


def test_phase_moduli_contrast():
    moduli = phase_moduli(1e-3, 3)
    assert np.isclose(moduli[2].mu / moduli[1].mu, 1e-3)
    assert np.isclose(moduli[2].lam / moduli[1].lam, 1e-3)


def test_constitutive_identity_strain():
    # 2D matrix values: eps = I -> sigma = 2.0 I  (tr eps = 2, 0.4*2 + 1.2)
    spec = GridSpec(2, 4)
    phases = PhaseGrid(spec, np.ones(spec.shape, dtype=np.uint8))
    f = spec.constant_field([1.0, 1.0, 0.0])
    sig = apply_isotropic_elasticity(f, phases, {1: IsotropicModuli(0.4, 0.6)})
    assert np.allclose(sig[0], 2.0)
    assert np.allclose(sig[1], 2.0)
    assert np.allclose(sig[2], 0.0)


def test_constitutive_pure_shear():
    spec = GridSpec(2, 4)
    phases = PhaseGrid(spec, np.ones(spec.shape, dtype=np.uint8))
    f = spec.constant_field([0.0, 0.0, 0.5])
    sig = apply_isotropic_elasticity(f, phases, {1: IsotropicModuli(0.4, 0.6)})
    assert np.allclose(sig[2], 0.6)
    assert np.allclose(sig[0], 0.0)
    assert np.allclose(sig[1], 0.0)


def test_constitutive_zero():
    spec = GridSpec(3, 4)
    phases = random_phases(spec, seed=1)
    sig = apply_isotropic_elasticity(spec.zeros(), phases, phase_moduli(10, 3))
    assert np.all(sig == 0.0)


def test_constitutive_shape_mismatch():
    spec = GridSpec(2, 4)
    phases = PhaseGrid(spec, np.ones(spec.shape, dtype=np.uint8))
    with pytest.raises(ValueError):
        apply_isotropic_elasticity(GridSpec(2, 6).zeros(), phases,
                                   {1: IsotropicModuli(0.4, 0.6)})


def test_constitutive_linearity(rng):
    spec = GridSpec(2, 6)
    phases = random_phases(spec, seed=2)
    moduli = phase_moduli(5.0, 2)
    f1 = random_field(spec, seed=1)
    f2 = random_field(spec, seed=2)
    lhs = apply_isotropic_elasticity(2.5 * f1 - 0.5 * f2, phases, moduli)
    rhs = (2.5 * apply_isotropic_elasticity(f1, phases, moduli)
           - 0.5 * apply_isotropic_elasticity(f2, phases, moduli))
    assert np.allclose(lhs, rhs)


def test_isotropic_inverse_round_trip(rng):
    for dim in (2, 3):
        m = IsotropicModuli(0.7, 1.1)
        ncomp = 3 if dim == 2 else 6
        t = rng.normal(size=(ncomp, 5))
        sig = isotropic_stress(t, m.lam, m.mu)
        back = isotropic_inverse(sig, m, dim)
        assert np.allclose(back, t)


def test_frobenius_identity_2d():
    assert np.isclose(frobenius_norm([1.0, 1.0, 0.0], 2), np.sqrt(2))


def test_frobenius_counts_shear_twice():
    # sigma12 = 1: both sigma12 and sigma21 enter the ij sum
    assert np.isclose(frobenius_norm([0.0, 0.0, 1.0], 2), np.sqrt(2))
    assert np.isclose(frobenius_norm([0, 0, 0, 0, 0, 1.0], 3), np.sqrt(2))


def test_frobenius_zero():
    assert frobenius_norm([0.0, 0.0, 0.0], 2) == 0.0


def test_unit_loading():
    l11 = LoadingSpec.unit(3, "11")
    assert np.allclose(l11.array, [1, 0, 0, 0, 0, 0])
    assert l11.unit_component_index() == 0
    l12 = LoadingSpec.unit(2, "12")
    assert np.allclose(l12.array, [0, 0, 0.5])
    assert l12.unit_component_index() == 2
    with pytest.raises(ValueError):
        LoadingSpec.unit(2, "33")
    with pytest.raises(ValueError):
        LoadingSpec(2, (1.0, 1.0, 0.0)).unit_component_index()
    with pytest.raises(ValueError):
        LoadingSpec(2, (0.0, 0.0, 1.0)).unit_component_index()
