import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcheck.errors import DegreeError, HodgeTypeError, NonHomogeneousError, WeightError
from hkcheck.forms import hodge_type_decompose, is_pp, structure_action
from hkcheck.kahler import kahler_data
from hkcheck.quat import I, J, K, random_induced_structure, random_unit_quaternion
from hkcheck.sampling import random_form, random_positive_11, random_real_11, random_real_form
from hkcheck.su2 import (
    from_K20,
    invariant_projection,
    is_invariant,
    to_K20,
    weight2_part,
    weight2_via_K,
    weight_split,
)

from conftest import model

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_projection_is_invariant_and_idempotent(seed):
    m = model(2)
    rng = np.random.default_rng(seed)
    eta = random_form(m, rng, 2)
    p = invariant_projection(eta)
    assert invariant_projection(p) == p
    g = random_unit_quaternion(rng, m.backend)
    assert structure_action(g, p) == p
    assert is_invariant(p)


def test_projection_matches_haar_average_float():
    """Average of rho(g) eta over many random unit quaternions approaches the projector."""
    m = model(1, "float")
    rng = np.random.default_rng(0)
    eta = random_real_form(m, rng, 2)
    acc = m.zero()
    samples = 4000
    for _ in range(samples):
        acc = acc + structure_action(random_unit_quaternion(rng, m.backend), eta)
    diff = acc / samples - invariant_projection(eta)
    assert max(abs(complex(c)) for c in diff.terms.values()) < 0.15 * eta.scale()


def test_omega_I_is_weight_two():
    m = model(2)
    kd = kahler_data(m)
    assert invariant_projection(kd.omega_I).is_zero()
    s = weight_split(kd.omega_I)
    assert s.eta0.is_zero() and s.etaPlus == kd.omega_I


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weight_split_is_k_split(n):
    m = model(n)
    rng = np.random.default_rng(n)
    for _ in range(3):
        eta = random_real_11(m, rng)
        parts = hodge_type_decompose(eta, K)
        s = weight_split(eta)
        assert s.eta0 == parts.get((1, 1), m.zero())
        assert s.etaPlus == parts.get((2, 0), m.zero()) + parts.get((0, 2), m.zero())
        assert weight2_part(eta) == weight2_via_K(eta)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_k20_roundtrip_and_reality(n):
    m = model(n)
    kd = kahler_data(m)
    rng = np.random.default_rng(20 + n)
    for _ in range(3):
        ep = weight2_part(random_real_11(m, rng))
        rho = to_K20(ep)
        assert from_K20(rho) == ep
        assert m.I_op(rho) == rho.conj()
        assert is_pp(rho + rho.conj(), I)


def test_positive_eta_gives_k_positive():
    m = model(2)
    kd = kahler_data(m)
    rng = np.random.default_rng(3)
    for _ in range(5):
        eta = random_positive_11(m, rng)
        ep = weight2_part(eta)
        assert kd.is_positive_11(ep)
        assert kd.is_K_positive(to_K20(ep))
        assert kd.is_positive_11(-m.K_op(eta))


def test_errors():
    m = model(2)
    kd = kahler_data(m)
    with pytest.raises(WeightError):
        to_K20(kd.omega_I + invariant_projection((m.z(1) ^ m.zb(1)) * m.backend.i))
    with pytest.raises(HodgeTypeError):
        to_K20(kd.omega_J)
    with pytest.raises(HodgeTypeError):
        from_K20(m.z(1) ^ m.zb(1))
    with pytest.raises(DegreeError):
        invariant_projection(m.z(1))
    with pytest.raises(NonHomogeneousError):
        is_invariant(m.z(1) + (m.z(1) ^ m.zb(1)))


def test_invariant_four_forms():
    m = model(2)
    rng = np.random.default_rng(11)
    a = invariant_projection(random_real_form(m, rng, 2))
    b = invariant_projection(random_real_form(m, rng, 2))
    phi = a ^ b
    assert is_invariant(phi)
    L = random_induced_structure(rng, m.backend)
    assert is_pp(phi, L)
    kd = kahler_data(m)
    assert not is_invariant(kd.omega_I ^ kd.omega_I)
    assert is_invariant((kd.omega_I ^ kd.omega_I) + (kd.omega_J ^ kd.omega_J) + (kd.omega_K ^ kd.omega_K))
