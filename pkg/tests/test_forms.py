import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcheck.errors import DegreeError, ModelMismatchError, NonHomogeneousError
from hkcheck.forms import Form, conj, hodge_type_decompose, is_pp, is_real, structure_action
from hkcheck.quat import I, J, K, Quaternion, random_induced_structure, random_unit_quaternion
from hkcheck.sampling import random_form, random_real_form

from conftest import model
from oracles import left_mult_matrix, pullback_matrix

seeds = st.integers(0, 2**32 - 1)
slow = settings(max_examples=25, deadline=None)


def _mat(op):
    return np.array([[complex(x) for x in row] for row in op.matrix()])


def test_basis_products(exact_model):
    m = exact_model
    z1, zb1 = m.z(1), m.zb(1)
    assert (z1 ^ z1).is_zero()
    assert (z1 ^ zb1) == -(zb1 ^ z1)
    assert conj(z1) == zb1


@slow
@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_graded_commutativity(seed, p, q):
    m = model(2)
    rng = np.random.default_rng(seed)
    a, b = random_form(m, rng, p), random_form(m, rng, q)
    assert (a ^ b) == (b ^ a) * (-1) ** (p * q)


@slow
@given(seeds)
def test_wedge_associative_and_distributive(seed):
    m = model(2)
    rng = np.random.default_rng(seed)
    a, b, c = (random_form(m, rng, int(rng.integers(0, 3))) for _ in range(3))
    assert ((a ^ b) ^ c) == (a ^ (b ^ c))
    assert (a ^ (b + c)) == (a ^ b) + (a ^ c)


@slow
@given(seeds)
def test_conj_is_antilinear_involution(seed):
    m = model(2)
    rng = np.random.default_rng(seed)
    a, b = random_form(m, rng, 1), random_form(m, rng, 2)
    i = m.backend.i
    assert conj(conj(a)) == a
    assert conj(a * i) == conj(a) * (-i)
    assert conj(a ^ b) == conj(a) ^ conj(b)
    assert is_real(random_real_form(m, rng, 2))


def test_model_mismatch():
    with pytest.raises(ModelMismatchError):
        model(1).z(1) + model(2).z(1)


def test_nonhomogeneous_degree_raises():
    m = model(1)
    with pytest.raises((NonHomogeneousError, DegreeError)):
        (m.z(1) + (m.z(1) ^ m.zb(1))).degree()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_structure_ops_are_left_multiplication(n):
    """I, J, K on covectors are pullbacks of left multiplication by i, j, k."""
    m = model(n, "float")
    for op, g in ((m.I_op, (0, 1, 0, 0)), (m.J_op, (0, 0, 1, 0)), (m.K_op, (0, 0, 0, 1))):
        assert np.allclose(_mat(op), pullback_matrix(left_mult_matrix(g, n), n))


@pytest.mark.parametrize("n", [1, 2])
def test_quaternion_action_oracle(n):
    """rho(g) is the pullback of left multiplication by g^-1."""
    m = model(n, "float")
    rng = np.random.default_rng(n)
    for _ in range(5):
        g = random_unit_quaternion(rng, m.backend)
        ginv = g.q.conj().components()
        assert np.allclose(_mat(m.quaternion_op(g)), pullback_matrix(left_mult_matrix(ginv, n), n))


def test_fault_injection_breaks_oracle():
    m = model(1, "float", fault=True)
    assert not np.allclose(_mat(m.J_op), pullback_matrix(left_mult_matrix((0, 0, 1, 0), 1), 1))


def test_j_dictionary_literal():
    m = model(1)
    J_ = m.J_op
    assert J_(m.z(1)) == -m.zb(2)
    assert J_(m.z(2)) == m.zb(1)
    assert J_(m.zb(1)) == -m.z(2)
    assert J_(m.zb(2)) == m.z(1)
    # on (1,1)-forms: J(z1 ^ zb1) = z2 ^ zb2 after reordering, minus sign included
    assert J_(m.z(1) ^ m.zb(1)) == -(m.z(2) ^ m.zb(2))


@pytest.mark.parametrize("deg", [1, 2, 3])
def test_hodge_decomposition_sums_and_types(deg):
    m = model(2)
    rng = np.random.default_rng(deg)
    f = random_form(m, rng, deg)
    for L in (I, J, K, random_induced_structure(rng, m.backend)):
        parts = hodge_type_decompose(f, L)
        total = m.zero()
        for (p, q), part in parts.items():
            assert p + q == deg
            i = m.backend.i
            assert m.structure_op(L).derivation(part).equals(part * (i * (p - q)))
            total = total + part
        assert total == f


def test_pp_forms():
    m = model(2)
    w = (m.z(1) ^ m.zb(1)) + (m.z(2) ^ m.zb(2))
    assert is_pp(w, I)
    assert not is_pp(m.z(1) ^ m.z(2), I)
    assert not is_pp(m.z(1) ^ m.z(2), J)
    # Re(z1 ^ z2) is a multiple of omega_J
    assert is_pp((m.z(1) ^ m.z(2)) + (m.zb(1) ^ m.zb(2)), J)


def test_json_roundtrip(model2):
    rng = np.random.default_rng(0)
    f = random_form(model2, rng, 2)
    assert Form.from_json(model2, f.to_json()) == f


def test_structure_action_is_multiplicative():
    m = model(2)
    rng = np.random.default_rng(7)
    g = random_unit_quaternion(rng, m.backend)
    a, b = random_form(m, rng, 1), random_form(m, rng, 2)
    assert structure_action(g, a ^ b) == structure_action(g, a) ^ structure_action(g, b)
    h = random_unit_quaternion(rng, m.backend)
    # rho is a homomorphism: rho(gh) = rho(g) rho(h)
    assert structure_action(g * h, a) == structure_action(g, structure_action(h, a))
