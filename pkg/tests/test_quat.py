import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from hkcheck.quat import (
    CYCLE_KIJ,
    I,
    J,
    K,
    InducedStructure,
    Quaternion,
    UnitQuaternion,
    conjugate_structure,
    quat_mul,
    random_induced_structure,
    random_unit_quaternion,
)
from hkcheck.scalars import ExactBackend, FloatBackend

from oracles import hamilton

ints = st.integers(-9, 9)
quats = st.builds(Quaternion, ints, ints, ints, ints)


def test_unit_relations():
    i, j, k = Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
    minus_one = Quaternion(-1)
    assert i * i == minus_one and j * j == minus_one and k * k == minus_one
    assert i * j == k and j * k == i and k * i == j
    assert j * i == -k


@given(quats, quats)
def test_product_matches_oracle(p, q):
    ours = np.array([float(c) for c in quat_mul(p, q).components()])
    assert np.allclose(ours, hamilton(p.components(), q.components()))


@given(quats, quats, quats)
def test_associative_and_multiplicative_norm(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert (p * q).norm2() == p.norm2() * q.norm2()


@given(quats)
def test_inverse(q):
    if q.norm2():
        assert q * q.inverse() == Quaternion(1)


def test_unit_quaternion_rejects_non_unit():
    with pytest.raises(ValueError):
        UnitQuaternion(Quaternion(1, 1))
    u = UnitQuaternion(Quaternion(mpq(3, 5), mpq(4, 5)))
    assert (u * u.inverse()).q == Quaternion(1)


def test_induced_structure_on_sphere():
    with pytest.raises(ValueError):
        InducedStructure(1, 1, 0)
    assert I.is_basis() == "I" and K.is_basis() == "K"
    assert InducedStructure(mpq(3, 5), 0, mpq(4, 5)).is_basis() is None


def test_cycle_element():
    assert conjugate_structure(CYCLE_KIJ, K) == I
    assert conjugate_structure(CYCLE_KIJ, I) == J
    assert conjugate_structure(CYCLE_KIJ, J) == K


def test_conjugation_accepts_non_unit():
    # 1 + j rotates by a quarter turn about j: I -> -K
    assert conjugate_structure(Quaternion(1, 0, 1, 0), I) == -K


@pytest.mark.parametrize("bk", [ExactBackend(), FloatBackend()], ids=["exact", "float"])
def test_random_draws(bk):
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = random_unit_quaternion(rng, bk)
        L = random_induced_structure(rng, bk)
        a, b, c = L.components()
        assert abs(float(a * a + b * b + c * c) - 1) < 1e-12
        if bk.exact:
            assert g.q.norm2() == 1
            assert all(isinstance(x, type(mpq(1))) for x in L.components())
