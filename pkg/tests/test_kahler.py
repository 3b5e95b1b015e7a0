import math

import numpy as np
import pytest
from gmpy2 import mpq

from hkcheck.errors import DegreeError, HodgeTypeError, RealityError
from hkcheck.kahler import evaluate2, kahler_data
from hkcheck.quat import I, J, K, InducedStructure, random_induced_structure
from hkcheck.sampling import form_from_hermitian, random_positive_11, random_real_11, random_real_form
from hkcheck.scalars import GaussRat
from hkcheck.su2 import invariant_projection

from conftest import model
from oracles import frame_values, left_mult_matrix, metric


@pytest.mark.parametrize("n", [1, 2])
def test_omega_matches_real_model(n):
    """omega_L(u, v) = G(L u, v) with L acting by left multiplication."""
    m = model(n, "float")
    kd = kahler_data(m)
    rng = np.random.default_rng(10 + n)
    Ls = [I, J, K] + [random_induced_structure(rng, m.backend) for _ in range(3)]
    for L in Ls:
        R = left_mult_matrix((0,) + tuple(float(c) for c in L.components()), n)
        w = kd.omega(L)
        for _ in range(4):
            u, v = rng.standard_normal(4 * n), rng.standard_normal(4 * n)
            got = evaluate2(w, frame_values(u, n), frame_values(v, n))
            assert complex(got) == pytest.approx(metric(R @ u, v))


def test_named_kahler_forms():
    m = model(1)
    kd = kahler_data(m)
    i = m.backend.i
    assert kd.omega_I == ((m.z(1) ^ m.zb(1)) + (m.z(2) ^ m.zb(2))) * i
    assert kd.Omega_I == (m.z(1) ^ m.z(2)) * 2
    assert kd.omega(InducedStructure(mpq(3, 5), mpq(4, 5), 0)) == kd.omega_I * mpq(3, 5) + kd.omega_J * mpq(4, 5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_degree_is_factorial_times_lambda(n):
    m = model(n)
    kd = kahler_data(m)
    rng = np.random.default_rng(n)
    fact = math.factorial(m.N - 1)
    assert kd.lambda2(kd.omega_I) == m.N
    assert kd.degree_integrand(kd.omega_I) == math.factorial(m.N)
    for _ in range(3):
        eta = random_real_form(m, rng, 2)
        L = random_induced_structure(rng, m.backend)
        assert kd.degree_integrand(eta, L) == kd.lambda2(eta, L) * fact


def test_lambda_of_invariant_vanishes():
    m = model(2)
    kd = kahler_data(m)
    rng = np.random.default_rng(5)
    eta = invariant_projection(random_real_form(m, rng, 2))
    assert not eta.is_zero()
    for _ in range(5):
        assert kd.lambda2(eta, random_induced_structure(rng, m.backend)) == 0


def test_lambda_rejects_wrong_degree():
    m = model(1)
    with pytest.raises(DegreeError):
        kahler_data(m).lambda2(m.z(1))


def test_e_form_constants():
    assert kahler_data(model(1)).e_form().c_n == 1
    assert kahler_data(model(2)).e_form().c_n == GaussRat(mpq(3, 4))
    r = kahler_data(model(3)).e_form()
    assert r.c_n == GaussRat(mpq(5, 8))
    assert r.proportional and r.positive


def test_positive_11_matches_eigenvalues():
    m = model(2)
    kd = kahler_data(m)
    rng = np.random.default_rng(2)
    for _ in range(20):
        eta = random_real_11(m, rng)
        h = np.array([[complex(x) for x in row] for row in kd.hermitian_11(eta)])
        assert kd.is_positive_11(eta) == (np.linalg.eigvalsh(h).min() >= -1e-12)
        assert kd.is_positive_11(random_positive_11(m, rng))


def test_positive_11_errors():
    m = model(2)
    kd = kahler_data(m)
    with pytest.raises(HodgeTypeError):
        kd.is_positive_11(m.z(1) ^ m.z(2))
    with pytest.raises(RealityError):
        kd.is_positive_11(m.z(1) ^ m.zb(1))


def test_codim1_of_power_is_positive():
    """omega^{N-1} pairs positively with i z_c ^ conj(z_c)."""
    m = model(2)
    kd = kahler_data(m)
    assert kd.is_positive_codim1(kd.omega_power(I, m.N - 1))
    assert not kd.is_positive_codim1(-kd.omega_power(I, m.N - 1))
    rng = np.random.default_rng(0)
    c = [GaussRat(int(rng.integers(-3, 4)), int(rng.integers(-3, 4))) for _ in range(m.N)]
    H = kd.codim1_hermitian(kd.omega_power(I, m.N - 1))
    direct = kd.codim1_quadratic(kd.omega_power(I, m.N - 1), c)
    quad = sum((c[a].conjugate() * H[a][b] * c[b] for a in range(m.N) for b in range(m.N)), GaussRat(0))
    assert direct == quad


def test_k_positive_example():
    m = model(1)
    kd = kahler_data(m)
    rho = kd.Omega_K
    # Omega_K = omega_I + i omega_J is (2,0) for K with I(rho) = conj(rho)
    assert kd.is_K_positive(rho)
    assert not kd.is_K_positive(-rho)
    with pytest.raises(HodgeTypeError):
        kd.is_K_positive(kd.Omega_I)


def test_condition_b_on_holomorphic_symplectic_form():
    m = model(2)
    kd = kahler_data(m)
    eta = kd.Omega_I
    assert kd.satisfies_reality_J(eta)
    assert kd.satisfies_positivity_b(eta)
    assert not kd.satisfies_positivity_b(-eta)


def test_hermitian_roundtrip():
    m = model(1)
    kd = kahler_data(m)
    h = [[GaussRat(2), GaussRat(1, 1)], [GaussRat(1, -1), GaussRat(3)]]
    assert kd.hermitian_11(form_from_hermitian(m, h)) == h
