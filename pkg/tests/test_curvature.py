import math

import numpy as np
import pytest

from hkcheck import curvature as cv
from hkcheck.errors import HodgeTypeError
from hkcheck.kahler import kahler_data
from hkcheck.quat import I
from hkcheck.scalars import GaussRat, trace_product
from hkcheck.su2 import is_invariant

from conftest import model
from oracles import mixed_top, two_form_matrix


def _theta(n, r, seed, invariant=True, traceless=True):
    m = model(n)
    rng = np.random.default_rng(seed)
    if invariant:
        return cv.random_invariant_ym_curvature(m, r, rng, traceless=traceless)
    return cv.random_ym_curvature(m, r, rng, traceless=traceless)


def test_u1_example_by_hand():
    """Theta = i a (z1 zb1 - z2 zb2) with a = i t: ratio 1 at N = 2."""
    m = model(1)
    t = GaussRat(3)
    a = GaussRat(0, 3)
    A = [[[[a]], [[GaussRat(0)]]], [[[GaussRat(0)]], [[-a]]]]
    theta = cv.curvature_from_blocks(m, A)
    ratio, positive = cv.hodge_riemann_check(theta)
    assert ratio == 1 and positive
    assert cv.killing_norm(theta) == 2 * t * t


@pytest.mark.parametrize("n,r", [(2, 2), (2, 3), (3, 2)])
def test_invariant_curvature_properties(n, r):
    theta = _theta(n, r, 10 * n + r)
    m = theta.model
    zero = [[GaussRat(0)] * r for _ in range(r)]
    assert cv.lambda_endo(theta) == zero
    A = theta.blocks()
    for k in range(m.N):
        assert all(A[k][l] == [[-x.conjugate() for x in row] for row in zip(*A[l][k])] for l in range(m.N))
    for k in range(0, m.N, 2):
        assert A[k][k] == [[-x for x in row] for row in A[k + 1][k + 1]]
    assert all(is_invariant(theta.entry(s, t)) for s in range(r) for t in range(r))


@pytest.mark.parametrize("n,r", [(2, 2), (2, 4), (3, 3)])
def test_b_direct_equals_formula(n, r):
    theta = _theta(n, r, 7 * n + r)
    direct = cv.b_coefficients(theta, "direct")
    formula = cv.b_coefficients(theta, "formula")
    for i in range(theta.model.N):
        assert direct[i][i] == formula[i][i]
        assert direct[i][i].imag == 0 and direct[i][i].real >= 0


@pytest.mark.parametrize("n,r", [(2, 2), (3, 3)])
def test_c_ii_three_ways(n, r):
    theta = _theta(n, r, 3 * n + r)
    for i in range(theta.model.N):
        res = cv.c_ii(theta, i)
        assert res.definition == res.intermediate == res.final
        assert res.final.imag == 0 and res.final.real >= 0


def test_w_basis_sign_is_unit():
    for n in (2, 3):
        eps = cv.w_basis_sign(model(n))
        assert eps * eps.conjugate() == 1


def test_codim1_quadratic_matches_permutation_oracle():
    """Q(c) from the wedge code equals a brute-force sum over pairings (N = 4)."""
    m = model(2)
    kd = kahler_data(m)
    theta = _theta(2, 2, 99)
    nu = cv.r2(theta).wedge(kd.omega_power(I, m.N - 3))
    W = two_form_matrix(kd.omega_I)
    vol_top = mixed_top([W] * m.N) / math.factorial(m.N)
    rng = np.random.default_rng(1)
    for _ in range(2):
        c = [GaussRat(int(rng.integers(-2, 3)), int(rng.integers(-2, 3))) for _ in range(m.N)]
        zc = m.zero()
        for k, ck in enumerate(c):
            zc = zc + m.z(k + 1) * ck
        beta = two_form_matrix((zc ^ zc.conj()) * m.backend.i)
        oracle = 0j
        for s in range(2):
            for t in range(2):
                ts = two_form_matrix(theta.entry(s, t))
                st = two_form_matrix(theta.entry(t, s))
                oracle += mixed_top([ts, st, W, beta][: m.N])
        ours = complex(kd.codim1_quadratic(nu, c))
        assert ours == pytest.approx(oracle / vol_top)
        assert ours.real >= -1e-12


def test_hodge_riemann_ratio_matches_oracle():
    m = model(2)
    kd = kahler_data(m)
    theta = _theta(2, 2, 5, invariant=False, traceless=False)
    W = two_form_matrix(kd.omega_I)
    vol_top = mixed_top([W] * m.N) / math.factorial(m.N)
    top = sum(
        mixed_top([two_form_matrix(theta.entry(s, t)), two_form_matrix(theta.entry(t, s)), W, W])
        for s in range(2)
        for t in range(2)
    )
    ratio, positive = cv.hodge_riemann_check(theta)
    assert complex(ratio) == pytest.approx(top / vol_top / complex(cv.killing_norm(theta)))
    assert ratio == 2 and positive


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hodge_riemann_ratio_is_factorial(n):
    N = 2 * n
    for seed in range(3):
        theta = _theta(n, 2, seed, invariant=bool(seed % 2), traceless=False)
        ratio, positive = cv.hodge_riemann_check(theta)
        assert ratio == math.factorial(N - 2) and positive


def test_hodge_riemann_needs_lambda_zero():
    m = model(1)
    A = [[[[GaussRat(0, 1)]], [[GaussRat(0)]]], [[[GaussRat(0)]], [[GaussRat(0)]]]]
    with pytest.raises(ValueError):
        cv.hodge_riemann_check(cv.curvature_from_blocks(m, A))


def test_blocks_reject_wrong_type():
    m = model(1)
    bad = cv.BundleForm(m, 1, 1, {(1 << 0) | (1 << 1): [[GaussRat(1)]]})
    with pytest.raises(HodgeTypeError):
        bad.blocks()


def test_subbundle_identity_and_positivity():
    m = model(2)
    rng = np.random.default_rng(4)
    theta = cv.random_invariant_ym_curvature(m, 3, rng, traceless=False)
    A = cv.random_second_form(m, 1, 2, rng)
    th1 = cv.subbundle_curvature(theta, A)
    # entrywise: Theta'_{st} = Theta_{st} - sum_{k,l} z_k ^ zb_l (A_l^dagger A_k)_{st}
    N = m.N
    for s in range(1):
        for t in range(1):
            expect = theta.entry(s, t)
            for k in range(N):
                for l in range(N):
                    v = sum((A.mats[l][u][s].conjugate() * A.mats[k][u][t] for u in range(2)), GaussRat(0))
                    expect = expect - (m.z(k + 1) ^ m.zb(l + 1)) * v
            assert th1.entry(s, t) == expect
    kd = kahler_data(m)
    gram = cv.trace_a_aperp(A) * m.backend.i
    assert kd.is_positive_11(gram)
    deg_drop = kd.degree_integrand(-th1.trace() * m.backend.i) - kd.degree_integrand(-theta.block(range(1), range(1)).trace() * m.backend.i)
    assert deg_drop.real > 0


def test_chern_densities_traceless():
    theta = _theta(2, 2, 8)
    ch = cv.chern_integrands(theta)
    assert ch.c1_density.is_zero()
    assert ch.disc_density == cv.r2(theta)
    assert ch.c1_scale == "1/(2*pi)"


def test_bundle_json_roundtrip():
    theta = _theta(2, 2, 2)
    assert cv.BundleForm.from_json(theta.model, theta.to_json()).equals(theta)
    A = cv.random_second_form(theta.model, 1, 1, np.random.default_rng(0))
    B = cv.SecondForm.from_json(theta.model, A.to_json())
    assert B.mats == A.mats


def test_killing_norm_is_trace_of_square():
    theta = _theta(2, 3, 1, invariant=False)
    A = theta.blocks()
    N = theta.model.N
    alt = -sum((trace_product(A[k][l], A[l][k]) for k in range(N) for l in range(N)), GaussRat(0))
    assert alt == cv.killing_norm(theta)
