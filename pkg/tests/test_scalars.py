import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcheck.scalars import (
    ExactBackend,
    FloatBackend,
    GaussRat,
    det,
    get_backend,
    scalar_from_json,
    scalar_to_json,
)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussRat, fracs, fracs)


@given(gauss, gauss)
def test_field_ops_match_complex(a, b):
    ca, cb = complex(a), complex(b)
    assert complex(a + b) == pytest.approx(ca + cb)
    assert complex(a - b) == pytest.approx(ca - cb)
    assert complex(a * b) == pytest.approx(ca * cb)
    if b:
        assert complex(a / b) == pytest.approx(ca / cb)
        assert (a / b) * b == a


@given(gauss)
def test_json_roundtrip(a):
    assert scalar_from_json(json.loads(json.dumps(scalar_to_json(a)))) == a


def test_conjugate_and_abs2():
    z = GaussRat(3, -4)
    assert z.conjugate() == GaussRat(3, 4)
    assert z.abs2() == 25
    assert z * z.conjugate() == GaussRat(25, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10_000))
def test_is_psd_agrees_with_eigenvalues(k, seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    B = rng.integers(-3, 4, size=(n, k)) + 1j * rng.integers(-3, 4, size=(n, k))
    H = B @ B.conj().T
    if rng.random() < 0.5:
        H = H - int(rng.integers(0, 4)) * np.eye(n)
    psd = np.linalg.eigvalsh(H).min() >= -1e-9
    exact = [[GaussRat(int(H[a, b].real), int(H[a, b].imag)) for b in range(n)] for a in range(n)]
    assert ExactBackend().is_psd(exact) == psd
    assert FloatBackend(1e-9).is_psd(H.tolist()) == psd


def test_is_psd_rejects_non_hermitian():
    bk = ExactBackend()
    assert not bk.is_psd([[GaussRat(1), GaussRat(0, 1)], [GaussRat(0, 1), GaussRat(1)]])


def test_det_small():
    m = [[GaussRat(1), GaussRat(2)], [GaussRat(3), GaussRat(4)]]
    assert det(m) == GaussRat(-2)


def test_float_tolerance_scales():
    bk = FloatBackend(1e-9)
    assert bk.is_zero(5e-10)
    assert not bk.is_zero(5e-9)
    assert bk.is_zero(5e-9, scale=10.0)


def test_get_backend():
    assert get_backend("exact").exact
    assert not get_backend("float", 1e-6).exact
    with pytest.raises(ValueError):
        get_backend("decimal")
