"""Scalar backends: exact Gaussian rationals and binary floating point.

Every other module is written against plain arithmetic operators, so the same
code runs on :class:`GaussRat` (exact) and Python ``complex`` (float).  Anything
that needs a *decision* (is this zero? is this matrix PSD?) goes through a
:class:`Backend`, which is the only place tolerances live.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

__all__ = [
    "GaussRat",
    "Backend",
    "ExactBackend",
    "FloatBackend",
    "get_backend",
    "scalar_to_json",
    "scalar_from_json",
]


def _q(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x)
    if isinstance(x, float):
        raise TypeError("refusing to mix binary floats into exact arithmetic")
    return mpq(x)


class GaussRat:
    """Exact complex rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "GaussRat":
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    @staticmethod
    def coerce(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, complex):
            raise TypeError("refusing to mix binary floats into exact arithmetic")
        return GaussRat(x)

    @property
    def real(self) -> mpq:
        return self.re

    @property
    def imag(self) -> mpq:
        return self.im

    def conjugate(self) -> "GaussRat":
        return GaussRat._raw(self.re, -self.im)

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, mpq, Fraction)):
            return GaussRat._raw(self.re + _q(other), self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, mpq, Fraction)):
            return GaussRat._raw(self.re - _q(other), self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, mpq, Fraction)):
            return GaussRat._raw(_q(other) - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussRat):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussRat._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, mpq, Fraction)):
            o = _q(other)
            return GaussRat._raw(self.re * o, self.im * o)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, mpq, Fraction)):
            o = _q(other)
            return GaussRat._raw(self.re / o, self.im / o)
        if isinstance(other, GaussRat):
            n = other.abs2()
            c, d = other.re, other.im
            return GaussRat._raw(
                (self.re * c + self.im * d) / n, (self.im * c - self.re * d) / n
            )
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) / self

    def __neg__(self):
        return GaussRat._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (GaussRat(1) / self) ** (-k)
        out = GaussRat(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, mpq, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussRat({self.re})"
        return f"GaussRat({self.re}, {self.im})"


def _fmt_q(x) -> str:
    x = _q(x)
    return f"{x.numerator}/{x.denominator}"


def scalar_to_json(x):
    """Serialize a scalar as ``[re, im]``.

    Exact values become ``"num/den"`` strings so that a round-trip is
    bit-exact; floats stay JSON numbers.
    """
    if isinstance(x, GaussRat):
        return [_fmt_q(x.re), _fmt_q(x.im)]
    if isinstance(x, (mpq, Fraction)):
        return [_fmt_q(x), "0/1"]
    if isinstance(x, int):
        return [f"{x}/1", "0/1"]
    z = complex(x)
    return [z.real, z.imag]


def scalar_from_json(v):
    re, im = v
    if isinstance(re, str):
        return GaussRat(mpq(re), mpq(im))
    return complex(re, im)


class Backend:
    """Arithmetic policy shared by all modules for one run."""

    name = "abstract"
    exact = False
    tol = 0.0

    zero: object
    one: object
    i: object

    def scalar(self, re, im=0):
        raise NotImplementedError

    def rational(self, num: int, den: int = 1):
        raise NotImplementedError

    def is_zero(self, x, scale: float = 1.0) -> bool:
        raise NotImplementedError

    def is_real(self, x, scale: float = 1.0) -> bool:
        return self.is_zero(x.imag if hasattr(x, "imag") else 0, scale)

    def eq(self, a, b, scale: float = 1.0) -> bool:
        return self.is_zero(a - b, scale)

    def nonneg(self, x, scale: float = 1.0) -> bool:
        """``x`` real and ``>= 0`` (up to tolerance in float mode)."""
        raise NotImplementedError

    def positive(self, x, scale: float = 1.0) -> bool:
        raise NotImplementedError

    def to_json(self, x):
        return scalar_to_json(x)

    def from_json(self, v):
        return self.coerce(scalar_from_json(v))

    def coerce(self, x):
        raise NotImplementedError

    def real_value(self, x):
        """Real part as a JSON-friendly value (string for exact)."""
        raise NotImplementedError

    def magnitude(self, x) -> float:
        return abs(complex(x))

    def is_psd(self, h: Sequence[Sequence]) -> bool:
        raise NotImplementedError


class ExactBackend(Backend):
    name = "exact"
    exact = True
    tol = 0.0

    def __init__(self):
        self.zero = GaussRat(0)
        self.one = GaussRat(1)
        self.i = GaussRat(0, 1)

    def scalar(self, re, im=0):
        return GaussRat(re, im)

    def rational(self, num, den=1):
        return GaussRat(mpq(num, den))

    def coerce(self, x):
        return GaussRat.coerce(x)

    def is_zero(self, x, scale=1.0):
        return not x

    def eq(self, a, b, scale=1.0):
        return a == b

    def nonneg(self, x, scale=1.0):
        x = GaussRat.coerce(x)
        return x.im == 0 and x.re >= 0

    def positive(self, x, scale=1.0):
        x = GaussRat.coerce(x)
        return x.im == 0 and x.re > 0

    def real_value(self, x):
        return _fmt_q(GaussRat.coerce(x).re)

    def is_psd(self, h):
        """Hermitian PSD test via all principal minors (exact)."""
        n = len(h)
        for i in range(n):
            if h[i][i].im != 0:
                return False
            for j in range(i + 1, n):
                if h[i][j] != h[j][i].conjugate():
                    return False
        for k in range(1, n + 1):
            for idx in itertools.combinations(range(n), k):
                d = det([[h[a][b] for b in idx] for a in idx])
                if d.im != 0 or d.re < 0:
                    return False
        return True


class FloatBackend(Backend):
    name = "float"
    exact = False

    def __init__(self, tol: float = 1e-9):
        self.tol = float(tol)
        self.zero = 0j
        self.one = 1 + 0j
        self.i = 1j

    def scalar(self, re, im=0):
        return complex(float(re), float(im))

    def rational(self, num, den=1):
        return complex(num / den)

    def coerce(self, x):
        return complex(x)

    def is_zero(self, x, scale=1.0):
        return abs(complex(x)) <= self.tol * max(1.0, scale)

    def nonneg(self, x, scale=1.0):
        z = complex(x)
        t = self.tol * max(1.0, scale)
        return abs(z.imag) <= t and z.real >= -t

    def positive(self, x, scale=1.0):
        z = complex(x)
        t = self.tol * max(1.0, scale)
        return abs(z.imag) <= t and z.real > t

    def real_value(self, x):
        return complex(x).real

    def is_psd(self, h):
        m = np.array([[complex(v) for v in row] for row in h], dtype=complex)
        if m.size == 0:
            return True
        norm = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > self.tol * norm:
            return False
        ev = np.linalg.eigvalsh((m + m.conj().T) / 2)
        return bool(ev.min() >= -self.tol * norm)


def get_backend(name: str, tol: float = 1e-9) -> Backend:
    if name == "exact":
        return ExactBackend()
    if name == "float":
        return FloatBackend(tol)
    raise ValueError(f"unknown backend {name!r}")


def det(m: Sequence[Sequence]):
    """Determinant by Gaussian elimination; works for exact and float entries."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    acc = None
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return a[0][0] * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        acc = p if acc is None else acc * p
        for r in range(col + 1, n):
            if not a[r][col]:
                continue
            f = a[r][col] / p
            row_r, row_c = a[r], a[col]
            for c in range(col + 1, n):
                row_r[c] = row_r[c] - f * row_c[c]
    return acc if sign > 0 else -acc


def trace_product(a: Sequence[Sequence], b: Sequence[Sequence]):
    """``Tr(a @ b)`` without forming the product."""
    total = None
    for i, row in enumerate(a):
        for k, v in enumerate(row):
            t = v * b[k][i]
            total = t if total is None else total + t
    return total


def matmul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = a[i][0] * b[0][j]
            for k in range(1, m):
                s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(row)
    return out


def dagger(a):
    return [[a[i][j].conjugate() for i in range(len(a))] for j in range(len(a[0]))]


def sum_scalars(xs: Iterable, zero):
    total = zero
    for x in xs:
        total = total + x
    return total
