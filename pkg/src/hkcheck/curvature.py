"""Curvature algebra for u(r)-valued (1,1)-forms on the flat model.

A curvature is encoded as ``Theta = i sum_{k,l} z_k ^ zb_l (x) A_kl`` with the
skew-Hermitian reality condition ``A_lk = -A_kl^dagger`` (so each ``A_kk`` is
anti-Hermitian).  The factor ``i`` makes ``Lambda(Theta) = sum_k A_kk`` agree
with :meth:`KahlerData.lambda2` applied entrywise and makes ``Tr(Theta ^ Theta)``
of a u(1) curvature ``i eta`` equal ``-eta ^ eta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeError, HodgeTypeError
from .forms import FiberModel, Form, merge_sign
from .kahler import kahler_data
from .quat import I
from .sampling import random_matrix
from .scalars import Backend, dagger, matmul, scalar_from_json, scalar_to_json, trace_product
from .su2 import invariant_projection

__all__ = [
    "BundleForm",
    "SecondForm",
    "CiiResult",
    "ChernIntegrands",
    "curvature_from_blocks",
    "random_invariant_ym_curvature",
    "random_ym_curvature",
    "random_second_form",
    "lambda_endo",
    "r2",
    "b_coefficients",
    "w_basis_sign",
    "c_ii",
    "hodge_riemann_check",
    "subbundle_curvature",
    "trace_a_aperp",
    "chern_integrands",
    "killing_norm",
]


def _madd(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mscale(a, s):
    return [[x * s for x in row] for row in a]


def _mzero(backend: Backend, rows: int, cols: int | None = None):
    return [[backend.zero] * (rows if cols is None else cols) for _ in range(rows)]


def _is_zero_matrix(backend: Backend, a, scale: float = 1.0) -> bool:
    return all(backend.is_zero(x, scale) for row in a for x in row)


class BundleForm:
    """Sparse form with ``rows x cols`` matrix coefficients."""

    __slots__ = ("model", "rows", "cols", "terms")

    def __init__(self, model: FiberModel, rows: int, cols: int | None = None, terms: dict | None = None):
        self.model = model
        self.rows = rows
        self.cols = rows if cols is None else cols
        self.terms = {m: a for m, a in (terms or {}).items() if any(x for row in a for x in row)}

    @property
    def rank(self) -> int:
        return self.rows

    def __add__(self, other: "BundleForm") -> "BundleForm":
        out = dict(self.terms)
        for m, a in other.terms.items():
            out[m] = _madd(out[m], a) if m in out else a
        return BundleForm(self.model, self.rows, self.cols, out)

    def __neg__(self) -> "BundleForm":
        return BundleForm(self.model, self.rows, self.cols, {m: _mscale(a, -1) for m, a in self.terms.items()})

    def __sub__(self, other: "BundleForm") -> "BundleForm":
        return self + (-other)

    def __mul__(self, s) -> "BundleForm":
        return BundleForm(self.model, self.rows, self.cols, {m: _mscale(a, s) for m, a in self.terms.items()})

    __rmul__ = __mul__

    def wedge(self, other: "BundleForm") -> "BundleForm":
        """Wedge with matrix multiplication of coefficients."""
        out: dict[int, list] = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                if m1 & m2:
                    continue
                p = matmul(a, b)
                if merge_sign(m1, m2) < 0:
                    p = _mscale(p, -1)
                m = m1 | m2
                out[m] = _madd(out[m], p) if m in out else p
        return BundleForm(self.model, self.rows, other.cols, out)

    def trace(self) -> Form:
        zero = self.model.backend.zero
        return Form(self.model, {m: sum((a[i][i] for i in range(self.rows)), zero) for m, a in self.terms.items()})

    def trace_wedge(self, other: "BundleForm") -> Form:
        """``Tr(self ^ other)`` without forming the matrix products."""
        out: dict[int, object] = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                if m1 & m2:
                    continue
                t = trace_product(a, b)
                if merge_sign(m1, m2) < 0:
                    t = -t
                m = m1 | m2
                out[m] = out[m] + t if m in out else t
        return Form(self.model, out)

    def block(self, rows: range, cols: range) -> "BundleForm":
        return BundleForm(
            self.model,
            len(rows),
            len(cols),
            {m: [[a[i][j] for j in cols] for i in rows] for m, a in self.terms.items()},
        )

    def entry(self, s: int, t: int) -> Form:
        return Form(self.model, {m: a[s][t] for m, a in self.terms.items()})

    def map_entries(self, fn) -> "BundleForm":
        """Apply a linear map on forms to every matrix entry."""
        entries = {(s, t): fn(self.entry(s, t)) for s in range(self.rows) for t in range(self.cols)}
        out: dict[int, list] = {}
        zero = self.model.backend.zero
        for (s, t), f in entries.items():
            for m, c in f.terms.items():
                mat = out.get(m)
                if mat is None:
                    mat = out[m] = [[zero] * self.cols for _ in range(self.rows)]
                mat[s][t] = c
        return BundleForm(self.model, self.rows, self.cols, out)

    def is_zero(self) -> bool:
        bk = self.model.backend
        return all(_is_zero_matrix(bk, a) for a in self.terms.values())

    def equals(self, other: "BundleForm") -> bool:
        diff = self - other
        bk = self.model.backend
        scale = max((abs(complex(x)) for a in self.terms.values() for row in a for x in row), default=1.0)
        return all(_is_zero_matrix(bk, a, scale) for a in diff.terms.values())

    # -- curvature view ---------------------------------------------------------
    def blocks(self) -> list[list[list[list]]]:
        """``A_kl`` with ``self = i sum z_k ^ zb_l (x) A_kl``.

        Raises if there are components outside ``z_k ^ zb_l``.
        """
        model = self.model
        N = model.N
        bk = model.backend
        A = [[_mzero(bk, self.rows, self.cols) for _ in range(N)] for _ in range(N)]
        for m, a in self.terms.items():
            zs = m & model.low_mask
            zbs = m >> N
            if m.bit_count() != 2 or zs.bit_count() != 1 or zbs.bit_count() != 1:
                if _is_zero_matrix(bk, a):
                    continue
                raise HodgeTypeError("bundle form is not a (1,1)_I 2-form")
            k = zs.bit_length() - 1
            l = zbs.bit_length() - 1
            A[k][l] = _mscale(a, -bk.i)
        return A

    def to_json(self) -> dict:
        rows = []
        for m in sorted(self.terms, key=lambda m: (m.bit_count(), m)):
            idx = [a for a in range(self.model.dim) if m >> a & 1]
            rows.append([idx, [[scalar_to_json(x) for x in row] for row in self.terms[m]]])
        return {"rows": self.rows, "cols": self.cols, "terms": rows}

    @classmethod
    def from_json(cls, model: FiberModel, data: dict) -> "BundleForm":
        terms = {}
        for idx, mat in data["terms"]:
            mask = 0
            for a in idx:
                mask |= 1 << a
            terms[mask] = [[model.backend.coerce(scalar_from_json(x)) for x in row] for row in mat]
        return cls(model, data["rows"], data["cols"], terms)


def curvature_from_blocks(model: FiberModel, A: list) -> BundleForm:
    """``i sum z_k ^ zb_l (x) A_kl`` from the blocks ``A[k][l]``."""
    N = model.N
    i = model.backend.i
    r = len(A[0][0])
    terms = {(1 << k) | (1 << (N + l)): _mscale(A[k][l], i) for k in range(N) for l in range(N)}
    return BundleForm(model, r, r, terms)


def _random_skew_blocks(model: FiberModel, r: int, rng: np.random.Generator, traceless: bool) -> list:
    bk = model.backend
    N = model.N
    A = [[None] * N for _ in range(N)]
    for k in range(N):
        for l in range(k, N):
            M = random_matrix(rng, bk, r, r)
            if k == l:
                M = _madd(M, _mscale(dagger(M), -1))
                M = _mscale(M, bk.one / 2)
            A[k][l] = M
            if k != l:
                A[l][k] = _mscale(dagger(M), -1)
    if traceless:
        for k in range(N):
            for l in range(N):
                t = sum((A[k][l][s][s] for s in range(r)), bk.zero) / r
                A[k][l] = [[x - t if s == u else x for u, x in enumerate(row)] for s, row in enumerate(A[k][l])]
    return A


def random_invariant_ym_curvature(
    model: FiberModel, r: int, rng: np.random.Generator, traceless: bool = True
) -> BundleForm:
    """Random SU(2)-invariant curvature (hence Yang-Mills with ``Lambda = 0``).

    Draws skew-Hermitian blocks, removes traces if requested, and projects
    every matrix entry onto the invariant 2-forms.
    """
    if not 1 <= r <= 4:
        raise ValueError(f"rank must be 1..4, got {r}")
    A = _random_skew_blocks(model, r, rng, traceless)
    return curvature_from_blocks(model, A).map_entries(invariant_projection)


def random_ym_curvature(model: FiberModel, r: int, rng: np.random.Generator, traceless: bool = True) -> BundleForm:
    """Random skew-Hermitian curvature with ``sum_k A_kk = 0`` (not invariant)."""
    A = _random_skew_blocks(model, r, rng, traceless)
    bk = model.backend
    N = model.N
    S = _mzero(bk, r)
    for k in range(N):
        S = _madd(S, A[k][k])
    corr = _mscale(S, -(bk.one / N))
    for k in range(N):
        A[k][k] = _madd(A[k][k], corr)
    return curvature_from_blocks(model, A)


def _check_11(theta: BundleForm):
    if any(m.bit_count() != 2 for m in theta.terms):
        raise DegreeError("curvature must be a 2-form")
    theta.blocks()


def lambda_endo(theta: BundleForm) -> list[list]:
    """``Lambda(Theta) = sum_k A_kk``."""
    _check_11(theta)
    A = theta.blocks()
    bk = theta.model.backend
    out = _mzero(bk, theta.rows)
    for k in range(theta.model.N):
        out = _madd(out, A[k][k])
    return out


def r2(theta: BundleForm) -> Form:
    """``Tr(Theta ^ Theta)``."""
    if any(m.bit_count() != 2 for m in theta.terms):
        raise DegreeError("r2 needs a 2-form")
    return theta.trace_wedge(theta)


def _w_mask(model: FiberModel, i: int, j: int) -> int:
    return model.top_mask ^ (1 << i) ^ (1 << (model.N + j))


def w_basis_sign(model: FiberModel, i: int = 0):
    """Unit ``eps`` with ``eps * mono_ii ^ (i z_i ^ zb_i)`` a positive multiple of Vol."""
    kd = kahler_data(model)
    bk = model.backend
    mono = Form(model, {_w_mask(model, i, i): bk.one})
    t = kd.pair_vol(mono, (model.z(i + 1) ^ model.zb(i + 1)) * bk.i)
    return t.conjugate()


def b_coefficients(theta: BundleForm, method: str = "direct") -> list[list]:
    """Coefficients ``B_ij`` of ``r2 ^ omega^{N-3}`` in the basis ``w_ij``.

    ``direct`` expands the wedge and reads coefficients; ``formula`` evaluates
    the closed form for the diagonal only (off-diagonal entries are None):

        B_ii = -(N-3)! sum_{k != l; k,l != i} Tr(A_kl A_lk)
               + (N-3)! sum_{k != l; k,l != i} Tr(A_kk A_ll)
    """
    model = theta.model
    N = model.N
    bk = model.backend
    if N < 3:
        raise ValueError("B coefficients need complex dimension N >= 3")
    if method == "direct":
        kd = kahler_data(model)
        nu = r2(theta).wedge(kd.omega_power(I, N - 3))
        eps = w_basis_sign(model)
        # w_ij = eps * mono_ij, so the coefficient on w_ij is coeff(mono_ij) / eps
        return [[nu.coefficient(_w_mask(model, i, j)) / eps for j in range(N)] for i in range(N)]
    if method == "formula":
        A = theta.blocks()
        f = math.factorial(N - 3)
        out = [[None] * N for _ in range(N)]
        for i in range(N):
            first = bk.zero
            second = bk.zero
            for k in range(N):
                for l in range(N):
                    if k == l or k == i or l == i:
                        continue
                    first = first + trace_product(A[k][l], A[l][k])
                    second = second + trace_product(A[k][k], A[l][l])
            out[i][i] = -first * f + second * f
        return out
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class CiiResult:
    definition: object
    intermediate: object
    final: object


def c_ii(theta: BundleForm, i: int) -> CiiResult:
    """``C_ii`` three ways (0-based ``i``; the symplectic partner is ``i ^ 1``).

    ``definition``: sum over ``k != l``, both ``!= i``, of ``Tr(A_kk A_ll)``.
    ``intermediate``: ``-sum_k Tr(A_kk^2) + 2 Tr(A_ii^2)`` (needs ``Lambda = 0``).
    ``final``: ``-sum_{k != i, partner} Tr(A_kk^2)`` (needs invariance).
    """
    N = theta.model.N
    if not 0 <= i < N:
        raise IndexError(f"index {i} out of range 0..{N - 1}")
    A = theta.blocks()
    bk = theta.model.backend
    d = bk.zero
    for k in range(N):
        for l in range(N):
            if k != l and k != i and l != i:
                d = d + trace_product(A[k][k], A[l][l])
    sq = [trace_product(A[k][k], A[k][k]) for k in range(N)]
    inter = -sum(sq, bk.zero) + sq[i] * 2
    partner = i ^ 1
    final = -sum((sq[k] for k in range(N) if k not in (i, partner)), bk.zero)
    return CiiResult(d, inter, final)


def killing_norm(theta: BundleForm):
    """``||Theta||^2 = sum_kl Tr(A_kl A_kl^dagger)``."""
    A = theta.blocks()
    bk = theta.model.backend
    N = theta.model.N
    return sum((trace_product(A[k][l], dagger(A[k][l])) for k in range(N) for l in range(N)), bk.zero)


def hodge_riemann_check(theta: BundleForm):
    """Ratio of ``Tr(Theta ^ Theta) ^ omega^{N-2} / Vol`` to ``||Theta||^2``.

    Returns ``(ratio, positive)``; ``ratio`` is None for ``Theta = 0``.
    """
    model = theta.model
    bk = model.backend
    L = lambda_endo(theta)
    if not _is_zero_matrix(bk, L):
        raise ValueError("Hodge-Riemann relation needs Lambda(Theta) = 0")
    norm = killing_norm(theta)
    if bk.is_zero(norm):
        return None, False
    kd = kahler_data(model)
    top = kd.pair_vol(r2(theta), kd.omega_power(I, model.N - 2))
    ratio = top / norm
    return ratio, bk.positive(ratio)


@dataclass
class SecondForm:
    """``A = sum_k z_k (x) A_k`` with ``A_k`` of shape ``r'' x r'``."""

    model: FiberModel
    sub_rank: int
    quot_rank: int
    mats: list

    def as_bundle_form(self) -> BundleForm:
        return BundleForm(
            self.model, self.quot_rank, self.sub_rank, {1 << k: a for k, a in enumerate(self.mats)}
        )

    def adjoint(self) -> BundleForm:
        """``A^perp = sum_k zb_k (x) A_k^dagger``."""
        N = self.model.N
        return BundleForm(
            self.model, self.sub_rank, self.quot_rank, {1 << (N + k): dagger(a) for k, a in enumerate(self.mats)}
        )

    def is_zero(self) -> bool:
        return all(not x for a in self.mats for row in a for x in row)

    def to_json(self) -> dict:
        return {
            "sub_rank": self.sub_rank,
            "quot_rank": self.quot_rank,
            "mats": [[[scalar_to_json(x) for x in row] for row in a] for a in self.mats],
        }

    @classmethod
    def from_json(cls, model: FiberModel, data: dict) -> "SecondForm":
        mats = [[[model.backend.coerce(scalar_from_json(x)) for x in row] for row in a] for a in data["mats"]]
        return cls(model, data["sub_rank"], data["quot_rank"], mats)


def random_second_form(model: FiberModel, sub_rank: int, quot_rank: int, rng: np.random.Generator) -> SecondForm:
    return SecondForm(model, sub_rank, quot_rank, [random_matrix(rng, model.backend, quot_rank, sub_rank) for _ in range(model.N)])


def subbundle_curvature(theta: BundleForm, A: SecondForm) -> BundleForm:
    """``Theta' = Theta|F' + A^perp ^ A = Theta|F' - sum z_k ^ zb_l (x) A_l^dagger A_k``."""
    if theta.rows != A.sub_rank + A.quot_rank:
        raise ValueError(
            f"rank {theta.rows} does not split as {A.sub_rank} + {A.quot_rank}"
        )
    if A.model is not theta.model or len(A.mats) != theta.model.N:
        raise ValueError("second fundamental form does not match the model")
    sub = range(A.sub_rank)
    return theta.block(sub, sub) + A.adjoint().wedge(A.as_bundle_form())


def trace_a_aperp(A: SecondForm) -> Form:
    """``Tr(A ^ A^perp) = sum z_k ^ zb_l Tr(A_k A_l^dagger)``."""
    return A.as_bundle_form().trace_wedge(A.adjoint())


@dataclass
class ChernIntegrands:
    c1_density: Form
    disc_density: Form
    c1_scale: str = "1/(2*pi)"
    disc_scale: str = "1/(4*pi^2)"


def chern_integrands(theta: BundleForm) -> ChernIntegrands:
    """Chern-Weil densities without the ``2 pi`` factors.

    ``c1 = c1_scale * c1_density`` with ``c1_density = i Tr Theta``, and the
    discriminant ``2 c2 - (r-1)/r c1^2 = disc_scale * disc_density`` with
    ``disc_density = Tr(Theta ^ Theta) - (1/r) Tr Theta ^ Tr Theta``.
    """
    bk = theta.model.backend
    tr = theta.trace()
    c1 = tr * bk.i
    disc = r2(theta) - tr.wedge(tr) / theta.rows
    return ChernIntegrands(c1, disc)
