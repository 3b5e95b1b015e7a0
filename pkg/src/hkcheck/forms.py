"""Sparse exterior algebra on the complexified cotangent fiber of H^n.

Generators are the covectors ``z_1..z_N, zb_1..zb_N`` (``N = 2n``), indexed
``0..2N-1`` in that canonical order.  A monomial is a bitmask over generator
indices; a :class:`Form` maps bitmasks to scalar coefficients.

Covector conventions.  Structures act on forms by pullback, ``L^* a = a o L``,
so ``I^* z_k = i z_k`` and (1,0)-forms are the ``+i`` eigenvectors.  The
quaternionic dictionary on covectors is::

    J^* z_{2a-1} = -zb_{2a}      J^* z_{2a} = zb_{2a-1}

extended to ``zb`` by reality, and ``K^* = J^* I^*`` (pullback of ``K = IJ``
on tangent vectors).  A unit quaternion ``g`` acts by pullback of left
multiplication by ``g^-1``, i.e. ``rho(g) = w - x I^* - y J^* - z K^*``, which
is a homomorphism from SU(2); on 2-forms ``rho(i), rho(j), rho(k)`` agree with
the structure actions of ``I, J, K``.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator

from .errors import ModelMismatchError, NonHomogeneousError
from .quat import I, InducedStructure, Quaternion, UnitQuaternion
from .scalars import Backend, scalar_from_json, scalar_to_json

__all__ = [
    "FiberModel",
    "Form",
    "CovectorMap",
    "wedge",
    "conj",
    "structure_action",
    "hodge_type_decompose",
    "is_real",
    "is_pp",
    "merge_sign",
]

_SIGN_CACHE: dict[int, int] = {}


def merge_sign(s: int, t: int) -> int:
    """Sign of sorting ``theta_S ^ theta_T`` into canonical order (S, T disjoint)."""
    key = (s << 16) | t
    v = _SIGN_CACHE.get(key)
    if v is not None:
        return v
    cnt = 0
    tt = t
    while tt:
        low = tt & -tt
        cnt += (s & ~((low << 1) - 1)).bit_count()
        tt ^= low
    v = -1 if cnt & 1 else 1
    _SIGN_CACHE[key] = v
    return v


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FiberModel:
    """The flat model ``H^n`` with its canonical complex coframe.

    Args:
        n: quaternionic dimension, ``1 <= n <= 3``.
        backend: scalar backend shared by every form on this model.
        fault_inject: flip the sign of ``J^* z_2`` (and ``J^* zb_2``).  Used
            only to mutation-test the verification harness.
    """

    def __init__(self, n: int, backend: Backend, fault_inject: bool = False):
        if not 1 <= n <= 3:
            raise ValueError(f"quaternionic dimension must be 1..3, got {n}")
        self.n = n
        self.N = 2 * n
        self.dim = 4 * n
        self.backend = backend
        self.fault_inject = fault_inject
        self.low_mask = (1 << self.N) - 1
        self.top_mask = (1 << self.dim) - 1
        self._structure_cache: dict[tuple, CovectorMap] = {}

    def __repr__(self):
        return f"FiberModel(n={self.n}, backend={self.backend.name!r}, fault_inject={self.fault_inject})"

    def key(self) -> tuple:
        return (self.n, self.backend.name, self.backend.tol, self.fault_inject)

    # -- basis -----------------------------------------------------------
    def gen_name(self, a: int) -> str:
        return f"z{a + 1}" if a < self.N else f"zb{a - self.N + 1}"

    def z(self, k: int) -> "Form":
        """The (1,0)_I covector ``z_k`` (1-based, as in the literature)."""
        return Form(self, {1 << (k - 1): self.backend.one})

    def zb(self, k: int) -> "Form":
        return Form(self, {1 << (self.N + k - 1): self.backend.one})

    def monomial(self, gens: Iterable[int], coeff=None) -> "Form":
        """Wedge of generators given by 0-based index, in the order given."""
        out = Form(self, {0: self.backend.one if coeff is None else coeff})
        for a in gens:
            out = out.wedge(Form(self, {1 << a: self.backend.one}))
        return out

    def zero(self) -> "Form":
        return Form(self, {})

    def one(self) -> "Form":
        return Form(self, {0: self.backend.one})

    def conj_index(self, a: int) -> int:
        return a + self.N if a < self.N else a - self.N

    # -- covector operators ----------------------------------------------
    @cached_property
    def I_op(self) -> "CovectorMap":
        b = self.backend
        imgs = [[(a, b.i)] for a in range(self.N)] + [[(a, -b.i)] for a in range(self.N, 2 * self.N)]
        return CovectorMap(self, imgs, name="I")

    @cached_property
    def J_op(self) -> "CovectorMap":
        b = self.backend
        N = self.N
        imgs: list = [None] * (2 * N)
        for p in range(self.n):
            a1, a2 = 2 * p, 2 * p + 1
            s2 = -b.one if (self.fault_inject and p == 0) else b.one
            imgs[a1] = [(N + a2, -b.one)]
            imgs[a2] = [(N + a1, s2)]
            imgs[N + a1] = [(a2, -b.one)]
            imgs[N + a2] = [(a1, s2)]
        return CovectorMap(self, imgs, name="J")

    @cached_property
    def K_op(self) -> "CovectorMap":
        op = self.J_op.compose(self.I_op)
        op.name = "K"
        return op

    def structure_op(self, L: InducedStructure) -> "CovectorMap":
        """``L^*`` on covectors for ``L = aI + bJ + cK``."""
        named = L.is_basis()
        if named == "I":
            return self.I_op
        if named == "J":
            return self.J_op
        if named == "K":
            return self.K_op
        key = ("L",) + L.components()
        op = self._structure_cache.get(key)
        if op is None:
            bk = self.backend
            op = CovectorMap.combine(
                self,
                [(bk.coerce(L.a), self.I_op), (bk.coerce(L.b), self.J_op), (bk.coerce(L.c), self.K_op)],
            )
            if len(self._structure_cache) > 256:
                self._structure_cache.clear()
            self._structure_cache[key] = op
        return op

    def quaternion_op(self, g: UnitQuaternion | Quaternion) -> "CovectorMap":
        """``rho(g)``: pullback of left multiplication by ``g^-1``."""
        q = g.q if isinstance(g, UnitQuaternion) else g
        key = ("Q",) + q.components()
        op = self._structure_cache.get(key)
        if op is None:
            bk = self.backend
            ident = CovectorMap.identity(self)
            op = CovectorMap.combine(
                self,
                [
                    (bk.coerce(q.w), ident),
                    (-bk.coerce(q.x), self.I_op),
                    (-bk.coerce(q.y), self.J_op),
                    (-bk.coerce(q.z), self.K_op),
                ],
            )
            if len(self._structure_cache) > 256:
                self._structure_cache.clear()
            self._structure_cache[key] = op
        return op


class CovectorMap:
    """A linear endomorphism of the complexified covector space.

    ``images[a]`` lists ``(b, c)`` pairs with ``op(theta_a) = sum c * theta_b``.
    The tangent-vector matrix of the underlying operator is ``matrix()``.
    """

    def __init__(self, model: FiberModel, images: list, name: str | None = None):
        self.model = model
        self.images = [tuple((b, c) for b, c in img if c) for img in images]
        self.name = name
        self._mono_cache: dict[int, dict[int, object]] = {}

    @classmethod
    def identity(cls, model: FiberModel) -> "CovectorMap":
        return cls(model, [[(a, model.backend.one)] for a in range(model.dim)], name="1")

    @classmethod
    def combine(cls, model: FiberModel, terms: list) -> "CovectorMap":
        rows: list[dict] = [dict() for _ in range(model.dim)]
        for coeff, op in terms:
            if not coeff:
                continue
            for a, img in enumerate(op.images):
                row = rows[a]
                for b, c in img:
                    row[b] = row.get(b, model.backend.zero) + coeff * c
        return cls(model, [sorted(r.items()) for r in rows])

    def compose(self, other: "CovectorMap") -> "CovectorMap":
        """``self o other``."""
        rows: list[dict] = []
        zero = self.model.backend.zero
        for img in other.images:
            row: dict = {}
            for b, c in img:
                for d, e in self.images[b]:
                    row[d] = row.get(d, zero) + c * e
            rows.append(row)
        return CovectorMap(self.model, [sorted(r.items()) for r in rows])

    def matrix(self) -> list[list]:
        zero = self.model.backend.zero
        m = [[zero] * self.model.dim for _ in range(self.model.dim)]
        for a, img in enumerate(self.images):
            for b, c in img:
                m[a][b] = c
        return m

    def monomial_image(self, mask: int) -> dict[int, object]:
        cached = self._mono_cache.get(mask)
        if cached is not None:
            return cached
        one = self.model.backend.one
        partial: dict[int, object] = {0: one}
        for a in _bits(mask):
            nxt: dict[int, object] = {}
            for m, c in partial.items():
                for b, cb in self.images[a]:
                    bit = 1 << b
                    if m & bit:
                        continue
                    v = c * cb
                    if (m >> (b + 1)).bit_count() & 1:
                        v = -v
                    key = m | bit
                    prev = nxt.get(key)
                    nxt[key] = v if prev is None else prev + v
            partial = nxt
        if len(self._mono_cache) < 200_000:
            self._mono_cache[mask] = partial
        return partial

    def __call__(self, f: "Form") -> "Form":
        """Multiplicative extension to all of the exterior algebra."""
        if f.model is not self.model:
            raise ModelMismatchError("operator and form live on different models")
        out: dict[int, object] = {}
        for mask, c in f.terms.items():
            for m, v in self.monomial_image(mask).items():
                t = c * v
                prev = out.get(m)
                out[m] = t if prev is None else prev + t
        return Form(self.model, out)

    def derivation(self, f: "Form") -> "Form":
        """Extension as a derivation (Leibniz rule); the Lie-algebra action."""
        out: dict[int, object] = {}
        for mask, c in f.terms.items():
            for a in _bits(mask):
                rest = mask ^ (1 << a)
                flip_a = (rest & ((1 << a) - 1)).bit_count() & 1
                for b, cb in self.images[a]:
                    bit = 1 << b
                    if rest & bit:
                        continue
                    v = c * cb
                    if flip_a ^ ((rest & (bit - 1)).bit_count() & 1):
                        v = -v
                    key = rest | bit
                    prev = out.get(key)
                    out[key] = v if prev is None else prev + v
        return Form(self.model, out)


class Form:
    """Immutable sparse element of the complexified exterior algebra."""

    __slots__ = ("model", "terms")

    def __init__(self, model: FiberModel, terms: dict | None = None):
        self.model = model
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # -- inspection --------------------------------------------------------
    def degrees(self) -> set[int]:
        return {m.bit_count() for m in self.terms}

    def degree(self) -> int:
        """Degree of a homogeneous form (0 for the zero form)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise NonHomogeneousError(f"form mixes degrees {sorted(degs)}")
        return degs.pop() if degs else 0

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, mask: int):
        return self.terms.get(mask, self.model.backend.zero)

    def scale(self) -> float:
        """Largest coefficient magnitude (for relative tolerances)."""
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    def is_zero(self, scale: float | None = None) -> bool:
        bk = self.model.backend
        if bk.exact:
            return not self.terms
        s = 1.0 if scale is None else scale
        return all(bk.is_zero(c, s) for c in self.terms.values())

    def equals(self, other: "Form") -> bool:
        """Equality: exact in exact mode, relative tolerance in float mode."""
        self._check(other)
        if self.model.backend.exact:
            return self.terms == other.terms
        return (self - other).is_zero(max(self.scale(), other.scale()))

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.model is other.model and self.equals(other)

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.model is not self.model:
            raise ModelMismatchError("forms live on different fiber models")

    # -- linear structure ----------------------------------------------------
    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
        return Form(self.model, out)

    def __sub__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            out[m] = -c if prev is None else prev - c
        return Form(self.model, out)

    def __neg__(self) -> "Form":
        return Form(self.model, {m: -c for m, c in self.terms.items()})

    def __mul__(self, s) -> "Form":
        if isinstance(s, Form):
            return NotImplemented
        return Form(self.model, {m: c * s for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, s) -> "Form":
        return Form(self.model, {m: c / s for m, c in self.terms.items()})

    # -- algebra -----------------------------------------------------------------
    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        out: dict[int, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2:
                    continue
                v = c1 * c2
                if merge_sign(m1, m2) < 0:
                    v = -v
                m = m1 | m2
                prev = out.get(m)
                out[m] = v if prev is None else prev + v
        return Form(self.model, out)

    __xor__ = wedge

    def power(self, k: int) -> "Form":
        out = self.model.one()
        for _ in range(k):
            out = out.wedge(self)
        return out

    def conj(self) -> "Form":
        N = self.model.N
        low = self.model.low_mask
        out = {}
        for m, c in self.terms.items():
            p = (m & low).bit_count()
            q = (m >> N).bit_count()
            cm = ((m & low) << N) | (m >> N)
            v = c.conjugate()
            out[cm] = -v if (p * q) & 1 else v
        return Form(self.model, out)

    def homogeneous_part(self, d: int) -> "Form":
        return Form(self.model, {m: c for m, c in self.terms.items() if m.bit_count() == d})

    def i_type_part(self, p: int, q: int) -> "Form":
        """Component of type ``(p, q)`` for the base structure ``I``."""
        N, low = self.model.N, self.model.low_mask
        return Form(
            self.model,
            {m: c for m, c in self.terms.items() if (m & low).bit_count() == p and (m >> N).bit_count() == q},
        )

    # -- presentation ----------------------------------------------------------
    def indices(self, mask: int) -> list[int]:
        return list(_bits(mask))

    def __repr__(self):
        if not self.terms:
            return "Form(0)"
        parts = []
        for m in sorted(self.terms, key=lambda m: (m.bit_count(), m)):
            name = "^".join(self.model.gen_name(a) for a in _bits(m)) or "1"
            parts.append(f"({self.terms[m]!r})*{name}")
        return "Form(" + " + ".join(parts) + ")"

    def to_json(self) -> list:
        """Canonical ``[[indices, re, im], ...]`` listing, sorted by monomial."""
        rows = []
        for m in sorted(self.terms, key=lambda m: (m.bit_count(), list(_bits(m)))):
            re, im = scalar_to_json(self.terms[m])
            rows.append([list(_bits(m)), re, im])
        return rows

    @classmethod
    def from_json(cls, model: FiberModel, rows: list) -> "Form":
        terms = {}
        for idx, re, im in rows:
            mask = 0
            for a in idx:
                mask |= 1 << a
            terms[mask] = model.backend.coerce(scalar_from_json([re, im]))
        return cls(model, terms)


def wedge(f: Form, g: Form) -> Form:
    return f.wedge(g)


def conj(f: Form) -> Form:
    return f.conj()


def is_real(f: Form) -> bool:
    return f.conj().equals(f)


def structure_action(g: UnitQuaternion | InducedStructure | Quaternion, f: Form) -> Form:
    """Multiplicative action of an induced structure or of an SU(2) element."""
    if isinstance(g, InducedStructure):
        return f.model.structure_op(g)(f)
    return f.model.quaternion_op(g)(f)


def _poly_mul_linear(poly: list, root, scale):
    """``poly(x) * (x - root) / scale`` on coefficient lists (low degree first)."""
    out = [None] * (len(poly) + 1)
    for k, c in enumerate(poly):
        t = c / scale
        out[k + 1] = t if out[k + 1] is None else out[k + 1] + t
        u = -(c * root) / scale
        out[k] = u if out[k] is None else out[k] + u
    return out


def hodge_type_decompose(f: Form, L: InducedStructure = I) -> dict[tuple[int, int], Form]:
    """Split a homogeneous form into its ``(p, q)_L`` components.

    For ``L = I`` the split is read off the coframe directly.  Otherwise the
    derivation extension of ``L^*`` is diagonal with eigenvalue ``i(p - q)`` on
    type ``(p, q)``, so each component is a Lagrange-interpolation polynomial
    in that derivation applied to ``f``.
    """
    if not f.is_homogeneous():
        raise NonHomogeneousError("Hodge decomposition needs a homogeneous form")
    if not f.terms:
        return {}
    d = f.degree()
    model = f.model
    if L.is_basis() == "I":
        out: dict[tuple[int, int], dict] = {}
        for m, c in f.terms.items():
            p = (m & model.low_mask).bit_count()
            out.setdefault((p, d - p), {})[m] = c
        return {k: Form(model, v) for k, v in out.items()}
    bk = model.backend
    op = model.structure_op(L)
    krylov = [f]
    for _ in range(d):
        krylov.append(op.derivation(krylov[-1]))
    eig = [bk.i * (2 * p - d) for p in range(d + 1)]
    result = {}
    for p in range(d + 1):
        poly = [bk.one]
        for p2 in range(d + 1):
            if p2 != p:
                poly = _poly_mul_linear(poly, eig[p2], eig[p] - eig[p2])
        comp = model.zero()
        for k, c in enumerate(poly):
            if c:
                comp = comp + krylov[k] * c
        if not comp.is_zero(f.scale()):
            result[(p, d - p)] = comp
    return result


def is_pp(f: Form, L: InducedStructure = I) -> bool:
    """True iff every component of ``f`` has type ``(p, p)`` for ``L``."""
    model = f.model
    if L.is_basis() == "I":
        N, low = model.N, model.low_mask
        if model.backend.exact:
            return all((m & low).bit_count() == (m >> N).bit_count() for m in f.terms)
        s = f.scale()
        return all(
            (m & low).bit_count() == (m >> N).bit_count() or model.backend.is_zero(c, s)
            for m, c in f.terms.items()
        )
    return model.structure_op(L).derivation(f).is_zero(f.scale())
