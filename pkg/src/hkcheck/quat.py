"""Quaternions, unit quaternions (SU(2)) and induced complex structures."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .scalars import Backend

__all__ = [
    "Quaternion",
    "UnitQuaternion",
    "InducedStructure",
    "quat_mul",
    "conjugate_structure",
    "random_unit_quaternion",
    "random_induced_structure",
    "random_rational",
    "I",
    "J",
    "K",
    "CYCLE_KIJ",
]

_EXACT_TYPES = (int, mpq, Fraction)


def _is_exact(*xs) -> bool:
    return all(isinstance(x, _EXACT_TYPES) for x in xs)


@dataclass(frozen=True)
class Quaternion:
    """``w + x i + y j + z k`` with rational or float components."""

    w: object = 0
    x: object = 0
    y: object = 0
    z: object = 0

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)

    def __rmul__(self, other):
        return Quaternion(other * self.w, other * self.x, other * self.y, other * self.z)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def inverse(self) -> "Quaternion":
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        if _is_exact(n):
            n = mpq(n)
        return Quaternion(c.w / n, c.x / n, c.y / n, c.z / n)

    def components(self) -> tuple:
        return (self.w, self.x, self.y, self.z)

    def is_close(self, other: "Quaternion", tol: float = 0.0) -> bool:
        if tol == 0.0:
            return self.components() == other.components()
        return max(abs(float(a - b)) for a, b in zip(self.components(), other.components())) <= tol


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product with ``i*j = k``."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


@dataclass(frozen=True)
class UnitQuaternion:
    """An element of SU(2), stored as a quaternion of norm one."""

    q: Quaternion

    def __post_init__(self):
        n = self.q.norm2()
        if _is_exact(n):
            if n != 1:
                raise ValueError(f"not a unit quaternion: |q|^2 = {n}")
        elif abs(float(n) - 1.0) > 1e-9:
            raise ValueError(f"not a unit quaternion: |q|^2 = {n}")

    def __mul__(self, other: "UnitQuaternion") -> "UnitQuaternion":
        return UnitQuaternion(quat_mul(self.q, other.q))

    def inverse(self) -> "UnitQuaternion":
        return UnitQuaternion(self.q.conj())


@dataclass(frozen=True)
class InducedStructure:
    """``L = aI + bJ + cK`` with ``a^2 + b^2 + c^2 = 1``."""

    a: object
    b: object
    c: object

    def __post_init__(self):
        n = self.a * self.a + self.b * self.b + self.c * self.c
        if _is_exact(n):
            if n != 1:
                raise ValueError(f"not a unit imaginary quaternion: a^2+b^2+c^2 = {n}")
        elif abs(float(n) - 1.0) > 1e-9:
            raise ValueError(f"not a unit imaginary quaternion: a^2+b^2+c^2 = {n}")

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0, self.a, self.b, self.c)

    @classmethod
    def from_quaternion(cls, q: Quaternion, tol: float = 1e-9) -> "InducedStructure":
        w = q.w
        if _is_exact(w):
            if w != 0:
                raise ValueError("quaternion has a real part; not an induced structure")
        elif abs(float(w)) > tol:
            raise ValueError("quaternion has a real part; not an induced structure")
        return cls(q.x, q.y, q.z)

    def __neg__(self) -> "InducedStructure":
        return InducedStructure(-self.a, -self.b, -self.c)

    def components(self) -> tuple:
        return (self.a, self.b, self.c)

    def is_basis(self) -> str | None:
        """Name of the structure if it is exactly ``I``, ``J`` or ``K``."""
        comps = self.components()
        for name, target in (("I", (1, 0, 0)), ("J", (0, 1, 0)), ("K", (0, 0, 1))):
            if all(_is_exact(v) and v == t for v, t in zip(comps, target)):
                return name
        return None


I = InducedStructure(1, 0, 0)
J = InducedStructure(0, 1, 0)
K = InducedStructure(0, 0, 1)

# g = (1 + i + j + k)/2 conjugates K -> I, I -> J, J -> K.
CYCLE_KIJ = UnitQuaternion(Quaternion(mpq(1, 2), mpq(1, 2), mpq(1, 2), mpq(1, 2)))


def conjugate_structure(g: UnitQuaternion | Quaternion, L: InducedStructure) -> InducedStructure:
    """Return ``g L g^-1``.

    A non-unit ``g`` is accepted; conjugation only depends on its direction,
    which lets exact code use e.g. ``1 + j`` in place of ``(1 + j)/sqrt(2)``.
    """
    q = g.q if isinstance(g, UnitQuaternion) else g
    r = quat_mul(quat_mul(q, L.as_quaternion()), q.inverse())
    return InducedStructure.from_quaternion(r)


def random_rational(rng: np.random.Generator, max_num: int = 6, max_den: int = 4) -> mpq:
    """Small random rational ``p/q`` with ``|p| <= max_num`` and ``1 <= q <= max_den``."""
    p = int(rng.integers(-max_num, max_num + 1))
    q = int(rng.integers(1, max_den + 1))
    return mpq(p, q)


def random_unit_quaternion(rng: np.random.Generator, backend: Backend) -> UnitQuaternion:
    """Random SU(2) element.

    Float mode samples the uniform measure on S^3.  Exact mode lifts a random
    rational point of R^3 by inverse stereographic projection, which keeps all
    four components rational with norm exactly one.
    """
    if backend.exact:
        a, b, c = (random_rational(rng) for _ in range(3))
        s = a * a + b * b + c * c
        d = 1 + s
        return UnitQuaternion(Quaternion((1 - s) / d, 2 * a / d, 2 * b / d, 2 * c / d))
    v = rng.standard_normal(4)
    v = v / np.linalg.norm(v)
    return UnitQuaternion(Quaternion(*(float(t) for t in v)))


def random_induced_structure(rng: np.random.Generator, backend: Backend) -> InducedStructure:
    """Random point of the sphere of induced structures (``g I g^-1``)."""
    g = random_unit_quaternion(rng, backend)
    return conjugate_structure(g, I)
