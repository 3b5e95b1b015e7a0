"""Random instances on a fiber model.

All draws go through a numpy ``Generator`` and produce small rationals, so the
exact and float backends see the same instance for the same seed.
"""
from __future__ import annotations

import numpy as np

from .forms import FiberModel, Form
from .quat import random_rational
from .scalars import Backend


def random_scalar(rng: np.random.Generator, backend: Backend, real: bool = False):
    re = random_rational(rng)
    im = 0 if real else random_rational(rng)
    return backend.coerce(backend.scalar(re, im) if backend.exact else complex(float(re), float(im)))


def random_matrix(rng: np.random.Generator, backend: Backend, rows: int, cols: int) -> list[list]:
    return [[random_scalar(rng, backend) for _ in range(cols)] for _ in range(rows)]


def random_hermitian(rng: np.random.Generator, backend: Backend, n: int) -> list[list]:
    h = [[backend.zero] * n for _ in range(n)]
    for a in range(n):
        h[a][a] = random_scalar(rng, backend, real=True)
        for b in range(a + 1, n):
            v = random_scalar(rng, backend)
            h[a][b] = v
            h[b][a] = v.conjugate()
    return h


def form_from_hermitian(model: FiberModel, h: list[list]) -> Form:
    """``i sum h_kl z_k ^ zb_l``; real iff ``h`` is Hermitian."""
    N = model.N
    i = model.backend.i
    return Form(model, {(1 << k) | (1 << (N + l)): i * h[k][l] for k in range(N) for l in range(N)})


def random_real_11(model: FiberModel, rng: np.random.Generator) -> Form:
    return form_from_hermitian(model, random_hermitian(rng, model.backend, model.N))


def random_positive_11(model: FiberModel, rng: np.random.Generator, rank: int | None = None) -> Form:
    """``i sum h_kl z_k ^ zb_l`` with ``h = B B^dagger`` (random rank)."""
    bk = model.backend
    N = model.N
    r = rank if rank is not None else int(rng.integers(1, N + 1))
    B = random_matrix(rng, bk, N, r)
    h = [[sum((B[a][c] * B[b][c].conjugate() for c in range(r)), bk.zero) for b in range(N)] for a in range(N)]
    return form_from_hermitian(model, h)


def random_form(model: FiberModel, rng: np.random.Generator, degree: int, density: float = 0.5) -> Form:
    """Random complex form of one degree; each monomial kept with ``density``."""
    bk = model.backend
    terms = {}
    for mask in range(1 << model.dim):
        if mask.bit_count() == degree and rng.random() < density:
            terms[mask] = random_scalar(rng, bk)
    return Form(model, terms)


def random_real_form(model: FiberModel, rng: np.random.Generator, degree: int) -> Form:
    f = random_form(model, rng, degree)
    return f + f.conj()
