"""Suite registry: how each suite draws one random instance and which checks it runs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import curvature as cv
from .checks import Ctx, lemma74_constant
from .forms import Form
from .quat import CYCLE_KIJ, Quaternion, random_induced_structure, random_rational, random_unit_quaternion
from .sampling import (
    random_form,
    random_matrix,
    random_positive_11,
    random_real_11,
    random_real_form,
    random_scalar,
)
from .su2 import invariant_projection, to_K20, weight2_part


@dataclass
class SamplePlan:
    """Checks to run for one random instance.

    ``measure`` holds values aggregated into report constants; ``keep`` holds
    instances that suite-level consistency checks may need to replay.
    """

    checks: list[tuple[str, dict]] = field(default_factory=list)
    degenerate: bool = False
    measure: dict = field(default_factory=dict)
    keep: dict = field(default_factory=dict)

    def add(self, name: str, **args):
        self.checks.append((name, args))


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    plan: Callable[[Ctx, np.random.Generator, int, int], SamplePlan]
    min_n: int = 1
    min_rank: int = 1
    ranks: tuple[int, ...] | None = None
    description: str = ""


SUITES: dict[str, SuiteSpec] = {}


def suite(name: str, min_n: int = 1, min_rank: int = 1, ranks=None, description: str = ""):
    def deco(fn):
        SUITES[name] = SuiteSpec(name, fn, min_n, min_rank, ranks, description)
        return fn

    return deco


def _random_quaternion(rng, bk) -> Quaternion:
    comps = [random_rational(rng) for _ in range(4)]
    if not any(comps):
        comps[0] = 1
    if not bk.exact:
        comps = [float(c) for c in comps]
    return Quaternion(*comps)


def _random_vector(rng, bk, n: int) -> list:
    return [random_scalar(rng, bk) for _ in range(n)]


def _random_anti_hermitian(rng, bk, r: int) -> list:
    B = random_matrix(rng, bk, r, r)
    return [[(B[a][b] - B[b][a].conjugate()) / 2 for b in range(r)] for a in range(r)]


def _rotate_kij(f: Form) -> Form:
    """Rotate by ``g = (1+i+j+k)/2`` (K -> I, I -> J, J -> K)."""
    return f.model.quaternion_op(CYCLE_KIJ)(f)


@suite("conventions", description="quaternion relations, basis dictionary, actions, Killing-form signs")
def _conventions(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    m, bk = ctx.model, ctx.bk
    plan = SamplePlan()
    if idx == 0:
        for name in ("operator_relations", "dictionary", "ij_commute_basis", "cycle_element", "kahler_examples", "su2_examples"):
            plan.add(name)
    L = random_induced_structure(rng, bk)
    p = random_unit_quaternion(rng, bk)
    q = random_unit_quaternion(rng, bk)
    d = int(rng.integers(1, 4))
    plan.add("quat_relations", q=_random_quaternion(rng, bk))
    plan.add("rho_homomorphism", p=p, q=q, f=random_form(m, rng, 2))
    plan.add("omega_equivariance", g=p)
    plan.add("multiplicative", g=q, f=random_form(m, rng, 1), h=random_form(m, rng, 2))
    plan.add("type_eigen", f=random_form(m, rng, d), L=L)
    plan.add("conj_intertwines", f=random_form(m, rng, d), L=L)
    plan.add("ij_commute", f=random_form(m, rng, 2))
    plan.add("killing_sign", A=_random_anti_hermitian(rng, bk, rank))
    plan.add("conjugation_action", p=p, q=q, L=L)
    plan.add("omega_linear", L=L, u=_random_vector(rng, bk, m.dim), v=_random_vector(rng, bk, m.dim))
    plan.add("lambda_consistency", eta=random_real_form(m, rng, 2), L=L)
    return plan


@suite("lemma26", description="Lambda_L vanishes on SU(2)-invariant 2-forms")
def _lemma26(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    m, bk = ctx.model, ctx.bk
    plan = SamplePlan()
    eta = invariant_projection(random_real_form(m, rng, 2))
    Ls = [random_induced_structure(rng, bk) for _ in range(10)]
    if eta.is_zero():
        plan.degenerate = True
        return plan
    plan.add("lambda_invariant", eta=eta, Ls=Ls)
    plan.add("lambda_consistency", eta=random_real_form(m, rng, 2), L=Ls[0])
    return plan


@suite("lemma27", description="invariance iff (p,p) for every induced structure")
def _lemma27(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    m, bk = ctx.model, ctx.bk
    plan = SamplePlan()
    eta0 = invariant_projection(random_real_form(m, rng, 2))
    eta1 = invariant_projection(random_real_form(m, rng, 2))
    if eta0.is_zero() or eta1.is_zero():
        plan.degenerate = True
        return plan
    Ls = [random_induced_structure(rng, bk) for _ in range(3)]
    phi = eta0.wedge(eta1)
    plan.add("invariance_pp", f=eta0, Ls=Ls)
    plan.add("invariance_criterion", f=random_real_form(m, rng, 2), Ls=Ls)
    plan.add("invariance_criterion", f=eta0, Ls=Ls)
    plan.add("projector_algebra", eta=random_form(m, rng, 2), g=random_unit_quaternion(rng, bk))
    if phi.terms:
        plan.add("invariance_pp", f=phi, Ls=Ls)
        plan.add("invariant_pairing", phi=phi, L=Ls[0])
    if idx == 0:
        plan.add("r2_u1", eta=eta0)
    return plan


@suite("lemma52", min_n=2, min_rank=2, ranks=(2, 3, 4), description="positivity of r2 ^ omega^{N-3}; B/C formulas")
def _lemma52(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    m, bk = ctx.model, ctx.bk
    plan = SamplePlan()
    theta = cv.random_invariant_ym_curvature(m, rank, rng, traceless=True)
    theta_ym = cv.random_ym_curvature(m, rank, rng, traceless=True)
    c = _random_vector(rng, bk, m.N)
    if theta.is_zero():
        plan.degenerate = True
        return plan
    plan.add("ym_generator", theta=theta, traceless=True)
    plan.add("symplectic_pairs", theta=theta)
    plan.add("codim1_positive", theta=theta)
    plan.add("b_formula", theta=theta)
    plan.add("c_ii", theta=theta)
    plan.add("basis_bridge", theta=theta, c=c)
    plan.add("c_ii_ym", theta=theta_ym)
    if idx < 20:
        plan.add("r2_invariant", theta=theta)
    return plan


@suite("lemma72", description="weight split vs K-Hodge split; (2,0)_K correspondence")
def _lemma72(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    plan = SamplePlan()
    if idx == 0:
        plan.add("su2_examples")
    eta = random_real_11(ctx.model, rng)
    for name in ("weight_vs_k_split", "weight2_routes", "k_eigen", "k20_roundtrip", "real_structure"):
        plan.add(name, eta=eta)
    return plan


@suite("lemma74", description="E-form constant c_n and the pointwise degree identity")
def _lemma74(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    plan = SamplePlan()
    if idx == 0:
        plan.add("e_form_constant")
    eta = random_real_11(ctx.model, rng)
    const, _, _ = lemma74_constant(ctx, eta)
    if const is None:
        plan.degenerate = True
        return plan
    plan.add("e_form_identity", eta=eta)
    plan.measure["lemma74_constant"] = const
    plan.keep["eta"] = eta
    return plan


@suite("lemma92", description="positivity of eta_+ and of -K(eta); conditions (a)/(b)")
def _lemma92(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    m = ctx.model
    plan = SamplePlan()
    if idx == 0:
        plan.add("k_positive_indefinite")
    eta = random_positive_11(m, rng)
    plan.add("eta_plus_positive", eta=eta)
    rotated = _rotate_kij(to_K20(weight2_part(eta)))
    plan.add("conditions_ab", eta=rotated)
    zeta = random_form(m, rng, 2).i_type_part(2, 0)
    plan.add("conditions_ab", eta=zeta + m.J_op(zeta).conj())
    return plan


@suite("sec9", min_rank=2, ranks=(2, 3, 4), description="sub-bundle curvature identity and positivity; Chern densities")
def _sec9(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    m, bk = ctx.model, ctx.bk
    plan = SamplePlan()
    sub = 1 + int(rng.integers(rank - 1))
    theta = cv.random_invariant_ym_curvature(m, rank, rng, traceless=False)
    theta_su = cv.random_invariant_ym_curvature(m, rank, rng, traceless=True)
    A = cv.random_second_form(m, sub, rank - sub, rng)
    if idx % 10 == 0:
        A = cv.SecondForm(m, sub, rank - sub, [[[bk.zero] * sub for _ in range(rank - sub)] for _ in range(m.N)])
    Ls = [random_induced_structure(rng, bk) for _ in range(2)]
    plan.add("subbundle_identity", theta=theta, A=A)
    plan.add("gram_positive", A=A)
    plan.add("subbundle_degree", theta=theta, A=A)
    plan.add("chern_c1", theta=theta, Ls=Ls)
    plan.add("chern_traceless", theta=theta_su)
    plan.add("disc_pairing", theta=theta)
    return plan


@suite("hodge_riemann", ranks=(1, 2, 3, 4), description="constancy and sign of the Hodge-Riemann ratio")
def _hodge_riemann(ctx: Ctx, rng, idx: int, rank: int) -> SamplePlan:
    m = ctx.model
    plan = SamplePlan()
    if idx % 2 == 0:
        theta = cv.random_invariant_ym_curvature(m, rank, rng, traceless=False)
    else:
        theta = cv.random_ym_curvature(m, rank, rng, traceless=False)
    ratio, _ = cv.hodge_riemann_check(theta)
    if ratio is None:
        plan.degenerate = True
        return plan
    plan.add("hr_ratio", theta=theta)
    plan.measure["ratio"] = ratio
    plan.keep["theta"] = theta
    return plan
