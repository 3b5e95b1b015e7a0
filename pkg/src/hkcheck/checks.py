"""Named, replayable checks.

Each check takes a :class:`Ctx` plus keyword arguments that round-trip through
:mod:`hkcheck.serialize`, and returns ``(ok, detail)``.  Suites only ever call
checks through :func:`run_check`, so every failure can be replayed from its
serialized arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import curvature as cv
from .forms import FiberModel, Form, hodge_type_decompose, is_pp, is_real, structure_action
from .kahler import KahlerData, evaluate2, kahler_data
from .quat import CYCLE_KIJ, I, J, K, InducedStructure, Quaternion, conjugate_structure, quat_mul
from .scalars import Backend, det, matmul, trace_product
from .serialize import constant_to_json
from .su2 import (
    from_K20,
    invariant_projection,
    is_invariant,
    to_K20,
    weight2_part,
    weight2_via_K,
    weight_split,
)


@dataclass
class Ctx:
    model: FiberModel
    kd: KahlerData

    @property
    def bk(self) -> Backend:
        return self.model.backend

    @classmethod
    def build(cls, model: FiberModel) -> "Ctx":
        return cls(model, kahler_data(model))


CHECKS: dict[str, Callable] = {}


def check(name: str):
    def deco(fn):
        CHECKS[name] = fn
        return fn

    return deco


def run_check(ctx: Ctx, name: str, **args) -> tuple[bool, dict]:
    try:
        ok, detail = CHECKS[name](ctx, **args)
    except Exception as exc:  # a crash inside a check is a failed check
        return False, {"error": f"{type(exc).__name__}: {exc}"}
    return bool(ok), detail


def _j(x):
    return constant_to_json(x)


def _zero(ctx: Ctx, x) -> bool:
    return ctx.bk.is_zero(x)


def _mat_zero(ctx: Ctx, a) -> bool:
    return all(ctx.bk.is_zero(x) for row in a for x in row)


def _mat_eq(ctx: Ctx, a, b) -> bool:
    scale = max((abs(complex(x)) for row in a for x in row), default=1.0)
    return all(ctx.bk.is_zero(x - y, scale) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def _q_eq(p: Quaternion, q: Quaternion, tol: float) -> bool:
    return p.is_close(q, tol)


# --------------------------------------------------------------------------
# conventions
# --------------------------------------------------------------------------
@check("quat_relations")
def _quat_relations(ctx: Ctx, q: Quaternion):
    one = Quaternion(1, 0, 0, 0)
    i, j, k = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)
    tol = ctx.bk.tol
    ok = all(_q_eq(quat_mul(u, u), -one, 0) for u in (i, j, k))
    ok &= _q_eq(quat_mul(i, j), k, 0) and _q_eq(quat_mul(j, i), -k, 0)
    ok &= _q_eq(quat_mul(q.conj(), q), Quaternion(q.norm2(), 0, 0, 0), tol)
    ok &= _q_eq(quat_mul(q, one), q, 0)
    return ok, {}


@check("operator_relations")
def _operator_relations(ctx: Ctx):
    """``I^2 = J^2 = K^2 = -1`` and ``IJ = -JI = K`` as tangent operators."""
    m = ctx.model
    bk = ctx.bk
    MI, MJ, MK = (op.matrix() for op in (m.I_op, m.J_op, m.K_op))
    minus_one = [[-bk.one if a == b else bk.zero for b in range(m.dim)] for a in range(m.dim)]
    neg = lambda X: [[-x for x in row] for row in X]
    results = {
        "I2": _mat_eq(ctx, matmul(MI, MI), minus_one),
        "J2": _mat_eq(ctx, matmul(MJ, MJ), minus_one),
        "K2": _mat_eq(ctx, matmul(MK, MK), minus_one),
        "IJ=K": _mat_eq(ctx, matmul(MI, MJ), MK),
        "JI=-K": _mat_eq(ctx, matmul(MJ, MI), neg(MK)),
    }
    return all(results.values()), {"relations": results}


@check("dictionary")
def _dictionary(ctx: Ctx):
    """The frozen covector dictionary and its consequences on 2-forms."""
    m, kd, bk = ctx.model, ctx.kd, ctx.bk
    z, zb = m.z, m.zb
    bad = []
    for k in range(1, m.N + 1):
        if not m.I_op(z(k)).equals(z(k) * bk.i):
            bad.append(f"I z{k}")
    for a in range(1, m.n + 1):
        p, q = 2 * a - 1, 2 * a
        if not m.J_op(z(p)).equals(-zb(q)):
            bad.append(f"J z{p}")
        if not m.J_op(z(q)).equals(zb(p)):
            bad.append(f"J z{q}")
        if not m.J_op(z(p) ^ zb(p)).equals(-(z(q) ^ zb(q))):
            bad.append(f"J(z{p}^zb{p})")
    omega_ref = m.zero()
    Omega_ref = m.zero()
    for k in range(1, m.N + 1):
        omega_ref = omega_ref + (z(k) ^ zb(k)) * bk.i
    for a in range(1, m.n + 1):
        Omega_ref = Omega_ref + (z(2 * a - 1) ^ z(2 * a)) * 2
    if not kd.omega_I.equals(omega_ref):
        bad.append("omega_I")
    if not kd.Omega_I.equals(Omega_ref):
        bad.append("Omega_I")
    if set(hodge_type_decompose(kd.Omega_K, K)) != {(2, 0)}:
        bad.append("Omega_K type")
    return not bad, {"mismatches": bad}


@check("rho_homomorphism")
def _rho_hom(ctx: Ctx, p, q, f: Form):
    lhs = structure_action(p, structure_action(q, f))
    rhs = structure_action(p * q, f)
    return lhs.equals(rhs), {}


@check("omega_equivariance")
def _omega_equivariance(ctx: Ctx, g):
    kd = ctx.kd
    bad = []
    for name, mu in (("I", I), ("J", J), ("K", K)):
        lhs = structure_action(g, kd.omega(mu))
        rhs = kd.omega(conjugate_structure(g, mu))
        if not lhs.equals(rhs):
            bad.append(name)
    return not bad, {"mismatches": bad}


@check("multiplicative")
def _multiplicative(ctx: Ctx, g, f: Form, h: Form):
    lhs = structure_action(g, f.wedge(h))
    rhs = structure_action(g, f).wedge(structure_action(g, h))
    return lhs.equals(rhs), {}


@check("type_eigen")
def _type_eigen(ctx: Ctx, f: Form, L: InducedStructure):
    parts = hodge_type_decompose(f, L)
    total = ctx.model.zero()
    bad = []
    op = ctx.model.structure_op(L)
    for (p, q), comp in parts.items():
        total = total + comp
        if not op(comp).equals(comp * (ctx.bk.i ** (p - q) if p >= q else (-ctx.bk.i) ** (q - p))):
            bad.append([p, q])
    return total.equals(f) and not bad, {"bad_types": bad}


@check("conj_intertwines")
def _conj_intertwines(ctx: Ctx, f: Form, L: InducedStructure):
    parts = hodge_type_decompose(f, L)
    cparts = hodge_type_decompose(f.conj(), L)
    zero = ctx.model.zero()
    keys = set(parts) | {(q, p) for p, q in cparts}
    bad = [list(k) for k in keys if not parts.get(k, zero).conj().equals(cparts.get((k[1], k[0]), zero))]
    return not bad, {"bad_types": bad}


@check("ij_commute")
def _ij_commute(ctx: Ctx, f: Form):
    m = ctx.model
    return m.I_op(m.J_op(f)).equals(m.J_op(m.I_op(f))), {}


@check("ij_commute_basis")
def _ij_commute_basis(ctx: Ctx):
    m = ctx.model
    bad = []
    for a in range(m.dim):
        for b in range(a + 1, m.dim):
            f = Form(m, {(1 << a) | (1 << b): m.backend.one})
            if not m.I_op(m.J_op(f)).equals(m.J_op(m.I_op(f))):
                bad.append([a, b])
    return not bad, {"bad_monomials": bad[:10]}


@check("killing_sign")
def _killing_sign(ctx: Ctx, A):
    """``Tr(A A^dagger) >= 0`` (zero iff ``A = 0``), ``Tr(A^2) <= 0`` for anti-Hermitian ``A``."""
    bk = ctx.bk
    r = len(A)
    anti = all(bk.is_zero(A[a][b] + A[b][a].conjugate()) for a in range(r) for b in range(r))
    nrm = trace_product(A, [[A[b][a].conjugate() for b in range(r)] for a in range(r)])
    sq = trace_product(A, A)
    zero = _mat_zero(ctx, A)
    ok = anti and bk.nonneg(nrm) and bk.nonneg(-sq) and (bk.is_zero(nrm) == zero)
    return ok, {"tr_AAdag": _j(nrm), "tr_A2": _j(sq)}


@check("conjugation_action")
def _conjugation_action(ctx: Ctx, p, q, L: InducedStructure):
    """Composition law, norm preservation and orientation of ``L -> g L g^-1``."""
    tol = ctx.bk.tol
    lhs = conjugate_structure(p * q, L)
    rhs = conjugate_structure(p, conjugate_structure(q, L))
    ok = all(abs(complex(a - b)) <= tol for a, b in zip(lhs.components(), rhs.components()))
    rows = [list(conjugate_structure(p, e).components()) for e in (I, J, K)]
    d = det(rows)
    ok &= abs(float(d) - 1.0) <= max(tol, 0.0) if not ctx.bk.exact else d == 1
    return ok, {"det": _j(d)}


@check("cycle_element")
def _cycle_element(ctx: Ctx):
    g = CYCLE_KIJ
    q = Quaternion(1, 0, 1, 0)
    res = {
        "gKg^-1=I": conjugate_structure(g, K) == I,
        "gIg^-1=J": conjugate_structure(g, I) == J,
        "gJg^-1=K": conjugate_structure(g, J) == K,
        "(1+j)K=I": conjugate_structure(q, K) == I,
        "(1+j)I=-K": conjugate_structure(q, I) == -K,
    }
    return all(res.values()), {"relations": res}


@check("omega_linear")
def _omega_linear(ctx: Ctx, L: InducedStructure, u, v):
    """``omega_L`` against ``a omega_I + b omega_J + c omega_K`` and direct evaluation."""
    kd, m, bk = ctx.kd, ctx.model, ctx.bk
    om = kd.omega(L)
    a, b, c = (bk.coerce(x) for x in L.components())
    lin = kd.omega_I * a + kd.omega_J * b + kd.omega_K * c
    ok_lin = om.equals(lin)
    ok_neg = kd.omega(-L).equals(-om)
    ok_real = is_real(om) and set(hodge_type_decompose(om, L)) <= {(1, 1)}
    # omega_L(u, v) = G(L u, v)
    M = m.structure_op(L).matrix()
    Lu = [sum((M[r][s] * u[s] for s in range(m.dim)), bk.zero) for r in range(m.dim)]
    G = kd.metric
    direct = sum((G[r][s] * Lu[r] * v[s] for r in range(m.dim) for s in range(m.dim) if G[r][s]), bk.zero)
    ok_eval = bk.eq(evaluate2(om, u, v), direct, max(1.0, abs(complex(direct))))
    res = {"linear": ok_lin, "odd": ok_neg, "real_11": ok_real, "evaluation": ok_eval}
    return all(res.values()), res


@check("lambda_consistency")
def _lambda_consistency(ctx: Ctx, eta: Form, L: InducedStructure):
    kd = ctx.kd
    lam = kd.lambda2(eta, L)
    deg = kd.degree_integrand(eta, L)
    f = math.factorial(ctx.model.N - 1)
    ok = ctx.bk.eq(deg, lam * f, max(1.0, abs(complex(deg))))
    return ok, {"degree": _j(deg), "lambda": _j(lam)}


@check("kahler_examples")
def _kahler_examples(ctx: Ctx):
    """Closed-form values of Lambda, degree and positivity on basic forms."""
    m, kd, bk = ctx.model, ctx.kd, ctx.bk
    N = m.N
    e1 = (m.z(1) ^ m.zb(1)) * bk.i
    res = {
        "lambda_omega": bk.eq(kd.lambda2(kd.omega_I), bk.coerce(N)),
        "degree_omega": bk.eq(kd.degree_integrand(kd.omega_I), bk.coerce(math.factorial(N)), math.factorial(N)),
        "degree_e1": bk.eq(kd.degree_integrand(e1), bk.coerce(math.factorial(N - 1)), math.factorial(N)),
        "pos_e1": kd.is_positive_11(e1),
        "pos_omega": kd.is_positive_11(kd.omega_I),
        "pos_codim1": kd.is_positive_codim1(kd.omega_I.power(N - 1)),
        "neg_codim1": not kd.is_positive_codim1(-kd.omega_I.power(N - 1)),
        "vol_invariant": is_invariant(kd.vol),
    }
    if N >= 2:
        e12 = e1 - (m.z(2) ^ m.zb(2)) * bk.i
        res["lambda_e12"] = bk.is_zero(kd.lambda2(e12))
        res["indefinite_e12"] = not kd.is_positive_11(e12)
    return all(res.values()), res


# --------------------------------------------------------------------------
# invariant 2-forms and the (p,p) criterion
# --------------------------------------------------------------------------
@check("lambda_invariant")
def _lambda_invariant(ctx: Ctx, eta: Form, Ls: list):
    """``Lambda_L eta = 0`` for every L; the (slow) wedge-route degree is checked for the first two."""
    kd = ctx.kd
    bad = []
    worst = 0.0
    for idx, L in enumerate(Ls):
        lam = kd.lambda2(eta, L)
        worst = max(worst, abs(complex(lam)))
        ok = _zero(ctx, lam)
        if ok and idx < 2:
            ok = ctx.bk.is_zero(kd.degree_integrand(eta, L), math.factorial(ctx.model.N))
        if not ok:
            bad.append(idx)
    ok = not bad and is_pp(eta, I) and is_pp(eta, J)
    return ok, {"bad_structures": bad, "max_abs_lambda": worst}


@check("invariance_pp")
def _invariance_pp(ctx: Ctx, f: Form, Ls: list):
    """An invariant form is (p,p) for every sampled structure."""
    bad = [idx for idx, L in enumerate(Ls) if not is_pp(f, L)]
    ok = not bad and is_invariant(f)
    if f.degree() == 2:
        ok &= invariant_projection(f).equals(f)
    return ok, {"not_pp_for": bad}


@check("invariance_criterion")
def _invariance_criterion(ctx: Ctx, f: Form, Ls: list):
    """For any 2-form: projector-fixed iff (p,p) for I, J, K and every sampled L."""
    fixed = invariant_projection(f).equals(f)
    pp_all = all(is_pp(f, L) for L in [I, J, K] + list(Ls))
    return fixed == pp_all == is_invariant(f), {"fixed": fixed, "pp_all": pp_all}


@check("projector_algebra")
def _projector_algebra(ctx: Ctx, eta: Form, g):
    m = ctx.model
    P = invariant_projection
    p = P(eta)
    res = {
        "idempotent": P(p).equals(p),
        "commutes_I": P(m.I_op(eta)).equals(m.I_op(p)),
        "commutes_J": P(m.J_op(eta)).equals(m.J_op(p)),
        "commutes_K": P(m.K_op(eta)).equals(m.K_op(p)),
        "haar": structure_action(g, p).equals(p),
        "degree_zero": all(ctx.bk.is_zero(ctx.kd.degree_integrand(p, L), math.factorial(m.N)) for L in (I, J, K)),
    }
    return all(res.values()), res


@check("invariant_pairing")
def _invariant_pairing(ctx: Ctx, phi: Form, L: InducedStructure):
    """An invariant 4-form pairs equally with ``omega_I^{N-2}``, ``omega_J^{N-2}``, ``omega_L^{N-2}``."""
    kd = ctx.kd
    N = ctx.model.N
    vals = [kd.pair_vol(phi, kd.omega_power(M, N - 2)) for M in (I, J, L)]
    scale = max(abs(complex(v)) for v in vals)
    ok = all(ctx.bk.eq(vals[0], v, scale) for v in vals[1:])
    return ok, {"pairings": [_j(v) for v in vals]}


# --------------------------------------------------------------------------
# curvature positivity and the Hodge-Riemann relation
# --------------------------------------------------------------------------
def _reality_ok(ctx: Ctx, A) -> bool:
    N = len(A)
    for k in range(N):
        for l in range(N):
            B = A[l][k]
            C = A[k][l]
            r = len(C)
            if not all(ctx.bk.is_zero(B[s][t] + C[t][s].conjugate()) for s in range(r) for t in range(r)):
                return False
    return True


@check("ym_generator")
def _ym_generator(ctx: Ctx, theta, traceless: bool):
    A = theta.blocks()
    N = ctx.model.N
    r = theta.rows
    entries_inv = all(
        is_pp(theta.entry(s, t), I) and is_pp(theta.entry(s, t), J) for s in range(r) for t in range(r)
    )
    res = {
        "invariant": entries_inv,
        "lambda_zero": _mat_zero(ctx, cv.lambda_endo(theta)),
        "reality": _reality_ok(ctx, A),
        "traceless": (not traceless)
        or all(_zero(ctx, sum((A[k][l][s][s] for s in range(r)), ctx.bk.zero)) for k in range(N) for l in range(N)),
    }
    return all(res.values()), res


@check("symplectic_pairs")
def _symplectic_pairs(ctx: Ctx, theta):
    A = theta.blocks()
    N = ctx.model.N
    r = theta.rows
    S = [[sum((A[k][k][s][t] for k in range(N)), ctx.bk.zero) for t in range(r)] for s in range(r)]
    pairs = all(
        _mat_zero(ctx, [[A[k][k][s][t] + A[k + 1][k + 1][s][t] for t in range(r)] for s in range(r)])
        for k in range(0, N, 2)
    )
    res = {"sum_Akk_zero": _mat_zero(ctx, S), "A_kk=-A_k+1k+1": pairs}
    return all(res.values()), res


@check("codim1_positive")
def _codim1_positive(ctx: Ctx, theta):
    kd = ctx.kd
    nu = cv.r2(theta).wedge(kd.omega_power(I, ctx.model.N - 3))
    H = kd.codim1_hermitian(nu)
    ok = ctx.bk.is_psd(H)
    detail = {}
    if not ok:
        ev = np.linalg.eigvalsh(np.array([[complex(x) for x in row] for row in H]))
        detail["eigenvalues"] = [float(x) for x in ev]
    return ok, detail


@check("b_formula")
def _b_formula(ctx: Ctx, theta):
    """Direct w_ii coefficients against the closed formula; ``B_ii >= 0``."""
    N = ctx.model.N
    Bd = cv.b_coefficients(theta, "direct")
    Bf = cv.b_coefficients(theta, "formula")
    bk = ctx.bk
    scale = max(abs(complex(Bd[i][i])) for i in range(N))
    agree = [bk.eq(Bd[i][i], Bf[i][i], scale) for i in range(N)]
    nonneg = [bk.nonneg(Bd[i][i], scale) for i in range(N)]
    detail = {}
    if not all(agree):
        detail["direct"] = [_j(Bd[i][i]) for i in range(N)]
        detail["formula"] = [_j(Bf[i][i]) for i in range(N)]
        detail["discrepancy_ratio"] = [_j(Bd[i][i] / Bf[i][i]) if Bf[i][i] else None for i in range(N)]
    detail["agree"] = all(agree)
    detail["nonneg"] = all(nonneg)
    return all(agree) and all(nonneg), detail


@check("c_ii")
def _c_ii(ctx: Ctx, theta):
    bk = ctx.bk
    bad = []
    for i in range(ctx.model.N):
        c = cv.c_ii(theta, i)
        s = max(1.0, abs(complex(c.definition)))
        if not (bk.eq(c.definition, c.intermediate, s) and bk.eq(c.definition, c.final, s) and bk.nonneg(c.final, s)):
            bad.append({"i": i, "definition": _j(c.definition), "intermediate": _j(c.intermediate), "final": _j(c.final)})
    return not bad, {"bad": bad}


@check("c_ii_ym")
def _c_ii_ym(ctx: Ctx, theta):
    """The intermediate C_ii identity needs only ``Lambda = 0``."""
    bk = ctx.bk
    bad = []
    for i in range(ctx.model.N):
        c = cv.c_ii(theta, i)
        if not bk.eq(c.definition, c.intermediate, max(1.0, abs(complex(c.definition)))):
            bad.append(i)
    return not bad, {"bad": bad}


@check("basis_bridge")
def _basis_bridge(ctx: Ctx, theta, c: list):
    kd = ctx.kd
    nu = cv.r2(theta).wedge(kd.omega_power(I, ctx.model.N - 3))
    q = kd.codim1_quadratic(nu, c)
    return ctx.bk.nonneg(q, max(1.0, abs(complex(q)))), {"Q": _j(q)}


@check("r2_invariant")
def _r2_invariant(ctx: Ctx, theta):
    return is_invariant(cv.r2(theta)), {}


@check("r2_u1")
def _r2_u1(ctx: Ctx, eta: Form):
    """Rank one: ``Theta = i eta`` gives ``Tr(Theta ^ Theta) = -eta ^ eta``."""
    m = ctx.model
    bk = ctx.bk
    theta = cv.BundleForm(m, 1, 1, {mk: [[c * bk.i]] for mk, c in eta.terms.items()})
    return cv.r2(theta).equals(-eta.wedge(eta)), {}


@check("hr_ratio")
def _hr_ratio(ctx: Ctx, theta):
    ratio, positive = cv.hodge_riemann_check(theta)
    return positive, {"ratio": _j(ratio)}


@check("hr_ratio_equal")
def _hr_ratio_equal(ctx: Ctx, theta_a, theta_b):
    ra, _ = cv.hodge_riemann_check(theta_a)
    rb, _ = cv.hodge_riemann_check(theta_b)
    return ctx.bk.eq(ra, rb, abs(complex(ra))), {"ratio_a": _j(ra), "ratio_b": _j(rb)}


# --------------------------------------------------------------------------
# weight split, E-form, positivity of eta_+ and the two conditions on (2,0)_I forms
# --------------------------------------------------------------------------
@check("weight_vs_k_split")
def _weight_vs_k_split(ctx: Ctx, eta: Form):
    split = weight_split(eta)
    parts = hodge_type_decompose(eta, K)
    z = ctx.model.zero()
    res = {
        "eta0=eta11_K": split.eta0.equals(parts.get((1, 1), z)),
        "eta+=eta20_K+eta02_K": split.etaPlus.equals(parts.get((2, 0), z) + parts.get((0, 2), z)),
        "reconstruct": (split.eta0 + split.etaPlus).equals(eta),
        "eta+_pure": invariant_projection(split.etaPlus).is_zero(eta.scale()),
    }
    return all(res.values()), res


@check("weight2_routes")
def _weight2_routes(ctx: Ctx, eta: Form):
    return weight2_part(eta).equals(weight2_via_K(eta)), {}


@check("k_eigen")
def _k_eigen(ctx: Ctx, eta: Form):
    """K is +1 on (1,1)_K and -1 on (2,0)_K + (0,2)_K."""
    Kop = ctx.model.K_op
    bad = []
    for (p, q), comp in hodge_type_decompose(eta, K).items():
        want = comp if p == q else -comp
        if not Kop(comp).equals(want):
            bad.append([p, q])
    return not bad, {"bad_types": bad}


@check("k20_roundtrip")
def _k20_roundtrip(ctx: Ctx, eta: Form):
    ep = weight2_part(eta)
    rho = to_K20(ep)
    return from_K20(rho).equals(ep), {}


@check("real_structure")
def _real_structure(ctx: Ctx, eta: Form):
    """``I(rho) = conj(rho)`` for ``rho = to_K20(eta_+)``; from_K20 real iff that holds."""
    m = ctx.model
    rho = to_K20(weight2_part(eta))
    twisted = rho * m.backend.i
    res = {
        "I(rho)=conj(rho)": m.I_op(rho).equals(rho.conj()),
        "from_K20_real": is_real(from_K20(rho)),
        "twisted_iff": is_real(from_K20(twisted)) == m.I_op(twisted).equals(twisted.conj()),
        "conj_to_K20": to_K20(weight2_part(eta.conj())).equals(m.I_op(rho.conj())),
    }
    return all(res.values()), res


@check("su2_examples")
def _su2_examples(ctx: Ctx):
    m, kd, bk = ctx.model, ctx.kd, ctx.bk
    res = {
        "P(omega_I)=0": invariant_projection(kd.omega_I).is_zero(),
        "P(z1^z2)=0": invariant_projection(m.z(1) ^ m.z(2)).is_zero(),
        "omega_I+=omega_I": weight2_part(kd.omega_I).equals(kd.omega_I),
        "to_K20(omega_I)": to_K20(kd.omega_I).equals(kd.Omega_K / 2),
        "from_K20(Omega_K/2)": from_K20(kd.Omega_K / 2).equals(kd.omega_I),
        "omega_I not invariant": not is_invariant(kd.omega_I),
        "omega_I K split": set(hodge_type_decompose(kd.omega_I, K)) == {(2, 0), (0, 2)},
        "K-positive(Omega_K/2)": kd.is_K_positive(kd.Omega_K / 2),
        "K-positive(0)": kd.is_K_positive(m.zero()),
    }
    if m.N >= 2:
        e = ((m.z(1) ^ m.zb(1)) - (m.z(2) ^ m.zb(2))) * bk.i
        res["P(e12)=e12"] = invariant_projection(e).equals(e)
    return all(res.values()), res


@check("e_form_constant")
def _e_form_constant(ctx: Ctx):
    r = ctx.kd.e_form()
    ok = r.proportional and r.positive
    if ctx.model.n == 1:
        ok &= ctx.bk.eq(r.c_n, ctx.bk.one)
    return ok, {"c_n": _j(r.c_n), "proportional": r.proportional}


def lemma74_constant(ctx: Ctx, eta: Form):
    """``coeff(eta^{2,0}_K ^ E) / (c_n deg_I eta)``; None if the degree vanishes."""
    kd = ctx.kd
    r = kd.e_form()
    eta20 = hodge_type_decompose(eta, K).get((2, 0), ctx.model.zero())
    lhs = kd.pair_vol(eta20, r.E)
    deg = kd.degree_integrand(eta, I)
    if ctx.bk.is_zero(deg, max(1.0, eta.scale())):
        return None, lhs, deg
    return lhs / (r.c_n * deg), lhs, deg


@check("e_form_identity")
def _e_form_identity(ctx: Ctx, eta: Form):
    kd = ctx.kd
    E = kd.e_form().E
    eta20 = hodge_type_decompose(eta, K).get((2, 0), ctx.model.zero())
    a = kd.pair_vol(eta20, E)
    b = kd.pair_vol(eta, E)
    const, _, deg = lemma74_constant(ctx, eta)
    ok = ctx.bk.eq(a, b, max(1.0, abs(complex(a))))
    return ok, {"eta20^E": _j(a), "eta^E": _j(b), "constant": _j(const)}


@check("lemma74_constant_equal")
def _lemma74_equal(ctx: Ctx, eta_a: Form, eta_b: Form):
    ca, _, _ = lemma74_constant(ctx, eta_a)
    cb, _, _ = lemma74_constant(ctx, eta_b)
    ok = ca is not None and cb is not None and ctx.bk.eq(ca, cb, abs(complex(ca)))
    return ok, {"constant_a": _j(ca), "constant_b": _j(cb)}


@check("eta_plus_positive")
def _eta_plus_positive(ctx: Ctx, eta: Form):
    kd = ctx.kd
    ep = weight2_part(eta)
    res = {
        "eta+_positive": kd.is_positive_11(ep),
        "eta+_nonzero": eta.is_zero() or not ep.is_zero(eta.scale()),
        "-K(eta)_positive": kd.is_positive_11(-ctx.model.K_op(eta)),
        "to_K20_K_positive": kd.is_K_positive(to_K20(ep)),
    }
    return all(res.values()), res


@check("conditions_ab")
def _conditions_ab(ctx: Ctx, eta: Form):
    """Condition (a) holds and condition (b) agrees with K-positivity after rotation."""
    kd = ctx.kd
    a = kd.satisfies_reality_J(eta)
    b = kd.satisfies_positivity_b(eta)
    kp = kd.is_K_positive(structure_action(CYCLE_KIJ.inverse(), eta))
    return a and b == kp, {"a": a, "b": b, "K_positive": kp}


@check("k_positive_indefinite")
def _k_positive_indefinite(ctx: Ctx):
    """An indefinite weight-2 form gives a (2,0)_K form that is not K-positive.

    ``i(z1^zb1 - z2^zb2)`` is invariant under this dictionary, so its weight-2
    part vanishes; the pair ``z1, z3`` is used instead (``-omega_I`` for n = 1).
    """
    m, kd, bk = ctx.model, ctx.kd, ctx.bk
    if m.N >= 4:
        e = ((m.z(1) ^ m.zb(1)) - (m.z(3) ^ m.zb(3))) * bk.i
    else:
        e = -kd.omega_I
    rho = to_K20(weight2_part(e))
    return not rho.is_zero() and not kd.is_K_positive(rho), {}


# --------------------------------------------------------------------------
# sub-bundles and Chern-Weil densities
# --------------------------------------------------------------------------
@check("subbundle_identity")
def _subbundle_identity(ctx: Ctx, theta, A):
    tp = cv.subbundle_curvature(theta, A)
    sub = range(A.sub_rank)
    lhs = tp.trace() + cv.trace_a_aperp(A)
    rhs = theta.block(sub, sub).trace()
    ok = lhs.equals(rhs)
    if A.is_zero():
        ok &= tp.equals(theta.block(sub, sub))
    return ok, {}


@check("gram_positive")
def _gram_positive(ctx: Ctx, A):
    f = cv.trace_a_aperp(A) * ctx.bk.i
    return ctx.kd.is_positive_11(f), {}


@check("subbundle_degree")
def _subbundle_degree(ctx: Ctx, theta, A):
    """Degree of ``-i Tr Theta'`` is ``>= 0``, and zero iff ``A = 0``."""
    bk = ctx.bk
    tp = cv.subbundle_curvature(theta, A)
    d = ctx.kd.degree_integrand(-(tp.trace() * bk.i), I)
    s = max(1.0, abs(complex(d)))
    zero = bk.is_zero(d, 1.0)
    ok = bk.nonneg(d, s) and (zero == A.is_zero())
    return ok, {"degree": _j(d), "A_zero": A.is_zero()}


@check("chern_c1")
def _chern_c1(ctx: Ctx, theta, Ls: list):
    ci = cv.chern_integrands(theta)
    c1 = ci.c1_density
    kd = ctx.kd
    fact = math.factorial(ctx.model.N)
    res = {
        "real": is_real(c1),
        "invariant": is_invariant(c1) if c1.terms else True,
        "degree_zero": all(ctx.bk.is_zero(kd.degree_integrand(c1, L), fact) for L in [I, J] + list(Ls)),
    }
    return all(res.values()), res


@check("chern_traceless")
def _chern_traceless(ctx: Ctx, theta):
    return cv.chern_integrands(theta).c1_density.is_zero(), {}


@check("disc_pairing")
def _disc_pairing(ctx: Ctx, theta):
    kd = ctx.kd
    N = ctx.model.N
    disc = cv.chern_integrands(theta).disc_density
    a = kd.pair_vol(disc, kd.omega_power(I, N - 2))
    b = kd.pair_vol(disc, kd.omega_power(J, N - 2))
    ok = is_real(disc) and ctx.bk.eq(a, b, max(1.0, abs(complex(a))))
    return ok, {"with_omega_I": _j(a), "with_omega_J": _j(b)}
