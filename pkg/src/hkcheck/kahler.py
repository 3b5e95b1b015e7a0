"""Kähler forms, the Λ operator on 2-forms, degree integrands, the E-form and
positivity predicates on the flat model.

The metric is ``G = sum_k z_k (x) zb_k + zb_k (x) z_k`` and ``omega_L = <L., .>``,
which gives ``omega_I = i sum z_k ^ zb_k``.  Vol is ``omega_I^N / N!``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegreeError, HodgeTypeError, RealityError
from .forms import FiberModel, Form, hodge_type_decompose, is_pp, merge_sign
from .quat import I, J, K, InducedStructure

__all__ = [
    "KahlerData",
    "kahler_data",
    "top_pairing",
    "evaluate2",
    "EFormResult",
]


def top_pairing(f: Form, g: Form):
    """Top-degree coefficient of ``f ^ g`` without forming the full product."""
    top = f.model.top_mask
    total = f.model.backend.zero
    fterms = f.terms
    for m, c in g.terms.items():
        a = fterms.get(top ^ m)
        if a is None:
            continue
        v = a * c
        total = total + (v if merge_sign(top ^ m, m) > 0 else -v)
    return total


def evaluate2(eta: Form, u, v):
    """``eta(u, v)`` for a 2-form and tangent vectors given in the dual frame."""
    total = eta.model.backend.zero
    for m, c in eta.terms.items():
        low = m & -m
        a = low.bit_length() - 1
        b = (m ^ low).bit_length() - 1
        total = total + c * (u[a] * v[b] - u[b] * v[a])
    return total


def _require_degree(f: Form, d: int, what: str):
    if not f.is_homogeneous() or (f.terms and f.degree() != d):
        raise DegreeError(f"{what} needs a {d}-form, got degrees {sorted(f.degrees())}")


@dataclass
class EFormResult:
    E: Form
    E_11: Form
    c_n: object
    proportional: bool
    positive: bool


class KahlerData:
    """Kähler forms, holomorphic symplectic forms and Vol for one model."""

    def __init__(self, model: FiberModel):
        self.model = model
        bk = model.backend
        N = model.N
        self.metric = [[bk.zero] * model.dim for _ in range(model.dim)]
        for k in range(N):
            self.metric[k][N + k] = bk.one
            self.metric[N + k][k] = bk.one
        # the inverse metric has the same off-diagonal pattern
        self.metric_inv = self.metric
        self.omega_I = self.omega(I)
        self.omega_J = self.omega(J)
        self.omega_K = self.omega(K)
        self.Omega_I = self.omega_J + self.omega_K * bk.i
        self.Omega_K = self.omega_I + self.omega_J * bk.i
        self.vol = self.omega_I.power(N) / math.factorial(N)
        self.vol_top = self.vol.coefficient(model.top_mask)
        self._omega_cache: dict[tuple, Form] = {}
        self._eform: EFormResult | None = None

    # -- Kähler forms ------------------------------------------------------
    def omega(self, L: InducedStructure) -> Form:
        """``omega_L(u, v) = G(L u, v)`` written in the complex coframe."""
        model = self.model
        bk = model.backend
        M = model.structure_op(L).matrix()
        G = self.metric
        dim = model.dim
        W = [[sum((M[a][c] * G[a][b] for a in range(dim) if M[a][c] and G[a][b]), bk.zero) for b in range(dim)] for c in range(dim)]
        terms = {}
        for c in range(dim):
            for b in range(c + 1, dim):
                v = (W[c][b] - W[b][c]) / 2
                if v:
                    terms[(1 << c) | (1 << b)] = v
        return Form(model, terms)

    def omega_power(self, L: InducedStructure, k: int) -> Form:
        key = (L.components(), k)
        f = self._omega_cache.get(key)
        if f is None:
            f = self.omega(L).power(k)
            if len(self._omega_cache) > 64:
                self._omega_cache.clear()
            self._omega_cache[key] = f
        return f

    def vol_coefficient(self, f: Form):
        """``lambda`` with ``f^{top} = lambda Vol``."""
        return f.coefficient(self.model.top_mask) / self.vol_top

    def pair_vol(self, f: Form, g: Form):
        """``lambda`` with ``f ^ g = lambda Vol`` (top-degree part)."""
        return top_pairing(f, g) / self.vol_top

    # -- Λ and degrees ---------------------------------------------------------
    def lambda2(self, eta: Form, L: InducedStructure = I):
        """``Lambda_L eta``: trace of the (1,1)_L coefficient matrix.

        Contracts ``eta`` against ``sum_k W_k (x) conj(W_k)`` for an L-unitary
        frame, obtained by projecting the inverse metric with the tangent
        projectors onto (1,0)_L and (0,1)_L.
        """
        _require_degree(eta, 2, "lambda2")
        model = self.model
        bk = model.backend
        N = model.N
        half = bk.one / 2
        ihalf = bk.i * half
        # sparse rows of the tangent projectors; M[a][b] = coeff of theta_b in L^* theta_a
        p10: list[dict] = []
        p01: list[dict] = []
        for a, img in enumerate(model.structure_op(L).images):
            r10 = {a: half}
            r01 = {a: half}
            for c, v in img:
                r10[c] = r10.get(c, bk.zero) - ihalf * v
                r01[c] = r01.get(c, bk.zero) + ihalf * v
            p10.append(r10)
            p01.append(r01)

        def biv(a, b):
            # (p10 Ginv p01^T)[a][b]; Ginv pairs c with its conjugate index
            t = bk.zero
            row = p01[b]
            for c, v in p10[a].items():
                w = row.get(c + N if c < N else c - N)
                if w is not None:
                    t = t + v * w
            return t

        total = bk.zero
        for m, coeff in eta.terms.items():
            low = m & -m
            a = low.bit_length() - 1
            b = (m ^ low).bit_length() - 1
            total = total + coeff * (biv(a, b) - biv(b, a))
        return -bk.i * total

    def degree_integrand(self, eta: Form, L: InducedStructure = I):
        """``lambda`` with ``eta ^ omega_L^{N-1} = lambda Vol`` (direct wedge)."""
        _require_degree(eta, 2, "degree_integrand")
        return self.pair_vol(eta, self.omega_power(L, self.model.N - 1))

    # -- E-form ------------------------------------------------------------------
    def e_form(self) -> EFormResult:
        """``E = Omega_K^{n-1} ^ conj(Omega_K)^n`` and ``c_n``.

        ``E^{(N-1,N-1)}_I`` must be ``c_n^{-1} omega_I^{N-1}``; failure of
        proportionality is returned in the result, not raised.
        """
        if self._eform is not None:
            return self._eform
        n = self.model.n
        bk = self.model.backend
        E = self.Omega_K.power(n - 1).wedge(self.Omega_K.conj().power(n))
        N = self.model.N
        E11 = E.i_type_part(N - 1, N - 1)
        ref = self.omega_I.power(N - 1)
        mask = next(iter(ref.terms))
        t = E11.coefficient(mask) / ref.coefficient(mask)
        proportional = bool(t) and E11.equals(ref * t)
        c_n = (bk.one / t) if t else None
        positive = c_n is not None and bk.positive(c_n)
        self._eform = EFormResult(E, E11, c_n, proportional, positive)
        return self._eform

    # -- positivity -----------------------------------------------------------
    def hermitian_11(self, eta: Form) -> list[list]:
        """``h`` with ``eta = i sum h_kl z_k ^ zb_l`` (checks reality and type)."""
        _require_degree(eta, 2, "is_positive_11")
        model = self.model
        if not is_pp(eta, I):
            raise HodgeTypeError("form has (2,0) or (0,2) components for I")
        if not eta.conj().equals(eta):
            raise RealityError("form is not real")
        bk = model.backend
        N = model.N
        return [[-bk.i * eta.coefficient((1 << k) | (1 << (N + l))) for l in range(N)] for k in range(N)]

    def is_positive_11(self, eta: Form) -> bool:
        return self.model.backend.is_psd(self.hermitian_11(eta))

    def codim1_quadratic(self, nu: Form, c) -> object:
        """``Q(c)``: Vol-coefficient of ``i nu ^ z_c ^ conj(z_c)``, ``z_c = sum c_k z_k``."""
        model = self.model
        bk = model.backend
        zc = model.zero()
        for k, ck in enumerate(c):
            if ck:
                zc = zc + model.z(k + 1) * ck
        return self.pair_vol(nu, zc.wedge(zc.conj()) * bk.i)

    def codim1_hermitian(self, nu: Form) -> list[list]:
        """Matrix of ``Q`` recovered by polarization over basis vectors and pairs."""
        model = self.model
        N = model.N
        _require_degree(nu, 2 * N - 2, "is_positive_codim1")
        if not is_pp(nu, I):
            raise HodgeTypeError("form is not of type (N-1, N-1) for I")
        if not nu.conj().equals(nu):
            raise RealityError("form is not real")
        bk = model.backend
        zero, one, i = bk.zero, bk.one, bk.i
        basis = lambda *pairs: [dict(pairs).get(k, zero) for k in range(N)]
        diag = [self.codim1_quadratic(nu, basis((a, one))) for a in range(N)]
        H = [[zero] * N for _ in range(N)]
        for a in range(N):
            H[a][a] = diag[a]
            for b in range(a + 1, N):
                re = (self.codim1_quadratic(nu, basis((a, one), (b, one))) - diag[a] - diag[b]) / 2
                im = (self.codim1_quadratic(nu, basis((a, one), (b, i))) - diag[a] - diag[b]) / 2
                # Q(e_a + t e_b) = H_aa + H_bb + 2 Re(conj(t) H_ab)
                H[a][b] = re + i * im
                H[b][a] = re - i * im
        return H

    def is_positive_codim1(self, nu: Form) -> bool:
        return self.model.backend.is_psd(self.codim1_hermitian(nu))

    def is_K_positive(self, rho: Form) -> bool:
        """K-positivity of a (2,0)_K form with ``I(rho) = conj(rho)``."""
        _require_degree(rho, 2, "is_K_positive")
        model = self.model
        if not rho.terms:
            return True
        parts = hodge_type_decompose(rho, K)
        if set(parts) - {(2, 0)}:
            raise HodgeTypeError("form is not of type (2,0) for K")
        if not model.I_op(rho).equals(rho.conj()):
            raise RealityError("I(rho) != conj(rho)")
        re = (rho + rho.conj()) / 2
        if not is_pp(re, I):
            raise HodgeTypeError("Re(rho) is not of type (1,1) for I")
        return self.is_positive_11(re)

    # -- the two conditions on (2,0)_I forms -----------------------------------
    def satisfies_reality_J(self, eta: Form) -> bool:
        """Condition (a): ``J eta = conj(eta)``."""
        return self.model.J_op(eta).equals(eta.conj())

    def twisted_hermitian(self, eta: Form) -> list[list]:
        """``Q_ab = eta(e_a, J conj(e_b))`` on (1,0)_I vectors.

        For ``x`` of type (1,0), ``I conj(x) = -i conj(x)`` so ``eta(x, I conj x)``
        vanishes on (2,0) forms; the nondegenerate real quadratic form attached
        to a (2,0)_I form with ``J eta = conj(eta)`` pairs ``x`` with
        ``J conj(x)`` instead.  See the decisions ledger.
        """
        _require_degree(eta, 2, "twisted_hermitian")
        model = self.model
        bk = model.backend
        N, dim = model.N, model.dim
        M = model.J_op.matrix()
        H = []
        for a in range(N):
            u = [bk.zero] * dim
            u[a] = bk.one
            row = []
            for b in range(N):
                # conj(e_b) is the basis vector N+b; column N+b of M is J of it
                v = [M[r][N + b] for r in range(dim)]
                row.append(evaluate2(eta, u, v))
            H.append(row)
        return H

    def satisfies_positivity_b(self, eta: Form) -> bool:
        """Condition (b) as a PSD test of :meth:`twisted_hermitian`."""
        return self.model.backend.is_psd(self.twisted_hermitian(eta))


def kahler_data(model: FiberModel) -> KahlerData:
    """Shared :class:`KahlerData` for ``model`` (built once, read-only)."""
    kd = model.__dict__.get("_kahler")
    if kd is None:
        kd = KahlerData(model)
        model.__dict__["_kahler"] = kd
    return kd
