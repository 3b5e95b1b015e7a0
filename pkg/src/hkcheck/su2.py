"""SU(2) weight decomposition of 2-forms and the correspondence with (2,0)_K."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeError, HodgeTypeError, NonHomogeneousError, WeightError
from .forms import Form, hodge_type_decompose, is_pp, structure_action
from .quat import I, J, K, random_unit_quaternion

__all__ = [
    "WeightSplit",
    "invariant_projection",
    "weight2_part",
    "weight2_via_K",
    "weight_split",
    "to_K20",
    "from_K20",
    "is_invariant",
]

# number of random unit quaternions used by the spot check in is_invariant
SPOT_CHECKS = 5


@dataclass(frozen=True)
class WeightSplit:
    eta0: Form
    etaPlus: Form


def _require_2form(eta: Form, what: str):
    if not eta.is_homogeneous() or (eta.terms and eta.degree() != 2):
        raise DegreeError(f"{what} needs a 2-form, got degrees {sorted(eta.degrees())}")


def invariant_projection(eta: Form) -> Form:
    """``(eta + I eta + J eta + K eta) / 4``.

    On 2-forms the SU(2) action factors through the commuting involutions
    I, J, K, so this average is the Haar projector.
    """
    _require_2form(eta, "invariant_projection")
    m = eta.model
    return (eta + m.I_op(eta) + m.J_op(eta) + m.K_op(eta)) / 4


def weight2_part(eta: Form) -> Form:
    """``eta_+ = eta - eta_0``."""
    return eta - invariant_projection(eta)


def weight2_via_K(eta: Form) -> Form:
    """``(eta - K eta) / 2``; agrees with :func:`weight2_part` on (1,1)_I forms."""
    _require_2form(eta, "weight2_via_K")
    return (eta - eta.model.K_op(eta)) / 2


def weight_split(eta: Form) -> WeightSplit:
    eta0 = invariant_projection(eta)
    return WeightSplit(eta0, eta - eta0)


def to_K20(eta_plus: Form) -> Form:
    """The (2,0)_K component of a pure weight-2 (1,1)_I form."""
    _require_2form(eta_plus, "to_K20")
    if not invariant_projection(eta_plus).is_zero(eta_plus.scale()):
        raise WeightError("form is not pure of weight 2")
    if not is_pp(eta_plus, I):
        raise HodgeTypeError("form is not of type (1,1) for I")
    return hodge_type_decompose(eta_plus, K).get((2, 0), eta_plus.model.zero())


def from_K20(rho: Form) -> Form:
    """Inverse of :func:`to_K20`: ``rho + I(rho)``.

    ``I`` swaps (2,0)_K and (0,2)_K, and when ``I(rho) = conj(rho)`` the
    result is real.
    """
    _require_2form(rho, "from_K20")
    parts = hodge_type_decompose(rho, K)
    if set(parts) - {(2, 0)}:
        raise HodgeTypeError("form is not of type (2,0) for K")
    return rho + rho.model.I_op(rho)


def is_invariant(f: Form, rng: np.random.Generator | None = None) -> bool:
    """SU(2)-invariance, decided as ``(p,p)`` for both I and J.

    Degree-2 forms are also compared against the projector; higher degrees get
    a spot check under a few random unit quaternions.
    """
    if not f.is_homogeneous():
        raise NonHomogeneousError("is_invariant needs a homogeneous form")
    pp = is_pp(f, I) and is_pp(f, J)
    d = f.degree()
    if d == 2:
        proj = invariant_projection(f).equals(f)
        if proj != pp:
            raise AssertionError("projector and (p,p) criterion disagree")
        return pp
    if d < 4 or not pp:
        return pp
    rng = rng if rng is not None else np.random.default_rng(52)
    for _ in range(SPOT_CHECKS):
        g = random_unit_quaternion(rng, f.model.backend)
        if not structure_action(g, f).equals(f):
            raise AssertionError("form is (p,p) for I and J but moved by a unit quaternion")
    return True
