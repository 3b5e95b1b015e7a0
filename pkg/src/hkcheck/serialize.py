"""Tagged JSON encoding of check inputs, used for replayable counterexamples."""
from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

from .curvature import BundleForm, SecondForm
from .forms import FiberModel, Form
from .quat import InducedStructure, Quaternion, UnitQuaternion
from .scalars import GaussRat, scalar_from_json, scalar_to_json


def real_to_json(x):
    """Real quaternion component: ``"p/q"`` if exact, else a float."""
    if isinstance(x, (int, mpq, Fraction)):
        x = mpq(x)
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def real_from_json(v):
    return mpq(v) if isinstance(v, str) else float(v)


def is_scalar(x) -> bool:
    return isinstance(x, (GaussRat, complex, int, float, mpq, Fraction))


def encode(value):
    if isinstance(value, Form):
        return {"form": value.to_json()}
    if isinstance(value, BundleForm):
        return {"bundle": value.to_json()}
    if isinstance(value, SecondForm):
        return {"second": value.to_json()}
    if isinstance(value, InducedStructure):
        return {"structure": [real_to_json(c) for c in value.components()]}
    if isinstance(value, UnitQuaternion):
        return {"unit_quaternion": [real_to_json(c) for c in value.q.components()]}
    if isinstance(value, Quaternion):
        return {"quaternion": [real_to_json(c) for c in value.components()]}
    if isinstance(value, bool) or isinstance(value, str) or value is None:
        return {"value": value}
    if isinstance(value, int):
        return {"value": value}
    if is_scalar(value):
        return {"scalar": scalar_to_json(value)}
    if isinstance(value, (list, tuple)):
        if value and isinstance(value[0], (list, tuple)) and value[0] and is_scalar(value[0][0]):
            return {"matrix": [[scalar_to_json(x) for x in row] for row in value]}
        return {"list": [encode(v) for v in value]}
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode(model: FiberModel, data):
    (tag, v), = data.items()
    bk = model.backend
    if tag == "form":
        return Form.from_json(model, v)
    if tag == "bundle":
        return BundleForm.from_json(model, v)
    if tag == "second":
        return SecondForm.from_json(model, v)
    if tag == "structure":
        return InducedStructure(*(real_from_json(c) for c in v))
    if tag == "unit_quaternion":
        return UnitQuaternion(Quaternion(*(real_from_json(c) for c in v)))
    if tag == "quaternion":
        return Quaternion(*(real_from_json(c) for c in v))
    if tag == "value":
        return v
    if tag == "scalar":
        return bk.coerce(scalar_from_json(v))
    if tag == "matrix":
        return [[bk.coerce(scalar_from_json(x)) for x in row] for row in v]
    if tag == "list":
        return [decode(model, x) for x in v]
    raise ValueError(f"unknown tag {tag!r}")


def encode_args(args: dict) -> dict:
    return {k: encode(v) for k, v in sorted(args.items())}


def decode_args(model: FiberModel, data: dict) -> dict:
    return {k: decode(model, v) for k, v in data.items()}


def constant_to_json(x):
    """Measured constants: exact reals as ``"p/q"``, float reals as numbers."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, GaussRat):
        if x.im == 0:
            return real_to_json(x.re)
        return scalar_to_json(x)
    if isinstance(x, complex):
        return x.real if x.imag == 0 else [x.real, x.imag]
    if isinstance(x, (int, mpq, Fraction, float)):
        return real_to_json(x)
    return x
