class ModelMismatchError(ValueError):
    """Operands live on different fiber models."""


class DegreeError(ValueError):
    """A form has the wrong degree for the operation."""


class NonHomogeneousError(ValueError):
    """A form mixes several degrees where one is required."""


class HodgeTypeError(ValueError):
    """A form has Hodge components outside the required type."""


class RealityError(ValueError):
    """A form that must be real is not."""


class WeightError(ValueError):
    """A 2-form is not pure of weight 2."""


class ConfigError(ValueError):
    """Invalid suite configuration (maps to CLI exit code 2)."""
