"""Exact and floating-point checks of linear algebra on a flat hyperkahler fiber."""
from .curvature import BundleForm, SecondForm, c_ii, hodge_riemann_check
from .errors import (
    ConfigError,
    DegreeError,
    HodgeTypeError,
    ModelMismatchError,
    NonHomogeneousError,
    RealityError,
    WeightError,
)
from .forms import FiberModel, Form, conj, hodge_type_decompose, is_pp, is_real, structure_action, wedge
from .kahler import KahlerData, kahler_data
from .quat import CYCLE_KIJ, I, J, K, InducedStructure, Quaternion, UnitQuaternion
from .report import SuiteConfig, VerificationReport, run_all, run_suite
from .scalars import ExactBackend, FloatBackend, GaussRat, get_backend
from .su2 import from_K20, invariant_projection, is_invariant, to_K20, weight_split

__version__ = "0.1.0"
