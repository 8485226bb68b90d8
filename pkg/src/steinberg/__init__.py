"""Steinberg modules of SL_n over compatible finite field towers.

Builds the induced module on Borel cosets over a cross-characteristic
coefficient field, produces replayable group-algebra certificates carrying
any nonzero Steinberg vector to the alternating generator, contrasts that
with finite-level reducibility found by spinning, and runs exact q-integer
divisibility scans.
"""

__version__ = "0.1.0"

from .errors import CharacteristicClashError, LevelError, NotInSteinbergError
from .fields import FieldElement, FieldTower, make_tower
from .group import (
    GroupElement,
    RootDatum,
    WeylElement,
    bruhat_decompose,
    enumerate_U,
    enumerate_X,
    eps,
    root_datum,
    torus_for_root_value,
    weyl_rep,
)
from .coset_module import CosetLabel, ModuleContext, MVector, StVector
from .engine import (
    Certificate,
    LadderState,
    check_lemma25,
    double_field_sum,
    extract_eta,
    finite_steinberg_report,
    ladder_step,
    lift_to_U_sum,
    reach_eta,
    spin,
    verify_certificate,
)
from .qintegers import (
    divides_for_all_a,
    q_integer,
    remark33_check,
    steinberg_product,
)

__all__ = [
    "CharacteristicClashError",
    "LevelError",
    "NotInSteinbergError",
    "FieldElement",
    "FieldTower",
    "make_tower",
    "GroupElement",
    "RootDatum",
    "WeylElement",
    "bruhat_decompose",
    "enumerate_U",
    "enumerate_X",
    "eps",
    "root_datum",
    "torus_for_root_value",
    "weyl_rep",
    "CosetLabel",
    "ModuleContext",
    "MVector",
    "StVector",
    "Certificate",
    "LadderState",
    "check_lemma25",
    "double_field_sum",
    "extract_eta",
    "finite_steinberg_report",
    "ladder_step",
    "lift_to_U_sum",
    "reach_eta",
    "spin",
    "verify_certificate",
    "divides_for_all_a",
    "q_integer",
    "remark33_check",
    "steinberg_product",
]
