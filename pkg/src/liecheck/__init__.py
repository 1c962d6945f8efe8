"""Exact-arithmetic checks for restricted-root data, unitarily small
k-types, and spin-norm growth along beta-translation chains."""

__version__ = "0.1.0"

from .cases import CaseData, CaseId, build_case, get_case, list_cases
from .errors import ConstructionError, LiecheckError, UnknownCaseError, UsageError
from .pencil import (
    Box,
    PencilReport,
    default_box,
    naive_bound,
    parabolic_bound,
    pencil_member,
    sp4r_family,
    step_margin_sq,
    verify_box,
)
from .spin import spin_norm_sq, variant_norms_sq
from .usmall import enumerate_usmall, is_usmall, iter_usmall, usmall_system

__all__ = [
    "Box",
    "CaseData",
    "CaseId",
    "ConstructionError",
    "LiecheckError",
    "PencilReport",
    "UnknownCaseError",
    "UsageError",
    "build_case",
    "default_box",
    "enumerate_usmall",
    "get_case",
    "is_usmall",
    "iter_usmall",
    "list_cases",
    "naive_bound",
    "parabolic_bound",
    "pencil_member",
    "sp4r_family",
    "spin_norm_sq",
    "step_margin_sq",
    "usmall_system",
    "variant_norms_sq",
    "verify_box",
]
