"""Modular units, cuspidal divisors and cuspidal class groups on X_0(N), N = n^2 M with n | 24."""

from .curve import CuspidalDivisor, InvalidLevel, Level, cusps, galois_apply, is_rational_divisor, level_new
from .cuspgroup import class_group, class_group_fixed, class_group_rational, rationalize, verify_theorem3
from .eta import EtaLabel, ExponentVector, eta_divisor, eta_multiplier, eta_qexp, rewrite_to_canonical
from .units import check_theorem1, divisor_of, is_principal, unit_basis, unit_basis_rational

__all__ = [
    "CuspidalDivisor",
    "EtaLabel",
    "ExponentVector",
    "InvalidLevel",
    "Level",
    "check_theorem1",
    "class_group",
    "class_group_fixed",
    "class_group_rational",
    "cusps",
    "divisor_of",
    "eta_divisor",
    "eta_multiplier",
    "eta_qexp",
    "galois_apply",
    "is_principal",
    "is_rational_divisor",
    "level_new",
    "rationalize",
    "rewrite_to_canonical",
    "unit_basis",
    "unit_basis_rational",
    "verify_theorem3",
]

__version__ = "0.1.0"
