"""Flat connections built from Lie data, their braid group monodromy, and
quantum group cross-checks."""
from . import connections, duality, exact, liecore, quantum, transport
from .connections import (
    FlatConnection,
    build_casimir,
    build_ckz,
    build_kz,
    check_v0_identity,
    kohno_flatness_check,
)
from .liecore import build_rep, build_root_system
from .transport import kd_compare, monodromy_rep, parallel_transport

__version__ = "0.1.0"

__all__ = [
    "FlatConnection",
    "build_casimir",
    "build_ckz",
    "build_kz",
    "build_rep",
    "build_root_system",
    "check_v0_identity",
    "connections",
    "duality",
    "exact",
    "kd_compare",
    "kohno_flatness_check",
    "liecore",
    "monodromy_rep",
    "parallel_transport",
    "quantum",
    "transport",
]
