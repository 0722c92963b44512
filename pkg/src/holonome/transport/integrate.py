"""Parallel transport of logarithmic connections along PathSpecs."""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pykernel
from .paths import PathSpec

try:
    from . import _kernel as _ckernel
except ImportError:  # extension not built
    _ckernel = None

_KERNELS = {"python": _pykernel.integrate_segment}
if _ckernel is not None:
    _KERNELS["cython"] = _ckernel.integrate_segment

DEFAULT_BACKEND = os.environ.get("HOLONOME_BACKEND") or ("cython" if _ckernel is not None else "python")
if DEFAULT_BACKEND not in _KERNELS:
    DEFAULT_BACKEND = "python"

DEFAULT_TOL = 1e-10
MAX_REFINEMENTS = 3

_STATUS_TEXT = {
    _pykernel.STATUS_UNDERFLOW: "step size underflow (path too close to a wall for this tolerance)",
    _pykernel.STATUS_NONFINITE: "non-finite values during integration",
    _pykernel.STATUS_MAXSTEPS: "step budget exhausted",
}


class TransportError(RuntimeError):
    pass


def available_backends() -> list[str]:
    return sorted(_KERNELS)


@dataclass(frozen=True)
class TransportResult:
    matrix: np.ndarray
    err_estimate: float
    steps: int
    rejected: int = 0
    tol: float = DEFAULT_TOL
    backend: str = DEFAULT_BACKEND


def _segment_coefficients(path: PathSpec, seg) -> np.ndarray:
    phi = path.forms
    return np.ascontiguousarray(
        np.stack([phi @ seg.P, phi @ seg.L, phi @ seg.U, phi @ seg.V], axis=1), dtype=complex
    )


def _run(residues, path: PathSpec, tol: float, fixed_steps: int, kernel) -> tuple[np.ndarray, int, int]:
    d = residues.shape[1]
    Y = np.eye(d, dtype=complex)
    acc = rej = 0
    for seg in path.segments:
        if seg.is_constant():
            continue
        coef = _segment_coefficients(path, seg)
        Y, a, r, status = kernel(coef, float(seg.theta0), float(seg.omega), residues, Y, tol, fixed_steps)
        Y = np.asarray(Y)
        acc += a
        rej += r
        if status:
            raise TransportError(_STATUS_TEXT.get(status, f"kernel status {status}"))
    return Y, acc, rej


def parallel_transport(conn, path: PathSpec, tol: float = DEFAULT_TOL, fixed_steps: int | None = None,
                       backend: str | None = None) -> TransportResult:
    """Solve Y' = A(t) Y, Y(0) = I, with A(t) = sum_k dlog phi_k(x(t))/dt * h w_k r_k.

    Adaptive mode compares runs at ``tol`` and ``tol/10`` and returns the
    finer one; the difference is the error estimate, and the pair is pushed
    down by further factors of ten while it exceeds ``tol``. With
    ``fixed_steps = N`` the comparison is between N and 2N steps per segment.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if path.wall_clearance <= 0:
        raise ValueError("path meets a wall")
    backend = backend or DEFAULT_BACKEND
    if backend not in _KERNELS:
        raise ValueError(f"backend {backend!r} unavailable; have {available_backends()}")
    kernel = _KERNELS[backend]
    residues = np.ascontiguousarray(conn.numeric_residues() if hasattr(conn, "numeric_residues") else conn,
                                    dtype=complex)
    d = residues.shape[1]
    if residues.shape[0] != path.forms.shape[0]:
        raise ValueError("path forms do not match the connection's hyperplanes")
    if not np.any(residues):
        return TransportResult(np.eye(d, dtype=complex), 0.0, 0, 0, tol, backend)
    if fixed_steps:
        coarse, _, _ = _run(residues, path, tol, fixed_steps, kernel)
        fine, acc, rej = _run(residues, path, tol, 2 * fixed_steps, kernel)
        err = float(np.abs(fine - coarse).max())
        return TransportResult(fine, err, acc, rej, tol, backend)
    level = tol
    coarse, _, _ = _run(residues, path, level, 0, kernel)
    for _ in range(MAX_REFINEMENTS + 1):
        fine, acc, rej = _run(residues, path, level / 10, 0, kernel)
        err = float(np.abs(fine - coarse).max())
        if not np.isfinite(err):
            raise TransportError("non-finite transport matrix")
        if err <= tol:
            return TransportResult(fine, err, acc, rej, tol, backend)
        coarse, level = fine, level / 10
    raise TransportError(f"error estimate {err:.3e} above tolerance {tol:.1e} after refinement")


def tolerance_sweep(conn, path: PathSpec, tols, reference_tol: float = 1e-13, backend: str | None = None) -> list:
    """(err_estimate, max-entry error against a tight reference) at each tolerance."""
    ref = parallel_transport(conn, path, reference_tol, backend=backend).matrix
    out = []
    for t in tols:
        res = parallel_transport(conn, path, t, backend=backend)
        out.append((res.err_estimate, float(np.abs(res.matrix - ref).max())))
    return out
