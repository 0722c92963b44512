"""Piecewise smooth paths in complexified base spaces.

Each segment is ``x(t) = P + L t + U cos(theta0 + omega t) + V sin(theta0 + omega t)``
for ``t`` in [0, 1]; straight lines have ``U = V = 0`` and half-ellipses have
``L = 0``. Derivatives are available in closed form, which the integrator
needs for ``d log phi(x(t))``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..connections import Arrangement

SAMPLES_PER_SEGMENT = 1024
MAX_SHRINK_ATTEMPTS = 8


class ClearanceError(ValueError):
    """A path touches, or comes too close to, a hyperplane."""


@dataclass(frozen=True)
class Segment:
    P: np.ndarray
    L: np.ndarray
    U: np.ndarray
    V: np.ndarray
    theta0: float = 0.0
    omega: float = 0.0

    @classmethod
    def line(cls, a, b) -> "Segment":
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        z = np.zeros_like(a)
        return cls(a, b - a, z, z)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        ang = self.theta0 + self.omega * t
        return (
            self.P[None, :]
            + np.multiply.outer(t, self.L)
            + np.multiply.outer(np.cos(ang), self.U)
            + np.multiply.outer(np.sin(ang), self.V)
        ).reshape(t.shape + self.P.shape)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        ang = self.theta0 + self.omega * t
        return (
            self.L[None, :]
            - self.omega * np.multiply.outer(np.sin(ang), self.U)
            + self.omega * np.multiply.outer(np.cos(ang), self.V)
        ).reshape(t.shape + self.P.shape)

    def reversed(self) -> "Segment":
        return Segment(self.P + self.L, -self.L, self.U, self.V, self.theta0 + self.omega, -self.omega)

    def as_params(self) -> np.ndarray:
        """(4, N) complex array [P, L, U, V] for the compiled kernel."""
        return np.array([self.P, self.L, self.U, self.V], dtype=complex)

    def is_constant(self) -> bool:
        return not (np.any(self.L) or (self.omega and (np.any(self.U) or np.any(self.V))))


def _min_modulus(seg: Segment, forms: np.ndarray) -> float:
    """Minimum over t in [0, 1] and forms of |phi(x(t))|, by sampling then refinement."""
    ts = np.linspace(0.0, 1.0, SAMPLES_PER_SEGMENT + 1)
    vals = np.abs(seg.point(ts) @ forms.T)  # (T, m)
    best = float(vals.min())
    step = ts[1] - ts[0]
    for k in range(forms.shape[0]):
        i = int(vals[:, k].argmin())
        lo, hi = max(0.0, ts[i] - step), min(1.0, ts[i] + step)
        if hi <= lo:
            continue
        phi = forms[k]
        res = minimize_scalar(
            lambda t: float(abs(seg.point(np.array([t]))[0] @ phi)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = min(best, float(res.fun))
    return best


@dataclass(frozen=True)
class PathSpec:
    segments: tuple
    forms: np.ndarray  # complex (m, N), rows are the hyperplane forms
    wall_clearance: float

    @classmethod
    def build(cls, segments, forms) -> "PathSpec":
        segments = tuple(segments)
        forms = forms.matrix() if isinstance(forms, Arrangement) else np.asarray(forms, dtype=complex)
        for a, b in zip(segments, segments[1:]):
            if not np.allclose(a.point(1.0), b.point(0.0), atol=1e-12, rtol=0):
                raise ValueError("consecutive segments do not share endpoints")
        clearance = min(_min_modulus(s, forms) for s in segments)
        if clearance <= 0:
            raise ClearanceError("path meets a hyperplane")
        return cls(segments, forms, clearance)

    @property
    def start(self) -> np.ndarray:
        return self.segments[0].point(0.0)

    @property
    def end(self) -> np.ndarray:
        return self.segments[-1].point(1.0)

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(s.reversed() for s in reversed(self.segments)), self.forms, self.wall_clearance)

    def then(self, other: "PathSpec") -> "PathSpec":
        """Concatenation: first ``self``, then ``other``."""
        if not np.allclose(self.end, other.start, atol=1e-12, rtol=0):
            raise ValueError("paths are not concatenable")
        return PathSpec(self.segments + other.segments, self.forms, min(self.wall_clearance, other.wall_clearance))

    def is_closed(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.start, self.end, atol=atol, rtol=0))

    def winding(self, form_index: int, samples: int = 4096) -> float:
        """Change of arg phi(x(t)) along the path, in units of 2 pi."""
        phi = self.forms[form_index]
        total = 0.0
        for s in self.segments:
            vals = s.point(np.linspace(0, 1, samples + 1)) @ phi
            total += float(np.sum(np.angle(vals[1:] / vals[:-1])))
        return total / (2 * np.pi)


def _half_turn(p, centre_part, moving, eta: float) -> Segment:
    """Rotate the ``moving`` displacement by pi about ``p - moving`` (ellipse ratio eta)."""
    return Segment(np.asarray(centre_part, dtype=complex), np.zeros_like(p), moving, 1j * eta * moving, 0.0, np.pi)


def braid_path_config(n: int, i: int, basepoint=None, eta: float = 1.0, forms=None) -> PathSpec:
    """Half-twist exchanging z_i and z_{i+1} (1-based i).

    Both points turn counterclockwise about their midpoint along an ellipse
    with vertical semi-axis ``eta`` times the horizontal one, so z_i runs
    below z_{i+1} and arg(z_i - z_{i+1}) increases by pi.
    """
    if not 1 <= i <= n - 1:
        raise ValueError("need 1 <= i <= n - 1")
    if eta <= 0:
        raise ValueError("eta must be positive")
    z0 = np.arange(1, n + 1, dtype=complex) if basepoint is None else np.asarray(basepoint, dtype=complex)
    if z0.shape != (n,):
        raise ValueError("basepoint has the wrong length")
    a, b = i - 1, i
    m = (z0[a] + z0[b]) / 2
    centre = z0.copy()
    centre[a] = centre[b] = m
    moving = np.zeros(n, dtype=complex)
    moving[a], moving[b] = z0[a] - m, z0[b] - m
    if forms is None:
        from ..connections import kz_arrangement

        forms = kz_arrangement(n)[0]
    return PathSpec.build([_half_turn(z0, centre, moving, eta)], forms)


def cartan_coroot(rs, i: int) -> np.ndarray:
    """Coordinates (alpha_j(h_i))_j of the simple coroot h_i."""
    return np.array([rs.cartan_matrix[i][j] for j in range(rs.rank)], dtype=complex)


def default_cartan_basepoint(rs) -> np.ndarray:
    return np.ones(rs.rank, dtype=complex)


def check_chamber(x0) -> None:
    x0 = np.asarray(x0, dtype=complex)
    if np.any(np.abs(x0.imag) > 0) or np.any(x0.real <= 0):
        raise ValueError("basepoint must lie strictly inside the fundamental chamber")


def reflect_point(rs, i: int, x) -> np.ndarray:
    """s_i in simple-root coordinates: x_j -> x_j - a_ij x_i."""
    x = np.asarray(x, dtype=complex)
    return x - x[i] * cartan_coroot(rs, i)


def braid_path_cartan(rs, i: int, basepoint=None, eta: float = 1.0, min_clearance: float = 1e-3) -> PathSpec:
    """Path from x0 to s_i(x0) along which alpha_i(x(t)) = a (cos pi t + i eta sin pi t).

    The part of x fixed by s_i stays put. If the wall clearance is below
    ``min_clearance`` the arc height is halved and the path rebuilt, at most
    eight times.
    """
    from ..connections import root_arrangement

    if not 0 <= i < rs.rank:
        raise ValueError("simple root index out of range")
    x0 = default_cartan_basepoint(rs) if basepoint is None else np.asarray(basepoint, dtype=complex)
    check_chamber(x0)
    arr = root_arrangement(rs)
    a = x0[i]
    c = cartan_coroot(rs, i)
    moving = (a / 2) * c
    centre = x0 - moving
    height = eta
    for _ in range(MAX_SHRINK_ATTEMPTS):
        try:
            path = PathSpec.build([_half_turn(x0, centre, moving, height)], arr)
        except ClearanceError:
            path = None
        if path is not None and path.wall_clearance >= min_clearance:
            return path
        height /= 2
    raise ClearanceError(f"no admissible arc for s_{i + 1} after {MAX_SHRINK_ATTEMPTS} attempts")


def loop_path(centre, radius: float, forms, turns: int = 1) -> PathSpec:
    """Circle x(t) = centre + radius * e^{2 pi i turns t} e_1, starting at centre + radius e_1."""
    centre = np.asarray(centre, dtype=complex)
    u = np.zeros_like(centre)
    u[0] = radius
    seg = Segment(centre, np.zeros_like(centre), u, 1j * u, 0.0, 2 * np.pi * turns)
    return PathSpec.build([seg], forms)
