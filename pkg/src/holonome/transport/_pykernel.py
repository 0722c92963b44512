"""NumPy implementation of the segment integrator, used when the compiled
kernel is unavailable. Same tableau, step control and return convention."""
from __future__ import annotations

import numpy as np

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_NONFINITE = 2
STATUS_MAXSTEPS = 3

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _generator(coef, theta0, omega, t, R):
    ang = theta0 + omega * t
    c, s = np.cos(ang), np.sin(ang)
    phi = coef[:, 0] + coef[:, 1] * t + coef[:, 2] * c + coef[:, 3] * s
    if np.any(phi == 0):
        return None
    dphi = coef[:, 1] - coef[:, 2] * omega * s + coef[:, 3] * omega * c
    return np.tensordot(dphi / phi, R, axes=1)


def integrate_segment(coef, theta0, omega, R, Y0, tol, fixed_steps=0, h_init=0.01, max_steps=2_000_000):
    """Return (Y(1), accepted, rejected, status) for Y' = A(t) Y on [0, 1]."""
    coef = np.asarray(coef, dtype=complex)
    R = np.asarray(R, dtype=complex)
    Y = np.array(Y0, dtype=complex)
    fixed = fixed_steps > 0
    h = 1.0 / fixed_steps if fixed else h_init
    t = 0.0
    accepted = rejected = 0
    k1 = None
    while (fixed and accepted < fixed_steps) or (not fixed and 1.0 - t > 1e-13):
        if accepted + rejected >= max_steps:
            return Y, accepted, rejected, STATUS_MAXSTEPS
        if not fixed:
            h = min(h, 1.0 - t)
            if h < 1e-14:
                return Y, accepted, rejected, STATUS_UNDERFLOW
        if k1 is None:
            A = _generator(coef, theta0, omega, t, R)
            if A is None:
                return Y, accepted, rejected, STATUS_NONFINITE
            k1 = A @ Y
        ks = [k1]
        for stage in range(1, 6):
            Ys = Y + h * sum(a * k for a, k in zip(_A[stage], ks) if a)
            A = _generator(coef, theta0, omega, t + _C[stage] * h, R)
            if A is None:
                return Y, accepted, rejected, STATUS_NONFINITE
            ks.append(A @ Ys)
        Ynew = Y + h * sum(b * k for b, k in zip(_B, ks) if b)
        ks.append(A @ Ynew)
        delta = sum(e * k for e, k in zip(_E, ks) if e)
        if not np.all(np.isfinite(Ynew)):
            return Y, accepted, rejected, STATUS_NONFINITE
        ymax = max(1.0, float((np.abs(Ynew.real) + np.abs(Ynew.imag)).max()))
        err = float((np.abs(delta.real) + np.abs(delta.imag)).max()) / (tol * ymax)
        if fixed or err <= 1.0:
            accepted += 1
            t = accepted * h if fixed else t + h
            Y = Ynew
            k1 = ks[6]
            if fixed:
                continue
        else:
            rejected += 1
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err**-0.25))
        h *= fac
    return Y, accepted, rejected, STATUS_OK
