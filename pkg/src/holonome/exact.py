"""Exact rational matrices.

Matrices are numpy ``object`` arrays whose entries are :class:`fractions.Fraction`.
Products go through a scaled-integer path (common denominators, then an
``int64`` or Python-int matmul) because Fraction-by-Fraction products are the
dominant cost of every exact identity check in the package.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

_INT64_SAFE = 2**62

_to_fraction = np.frompyfunc(Fraction, 1, 1)
_numerator = np.frompyfunc(lambda x: x.numerator, 1, 1)
_denominator = np.frompyfunc(lambda x: x.denominator, 1, 1)


def qarray(rows) -> np.ndarray:
    """Coerce nested sequences / arrays of ints, Fractions or "p/q" strings."""
    arr = np.array(rows, dtype=object)
    if arr.size == 0:
        return arr
    return _to_fraction(arr).astype(object)


def zeros(n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    out = np.empty((n, m), dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def elementary(n: int, i: int, j: int) -> np.ndarray:
    out = zeros(n)
    out[i, j] = Fraction(1)
    return out


def _scaled(a: np.ndarray) -> tuple[np.ndarray, int]:
    """Return (integer matrix, denominator) with a == ints / den."""
    if a.size == 0:
        return a.astype(object), 1
    dens = _denominator(a).ravel().tolist()
    den = reduce(lcm, dens, 1)
    ints = _numerator(a * den).astype(object)
    return ints, den


def _as_int64(ints: np.ndarray) -> tuple[np.ndarray | None, int]:
    flat = ints.ravel().tolist()
    bound = max((abs(x) for x in flat), default=0)
    if bound >= _INT64_SAFE:
        return None, bound
    return ints.astype(np.int64), bound


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact matrix product."""
    ia, da = _scaled(a)
    ib, db = _scaled(b)
    a64, ba = _as_int64(ia)
    b64, bb = _as_int64(ib)
    inner = a.shape[-1] if a.ndim else 1
    if a64 is not None and b64 is not None and ba * bb * max(inner, 1) < _INT64_SAFE:
        prod = (a64 @ b64).astype(object)
    else:
        prod = ia.dot(ib)
    den = da * db
    return _to_fraction(prod).astype(object) / den if den != 1 else _to_fraction(prod).astype(object)


def mul_chain(*mats: np.ndarray) -> np.ndarray:
    return reduce(mul, mats)


def comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return mul(a, b) - mul(b, a)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ia, da = _scaled(a)
    ib, db = _scaled(b)
    out = np.kron(ia, ib)
    return qarray(out) / (da * db) if da * db != 1 else qarray(out)


def is_zero(a: np.ndarray) -> bool:
    return all(x == 0 for x in a.ravel().tolist())


def max_abs(a: np.ndarray) -> Fraction:
    return max((abs(x) for x in a.ravel().tolist()), default=Fraction(0))


def is_diagonal(a: np.ndarray) -> bool:
    n = a.shape[0]
    return all(a[i, j] == 0 for i in range(n) for j in range(n) if i != j)


def to_complex(a: np.ndarray) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in a], dtype=complex).reshape(a.shape)


def power(a: np.ndarray, k: int) -> np.ndarray:
    out = eye(a.shape[0])
    for _ in range(k):
        out = mul(out, a)
    return out


def nilpotent_exp(x: np.ndarray) -> np.ndarray:
    """exp(x) for nilpotent x, summed until the powers vanish."""
    n = x.shape[0]
    out = eye(n)
    term = eye(n)
    for k in range(1, n + 1):
        term = mul(term, x) / k
        if is_zero(term):
            return out
        out = out + term
    if not is_zero(mul(term, x)):
        raise ValueError("matrix is not nilpotent")
    return out


# -- row reduction ---------------------------------------------------------

def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Q; returns (R, pivot columns)."""
    m = [list(row) for row in a.tolist()]
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / Fraction(m[r][c])
        m[r] = [x * inv for x in m[r]]
        pivot_row = m[r]
        nz = [k for k in range(c, n_cols) if pivot_row[k] != 0]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = m[i]
                for k in nz:
                    row[k] -= f * pivot_row[k]
        pivots.append(c)
        r += 1
    out = np.empty((n_rows, n_cols), dtype=object)
    for i in range(n_rows):
        for j in range(n_cols):
            out[i, j] = Fraction(m[i][j])
    return out, pivots


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of {x : a x = 0} as the columns of the returned matrix."""
    n_cols = a.shape[1]
    if a.shape[0] == 0:
        return eye(n_cols)
    r, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = zeros(n_cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = Fraction(1)
        for i, p in enumerate(pivots):
            basis[p, k] = -r[i, f]
    return basis


def column_space(a: np.ndarray) -> np.ndarray:
    """Independent columns of ``a`` spanning its image."""
    if a.shape[1] == 0:
        return a
    _, pivots = rref(a)
    return a[:, pivots]


def in_span(basis: np.ndarray, vecs: np.ndarray) -> bool:
    """True when every column of ``vecs`` lies in the column span of ``basis``."""
    if vecs.shape[1] == 0:
        return True
    if basis.shape[1] == 0:
        return is_zero(vecs)
    return rank(np.hstack([basis, vecs])) == rank(basis)


class CoordinateSolver:
    """Coordinates of vectors in a fixed (independent) column basis."""

    def __init__(self, basis: np.ndarray):
        self.basis = basis
        rows, pivots = rref(basis.T.copy())
        if len(pivots) != basis.shape[1]:
            raise ValueError("basis columns are linearly dependent")
        self._rows = pivots
        square = basis[pivots, :]
        self._inv = inverse(square)

    def __call__(self, v: Sequence) -> np.ndarray:
        v = np.asarray(v, dtype=object).reshape(-1, 1)
        coords = mul(self._inv, v[self._rows, :])
        if not is_zero(mul(self.basis, coords) - v):
            raise ValueError("vector is not in the span of the basis")
        return coords[:, 0]


def inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    r, pivots = rref(np.hstack([a, eye(n)]))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


def common_denominator(values: Iterable[Fraction]) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def content_gcd(values: Iterable[int]) -> int:
    return reduce(gcd, values, 0)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def to_json(a: np.ndarray) -> list[list[str]]:
    return [[fraction_str(x) for x in row] for row in a.tolist()]


def from_json(rows: list[list[str]]) -> np.ndarray:
    return qarray(rows)
