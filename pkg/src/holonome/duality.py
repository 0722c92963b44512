"""Polynomials on k x n matrices and the gl_k / gl_n duality at small scale.

Variables x_{aj} carry a row index a (acted on by gl_k) and a column index j
(acted on by gl_n). With E_ab = sum_j x_aj d/dx_bj and E'_ij = sum_a x_ai d/dx_aj
one has, for i != j and D_j the degree in column j,

    E'_ij E'_ji + E'_ji E'_ij = 2 Omega_ij + D_i + D_j,

where Omega_ij = sum_ab E^{(i)}_ab E^{(j)}_ba is the gl_k Casimir tensor acting
on columns i and j. Hence the sl_n Casimir C_{eps_i - eps_j} equals
2 Omega_ij plus a scalar on every column-degree block.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from . import exact as ex

Poly = dict  # exponent tuple (row-major k x n) -> Fraction


def partitions(n: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of n in decreasing order of parts."""
    max_part = n if max_part is None else max_part
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def conjugate(lam) -> tuple[int, ...]:
    lam = [p for p in lam if p > 0]
    return tuple(sum(1 for p in lam if p > c) for c in range(lam[0])) if lam else ()


def is_partition(lam) -> bool:
    return all(p >= 0 for p in lam) and all(a >= b for a, b in zip(lam, lam[1:]))


def hook_length_dim(lam) -> int:
    """Dimension of the S_n irrep U_lambda."""
    lam = [p for p in lam if p > 0]
    n = sum(lam)
    conj = conjugate(lam)
    hooks = 1
    for r, row in enumerate(lam):
        for c in range(row):
            hooks *= (row - c - 1) + (conj[c] - r - 1) + 1
    return factorial(n) // hooks


def gl_dim(lam, k: int) -> int:
    """Hook-content formula for the gl_k irrep of highest weight lambda."""
    lam = [p for p in lam if p > 0]
    if len(lam) > k:
        return 0
    conj = conjugate(lam)
    num = den = 1
    for r, row in enumerate(lam):
        for c in range(row):
            num *= k + c - r
            den *= (row - c - 1) + (conj[c] - r - 1) + 1
    return num // den


# ---------------------------------------------------------------------------
# Polynomial spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolySpace:
    """Polynomials on k x n matrices with column degrees mu, in the monomial basis."""

    k: int
    n: int
    mu: tuple

    def __post_init__(self):
        if len(self.mu) != self.n or any(m < 0 for m in self.mu):
            raise ValueError("mu must list n non-negative column degrees")

    @property
    def degree(self) -> int:
        return sum(self.mu)

    def monomials(self, row_weight=None) -> list[tuple[int, ...]]:
        """Exponent tuples (row-major); optionally with fixed row degrees."""
        cols = []
        for m in self.mu:
            cols.append([c for c in itertools.product(range(m + 1), repeat=self.k) if sum(c) == m])
        out = []
        for choice in itertools.product(*cols):
            expo = tuple(choice[j][a] for a in range(self.k) for j in range(self.n))
            if row_weight is not None:
                rows = tuple(sum(expo[a * self.n:(a + 1) * self.n]) for a in range(self.k))
                if rows != tuple(row_weight):
                    continue
            out.append(expo)
        return sorted(out, reverse=True)

    @property
    def dim(self) -> int:
        out = 1
        for m in self.mu:
            out *= comb(m + self.k - 1, self.k - 1)
        return out


def polarize(poly: Poly, k: int, n: int, a: int, i: int, b: int, j: int) -> Poly:
    """Apply x_{ai} d/dx_{bj} (0-based indices)."""
    src, dst = b * n + j, a * n + i
    out: Poly = {}
    for expo, c in poly.items():
        e = expo[src]
        if e == 0:
            continue
        new = list(expo)
        new[src] -= 1
        new[dst] += 1
        key = tuple(new)
        out[key] = out.get(key, Fraction(0)) + c * e
    return {m: c for m, c in out.items() if c != 0}


def _add(p: Poly, q: Poly, scale=1) -> Poly:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, Fraction(0)) + scale * c
    return {m: c for m, c in out.items() if c != 0}


def row_op(poly: Poly, k: int, n: int, a: int, b: int) -> Poly:
    """E_ab = sum_j x_aj d/dx_bj (gl_k)."""
    out: Poly = {}
    for j in range(n):
        out = _add(out, polarize(poly, k, n, a, j, b, j))
    return out


def col_op(poly: Poly, k: int, n: int, i: int, j: int) -> Poly:
    """E'_ij = sum_a x_ai d/dx_aj (gl_n)."""
    out: Poly = {}
    for a in range(k):
        out = _add(out, polarize(poly, k, n, a, i, a, j))
    return out


def omega_columns(poly: Poly, k: int, n: int, i: int, j: int) -> Poly:
    """gl_k Casimir tensor on columns i, j: sum_ab E^{(i)}_ab E^{(j)}_ba."""
    out: Poly = {}
    for a, b in itertools.product(range(k), repeat=2):
        out = _add(out, polarize(polarize(poly, k, n, b, j, a, j), k, n, a, i, b, i))
    return out


def casimir_columns(poly: Poly, k: int, n: int, i: int, j: int) -> Poly:
    """sl_n Casimir of eps_i - eps_j: e f + f e + h^2/2 with e = E'_ij, f = E'_ji."""
    ef = col_op(col_op(poly, k, n, j, i), k, n, i, j)
    fe = col_op(col_op(poly, k, n, i, j), k, n, j, i)
    out = _add(ef, fe)
    h2: Poly = {}
    for expo, c in poly.items():
        di = sum(expo[a * n + i] for a in range(k))
        dj = sum(expo[a * n + j] for a in range(k))
        h2[expo] = c * Fraction((di - dj) ** 2, 2)
    return _add(out, h2)


# ---------------------------------------------------------------------------
# Highest weight vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HWSpace:
    """gl_k highest weight vectors of weight lambda in PolySpace(k, n, mu)."""

    space: PolySpace
    lam: tuple
    monomials: tuple
    basis: np.ndarray  # columns in the coordinates of ``monomials``

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def vectors(self) -> list[Poly]:
        return [
            {m: self.basis[r, c] for r, m in enumerate(self.monomials) if self.basis[r, c] != 0}
            for c in range(self.dim)
        ]

    def coordinates(self, poly: Poly) -> np.ndarray:
        """Coordinates of a polynomial lying in the span of the basis."""
        index = {m: r for r, m in enumerate(self.monomials)}
        v = ex.zeros(len(self.monomials), 1)
        for m, c in poly.items():
            if m not in index:
                raise ValueError("polynomial leaves the weight space")
            v[index[m], 0] = c
        return ex.CoordinateSolver(self.basis)(v[:, 0].tolist())


def _pad(lam, k):
    lam = tuple(lam)
    if len(lam) > k:
        if any(lam[k:]):
            raise ValueError("lambda has more than k rows")
        return lam[:k]
    return lam + (0,) * (k - len(lam))


def hw_space(k: int, n: int, lam, mu, require_k_ge_n: bool = True) -> HWSpace:
    """Null space of the raising operators E_{a,a+1} on the weight-lambda part of PolySpace(k, n, mu)."""
    if require_k_ge_n and k < n:
        raise ValueError("need k >= n")
    lam = _pad(lam, k)
    if not is_partition(lam):
        raise ValueError("lambda must be a partition")
    if sum(lam) != sum(mu):
        raise ValueError("|lambda| must equal |mu|")
    space = PolySpace(k, n, tuple(mu))
    monos = space.monomials(lam)
    if not monos:
        return HWSpace(space, lam, (), ex.zeros(0, 0))
    index = {m: r for r, m in enumerate(monos)}
    blocks = []
    for a in range(k - 1):
        images = [row_op({m: Fraction(1)}, k, n, a, a + 1) for m in monos]
        targets = sorted({t for img in images for t in img}, reverse=True)
        if not targets:
            continue
        tindex = {t: r for r, t in enumerate(targets)}
        block = ex.zeros(len(targets), len(monos))
        for c, img in enumerate(images):
            for t, v in img.items():
                block[tindex[t], c] = v
        blocks.append(block)
    basis = ex.nullspace(np.vstack(blocks)) if blocks else ex.eye(len(monos))
    del index
    return HWSpace(space, lam, tuple(monos), basis)


# ---------------------------------------------------------------------------
# Residue coincidence
# ---------------------------------------------------------------------------

def distinct_permutations(mu) -> list[tuple[int, ...]]:
    return sorted(set(itertools.permutations(mu)), reverse=True)


def _operator_on_hw(hw: HWSpace, op) -> np.ndarray:
    vecs = hw.vectors()
    out = ex.zeros(hw.dim)
    for c, v in enumerate(vecs):
        out[:, c] = hw.coordinates(op(v))
    return out


@dataclass(frozen=True)
class ResidueMatchReport:
    passed: bool
    coupling: Fraction
    blocks: tuple  # (nu, dim)
    scalars: dict  # (nu, i, j) -> c_ij (against the sl_k Omega)
    off_scalar: dict  # (nu, i, j) -> max |off-scalar part|

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "coupling": ex.fraction_str(self.coupling),
            "blocks": [{"mu": list(nu), "dim": d} for nu, d in self.blocks],
            "scalars": {f"{list(nu)}:{i + 1}{j + 1}": ex.fraction_str(c) for (nu, i, j), c in self.scalars.items()},
            "off_scalar": {f"{list(nu)}:{i + 1}{j + 1}": ex.fraction_str(c) for (nu, i, j), c in self.off_scalar.items()},
        }


def residue_match_check(k: int, n: int, lam, mu, coupling=Fraction(2)) -> ResidueMatchReport:
    """Compare the sl_n Casimir residues with the sl_k KZ residues on M_lambda^nu.

    For every nu in the S_n-orbit of mu and every pair i < j, computes
    C_{eps_i - eps_j} - coupling * Omega^{sl_k}_ij on M_lambda^nu and splits
    it into a scalar c_ij and an off-scalar part, which must vanish exactly.
    """
    coupling = Fraction(coupling)
    blocks, scalars, off = [], {}, {}
    for nu in distinct_permutations(mu):
        hw = hw_space(k, n, lam, nu)
        blocks.append((nu, hw.dim))
        if hw.dim == 0:
            continue
        for i, j in itertools.combinations(range(n), 2):
            C = _operator_on_hw(hw, lambda p: casimir_columns(p, k, n, i, j))
            W = _operator_on_hw(hw, lambda p: omega_columns(p, k, n, i, j))
            W = W - ex.eye(hw.dim) * Fraction(nu[i] * nu[j], k)
            diff = C - W * coupling
            c = sum(diff[r, r] for r in range(hw.dim)) / hw.dim
            scalars[(nu, i, j)] = c
            off[(nu, i, j)] = ex.max_abs(diff - ex.eye(hw.dim) * c)
    passed = all(v == 0 for v in off.values())
    return ResidueMatchReport(passed, coupling, tuple(blocks), scalars, off)


def column_omega_matrix(k: int, n: int, i: int, j: int) -> np.ndarray:
    """Omega_ij on PolySpace(k, n, (1, ..., 1)) in the basis ordered like (C^k)^{tensor n}.

    Monomial x_{a_1 1} ... x_{a_n n} corresponds to e_{a_1} (x) ... (x) e_{a_n}.
    """
    words = list(itertools.product(range(k), repeat=n))

    def mono(word):
        expo = [0] * (k * n)
        for col, a in enumerate(word):
            expo[a * n + col] = 1
        return tuple(expo)

    index = {mono(w): r for r, w in enumerate(words)}
    out = ex.zeros(len(words))
    for c, w in enumerate(words):
        for m, v in omega_columns({mono(w): Fraction(1)}, k, n, i, j).items():
            out[index[m], c] += v
    return out


# ---------------------------------------------------------------------------
# Schur-Weyl and multiplicity-freeness
# ---------------------------------------------------------------------------

def schur_weyl_zero_weight(n: int, lam) -> tuple[int, int]:
    """(dim V_{lambda^t}[0] for sl_n, dim U_lambda)."""
    lam = tuple(p for p in lam if p > 0)
    if sum(lam) != n or not is_partition(lam):
        raise ValueError(f"{lam} is not a partition of {n}")
    lt = conjugate(lam)
    zero = hw_space(n, n, lt, (1,) * n).dim
    return zero, hook_length_dim(lam)


def multiplicity_free_check(k: int, n: int, d: int) -> tuple[int, int]:
    """(dim A^d, sum_lambda dim V_lambda^(k) dim V_lambda^(n)).

    dim A^d is counted from the monomial basis of all column-degree blocks.
    """
    total = 0
    for mu in itertools.product(range(d + 1), repeat=n):
        if sum(mu) == d:
            total += PolySpace(k, n, mu).dim
    rhs = sum(gl_dim(lam, k) * gl_dim(lam, n) for lam in partitions(d))
    return total, rhs
