"""Logarithmic flat connections on hyperplane complements.

A connection is ``d - sum_i (d phi_i / phi_i) * (h * w_i * r_i)`` where the
``phi_i`` are linear forms, ``r_i`` are exact-rational residue matrices and
``w_i`` optional per-hyperplane weights (used by Coxeter-KZ connections).

Base coordinates
----------------
* KZ connections live on C^n with forms ``z_i - z_j``.
* Casimir and Coxeter-KZ connections live on the Cartan subalgebra, written
  in the coordinates ``x -> (alpha_1(x), ..., alpha_r(x))``. In these
  coordinates the form of a positive root is its vector of simple-root
  coefficients.
"""
from __future__ import annotations

import itertools
import numbers
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import exact as ex
from . import liecore as lc

NUMERIC_TOL = 1e-12


# ---------------------------------------------------------------------------
# Arrangements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arrangement:
    base_dim: int
    forms: tuple  # tuple of tuples of Fraction

    def __post_init__(self):
        forms = tuple(tuple(Fraction(c) for c in f) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        for f in forms:
            if len(f) != self.base_dim:
                raise ValueError("form length does not match base dimension")
            if all(c == 0 for c in f):
                raise ValueError("zero form in arrangement")
        for a, b in itertools.combinations(range(len(forms)), 2):
            if ex.rank(ex.qarray([forms[a], forms[b]])) < 2:
                raise ValueError(f"forms {a} and {b} define the same hyperplane")

    def matrix(self) -> np.ndarray:
        """Forms as rows of a complex matrix."""
        return np.array([[complex(c) for c in f] for f in self.forms], dtype=complex).reshape(
            len(self.forms), self.base_dim
        )

    def evaluate(self, x) -> np.ndarray:
        return self.matrix() @ np.asarray(x, dtype=complex)


def kz_arrangement(n: int) -> tuple[Arrangement, list[tuple[int, int]]]:
    """Forms z_i - z_j (i < j, 1-based labels)."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    forms = []
    for i, j in pairs:
        f = [0] * n
        f[i - 1], f[j - 1] = 1, -1
        forms.append(f)
    return Arrangement(n, tuple(map(tuple, forms))), pairs


def root_arrangement(rs: lc.RootSystem) -> Arrangement:
    return Arrangement(rs.rank, tuple(tuple(a) for a in rs.positive_roots))


def coplanar_families(arr: Arrangement) -> list[tuple[int, ...]]:
    """Maximal index sets whose forms span a 2-dimensional space.

    Every unordered pair of forms lies in exactly one family.
    """
    forms = [list(f) for f in arr.forms]
    seen = set()
    families = []
    for a, b in itertools.combinations(range(len(forms)), 2):
        if (a, b) in seen:
            continue
        span = ex.qarray([forms[a], forms[b]]).T
        fam = tuple(
            c for c in range(len(forms)) if c in (a, b) or ex.in_span(span, ex.qarray([forms[c]]).T)
        )
        for pair in itertools.combinations(fam, 2):
            seen.add(pair)
        families.append(fam)
    return sorted(families, key=lambda f: (-len(f), f))


# ---------------------------------------------------------------------------
# Connections
# ---------------------------------------------------------------------------

def _exact_scalar(w):
    """Fraction for rational-valued input, otherwise None."""
    if isinstance(w, (Fraction, numbers.Integral)):
        return Fraction(w)
    if isinstance(w, numbers.Real):
        return Fraction(repr(float(w)))
    if isinstance(w, numbers.Complex) and complex(w).imag == 0:
        return Fraction(repr(complex(w).real))
    return None


@dataclass(frozen=True)
class FlatConnection:
    """``d - sum_i dlog(phi_i) * h * w_i * r_i``.

    ``residues`` are exact-rational object arrays, or complex arrays for
    connections entered numerically. ``labels`` names each hyperplane (a pair
    (i, j) for KZ, a positive root for Casimir / Coxeter-KZ).
    """

    arrangement: Arrangement
    residues: tuple
    h: complex = 1.0
    weights: tuple | None = None
    labels: tuple | None = None
    kind: str = "custom"
    verified_flat: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.residues) != len(self.arrangement.forms):
            raise ValueError(
                f"{len(self.residues)} residues for {len(self.arrangement.forms)} hyperplanes"
            )
        dims = {r.shape for r in self.residues}
        if len(dims) > 1 or any(s[0] != s[1] for s in dims):
            raise ValueError("residues must be square matrices of a common size")
        if self.weights is not None and len(self.weights) != len(self.residues):
            raise ValueError("one weight per residue required")

    @property
    def fiber_dim(self) -> int:
        return self.residues[0].shape[0] if self.residues else 0

    @property
    def is_exact(self) -> bool:
        return all(r.dtype == object for r in self.residues)

    def weight(self, k: int):
        return 1 if self.weights is None else self.weights[k]

    def exact_weighted(self) -> list[np.ndarray] | None:
        """w_i * r_i in exact arithmetic, or None when a weight is not rational."""
        if not self.is_exact:
            return None
        out = []
        for k, r in enumerate(self.residues):
            w = _exact_scalar(self.weight(k))
            if w is None:
                return None
            out.append(r * w)
        return out

    def numeric_residues(self) -> np.ndarray:
        """Stack of complex matrices h * w_i * r_i, shape (m, d, d)."""
        h = complex(self.h)
        mats = []
        for k, r in enumerate(self.residues):
            m = ex.to_complex(r) if r.dtype == object else np.asarray(r, dtype=complex)
            mats.append(h * complex(self.weight(k)) * m)
        d = self.fiber_dim
        return np.array(mats, dtype=complex).reshape(len(mats), d, d)

    def with_h(self, h) -> "FlatConnection":
        return replace(self, h=h)

    def residue_index(self, label) -> int:
        return list(self.labels).index(label)

    def restrict(self, indices) -> "FlatConnection":
        """Restriction to the coordinate subspace spanned by ``indices``."""
        idx = list(indices)
        res = tuple(r[np.ix_(idx, idx)] for r in self.residues)
        return replace(self, residues=res, meta={**self.meta, "block": idx})


@dataclass(frozen=True)
class FlatnessReport:
    passed: bool
    mode: str
    max_norm: float
    families_checked: int
    offending: tuple | None = None  # (family, index) of the first failure
    offending_norm: float = 0.0

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "mode": self.mode,
            "max_norm": self.max_norm,
            "families_checked": self.families_checked,
            "offending": None if self.offending is None else [list(self.offending[0]), self.offending[1]],
            "offending_norm": self.offending_norm,
        }


def kohno_flatness_check(conn: FlatConnection, mode: str = "auto", tol: float = NUMERIC_TOL) -> FlatnessReport:
    """[r_j, sum_{j' in J} r_j'] = 0 for each coplanar family J and j in J.

    ``mode="exact"`` requires rational residues and weights and tests exact
    vanishing; ``mode="numeric"`` uses the max-entry norm against ``tol``.
    """
    families = coplanar_families(conn.arrangement)
    weighted = conn.exact_weighted() if mode in ("auto", "exact") else None
    if mode == "exact" and weighted is None:
        raise ValueError("exact flatness check needs rational residues and weights")
    if weighted is not None:
        mode = "exact"
        mats = weighted
        zero = lambda m: ex.is_zero(m)  # noqa: E731
        norm = lambda m: float(ex.max_abs(m))  # noqa: E731
        bracket = ex.comm
    else:
        mode = "numeric"
        mats = list(conn.numeric_residues())
        zero = lambda m: float(np.abs(m).max(initial=0.0)) <= tol  # noqa: E731
        norm = lambda m: float(np.abs(m).max(initial=0.0))  # noqa: E731
        bracket = lambda a, b: a @ b - b @ a  # noqa: E731
    worst = 0.0
    first = None
    first_norm = 0.0
    for fam in families:
        total = mats[fam[0]]
        for k in fam[1:]:
            total = total + mats[k]
        for j in fam:
            c = bracket(mats[j], total)
            if not zero(c):
                v = norm(c)
                worst = max(worst, v)
                if first is None:
                    first, first_norm = (fam, j), v
    return FlatnessReport(first is None, mode, worst, len(families), first, first_norm)


def holonomy_relations(arr: Arrangement) -> list[tuple[int, tuple[int, ...]]]:
    """Generators (j, J) of the relations [t_j, sum_{J} t_j'] of the holonomy Lie algebra."""
    return [(j, fam) for fam in coplanar_families(arr) for j in fam]


def evaluate_holonomy_relations(conn: FlatConnection) -> list[np.ndarray]:
    """Images of the holonomy relations under t_j -> w_j r_j (exact when possible)."""
    mats = conn.exact_weighted()
    if mats is None:
        mats = list(conn.numeric_residues())
        bracket = lambda a, b: a @ b - b @ a  # noqa: E731
    else:
        bracket = ex.comm
    out = []
    for j, fam in holonomy_relations(conn.arrangement):
        total = mats[fam[0]]
        for k in fam[1:]:
            total = total + mats[k]
        out.append(bracket(mats[j], total))
    return out


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _require_flat(conn: FlatConnection) -> FlatConnection:
    report = kohno_flatness_check(conn, mode="exact")
    if not report.passed:
        raise ArithmeticError(f"constructed connection is not flat: {report}")
    return replace(conn, verified_flat=True)


def build_kz(rep: lc.Representation, n: int, h=1.0, cap: int = lc.DEFAULT_DIM_CAP,
             verify: bool = True) -> FlatConnection:
    """KZ connection on C^n with residues h * Omega_ij on V^{tensor n}."""
    if n < 2:
        raise ValueError("KZ connection needs n >= 2")
    lc._check_cap(rep.dim**n, cap)
    arr, pairs = kz_arrangement(n)
    omega = lc.omega_two(rep)
    residues = tuple(lc._embed_pair(omega, rep.dim, n, i - 1, j - 1) for i, j in pairs)
    conn = FlatConnection(arr, residues, h, None, tuple(pairs), "kz",
                          meta={"algebra": rep.root_system.name, "rep": rep.kind, "n": n,
                                "gl": rep.center is not None})
    return _require_flat(conn) if verify else conn


def build_casimir(rep: lc.Representation, h=1.0, block=None, verify: bool = True) -> FlatConnection:
    """Casimir connection on the Cartan with residues h * C_alpha.

    ``block`` restricts to a sum of weight spaces: pass a weight, a list of
    weights or ``"zero"`` for V[0].
    """
    rs = rep.root_system
    residues = tuple(lc.casimir_op(rep, a) for a in rs.positive_roots)
    conn = FlatConnection(root_arrangement(rs), residues, h, None, tuple(rs.positive_roots), "casimir",
                          meta={"algebra": rs.name, "rep": rep.kind})
    if block is not None:
        conn = conn.restrict(weight_block_indices(rep, block))
    return _require_flat(conn) if verify else conn


def weight_block_indices(rep: lc.Representation, block) -> list[int]:
    if isinstance(block, str):
        if block != "zero":
            raise ValueError(f"unknown block {block!r}")
        block = [rep.zero_weight]
    elif block and isinstance(block[0], numbers.Integral):
        block = [tuple(block)]
    idx = sorted(k for mu in block for k in rep.weight_space(tuple(mu)))
    if not idx:
        raise ValueError("requested weight block is empty")
    return idx


def weyl_orbit(rs: lc.RootSystem, mu) -> list[tuple[int, ...]]:
    orbit = {tuple(mu)}
    frontier = [tuple(mu)]
    while frontier:
        nu = frontier.pop()
        for i in range(rs.rank):
            img = rs.reflect_weight(i, nu)
            if img not in orbit:
                orbit.add(img)
                frontier.append(img)
    return sorted(orbit)


def validate_weights(rs: lc.RootSystem, weights: dict) -> None:
    for orbit in rs.root_orbits():
        vals = {complex(weights[a]) for a in orbit}
        if len(vals) > 1:
            raise ValueError(f"weights are not W-invariant on the orbit {sorted(orbit)}")


def build_ckz(rs: lc.RootSystem, reflections, weights, verify: bool = True) -> FlatConnection:
    """Coxeter-KZ connection with residues k_alpha * s_alpha.

    ``reflections`` maps each positive root to its (exact) reflection matrix,
    or is a list in the order of ``rs.positive_roots``. ``weights`` is a
    scalar, a dict keyed by positive roots, or a list in root order.
    """
    roots = rs.positive_roots
    if not isinstance(reflections, dict):
        reflections = dict(zip(roots, reflections))
    if isinstance(weights, dict):
        wmap = {tuple(a): w for a, w in weights.items()}
    elif isinstance(weights, (list, tuple)):
        wmap = dict(zip(roots, weights))
    else:
        wmap = {a: weights for a in roots}
    missing = [a for a in roots if a not in wmap or a not in reflections]
    if missing:
        raise ValueError(f"missing data for roots {missing}")
    validate_weights(rs, wmap)
    conn = FlatConnection(
        root_arrangement(rs),
        tuple(reflections[a] for a in roots),
        1.0,
        tuple(wmap[a] for a in roots),
        tuple(roots),
        "ckz",
        meta={"algebra": rs.name},
    )
    if not verify:
        return conn
    report = kohno_flatness_check(conn)
    if not report.passed:
        raise ArithmeticError(f"Coxeter-KZ connection is not flat: {report}")
    return replace(conn, verified_flat=True)


def reflection_rep(rs: lc.RootSystem) -> dict:
    """Reflections s_alpha on h* in the basis of simple roots."""
    out = {}
    for alpha in rs.positive_roots:
        m = ex.zeros(rs.rank)
        for j in range(rs.rank):
            aj = rs.simple_root(j)
            c = rs.pairing(aj, alpha)
            for k in range(rs.rank):
                m[k, j] = Fraction(aj[k]) - c * alpha[k]
        out[alpha] = m
    return out


def permutation_reflections(d: int, n: int) -> dict:
    """S_n = W(A_{n-1}) acting on (C^d)^{tensor n}: eps_i - eps_j -> (i j)."""
    rs = lc.build_root_system("A", n - 1)
    out = {}
    for alpha, beta in zip(rs.positive_roots, rs.positive_ambient):
        i = next(k for k, c in enumerate(beta) if c == 1)
        j = next(k for k, c in enumerate(beta) if c == -1)
        out[alpha] = lc.transposition_operator(d, n, i + 1, j + 1)
    return out


def root_to_pair(rs: lc.RootSystem, alpha) -> tuple[int, int]:
    """Type A positive root -> (i, j) with alpha = eps_i - eps_j (1-based)."""
    beta = rs.positive_ambient[rs.positive_roots.index(tuple(alpha))]
    i = next(k for k, c in enumerate(beta) if c == 1)
    j = next(k for k, c in enumerate(beta) if c == -1)
    return i + 1, j + 1


def zero_weight_reflections(rep: lc.Representation, basis: np.ndarray | None = None) -> dict:
    """Tits lifts of every positive root restricted to V[0] (or to ``basis``).

    Coordinates are taken in the given basis, which must be invariant.
    """
    if basis is None:
        idx = rep.weight_space(rep.zero_weight)
        basis = ex.zeros(rep.dim, len(idx))
        for c, k in enumerate(idx):
            basis[k, c] = Fraction(1)
    solver = ex.CoordinateSolver(basis)
    out = {}
    for alpha in rep.root_system.positive_roots:
        image = ex.mul(lc.reflection_lift(rep, alpha), basis)
        m = ex.zeros(basis.shape[1])
        for c in range(basis.shape[1]):
            m[:, c] = solver(image[:, c].tolist())
        out[alpha] = m
    return out


# ---------------------------------------------------------------------------
# Zero weight identities
# ---------------------------------------------------------------------------

def v0_subspace(rep: lc.Representation) -> np.ndarray:
    """Basis (columns) of {v in V[0] : e_alpha^2 v = 0 for all alpha > 0}."""
    idx = rep.weight_space(rep.zero_weight)
    if not idx:
        return ex.zeros(rep.dim, 0)
    blocks = []
    for alpha in rep.root_system.positive_roots:
        e = rep.root_e[alpha]
        blocks.append(ex.mul(e, e)[:, idx])
    kernel = ex.nullspace(np.vstack(blocks))
    out = ex.zeros(rep.dim, kernel.shape[1])
    out[idx, :] = kernel
    return out


@dataclass(frozen=True)
class V0Report:
    passed: bool
    v0_dim: int
    zero_weight_dim: int
    roots_checked: int
    w_invariant: bool
    first_failure: tuple | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "v0_dim": self.v0_dim,
            "zero_weight_dim": self.zero_weight_dim,
            "roots_checked": self.roots_checked,
            "w_invariant": self.w_invariant,
            "first_failure": None if self.first_failure is None else list(self.first_failure),
        }


def check_v0_identity(rep: lc.Representation) -> V0Report:
    """C_alpha = <alpha, alpha>(1 - s_alpha) on V[[0]], exactly, for every alpha > 0."""
    rs = rep.root_system
    basis = v0_subspace(rep)
    k = basis.shape[1]
    if k == 0:
        raise ValueError("V[[0]] is zero for this representation")
    first = None
    for alpha in rs.positive_roots:
        lhs = ex.mul(lc.casimir_op(rep, alpha), basis)
        s = ex.mul(lc.reflection_lift(rep, alpha), basis)
        rhs = (basis - s) * rs.norm2(alpha)
        if not ex.is_zero(lhs - rhs):
            first = tuple(alpha)
            break
    lifts = lc.tits_lift(rep).matrices
    invariant = all(ex.in_span(basis, ex.mul(s, basis)) for s in lifts)
    return V0Report(
        first is None and invariant,
        k,
        len(rep.weight_space(rep.zero_weight)),
        len(rs.positive_roots),
        invariant,
        first,
    )


# ---------------------------------------------------------------------------
# Commutant, residue comparisons
# ---------------------------------------------------------------------------

def commutant_dim(conn: FlatConnection) -> int:
    """Dimension of {X : [X, h w_i r_i] = 0 for all i}."""
    d = conn.fiber_dim
    if conn.h == 0:
        return d * d
    mats = conn.exact_weighted()
    if mats is None:
        rows = []
        eye = np.eye(d)
        for r in conn.numeric_residues():
            rows.append(np.kron(eye, r.T) - np.kron(r, eye))
        if not rows:
            return d * d
        s = np.linalg.svd(np.vstack(rows), compute_uv=False)
        return d * d - int((s > 1e-9 * max(1.0, s.max(initial=0.0))).sum())
    eye = ex.eye(d)
    rows = [ex.kron(eye, r.T) - ex.kron(r, eye) for r in mats if not ex.is_zero(r)]
    if not rows:
        return d * d
    return d * d - ex.rank(np.vstack(rows))


@dataclass(frozen=True)
class ScalarShiftReport:
    passed: bool
    scalars: tuple
    off_scalar: tuple

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "scalars": [ex.fraction_str(s) if isinstance(s, Fraction) else [s.real, s.imag] for s in self.scalars],
            "off_scalar": [float(x) for x in self.off_scalar],
        }


def scalar_shift(a: np.ndarray, b: np.ndarray):
    """Write a - b = c * Id + D with c = tr(a - b)/dim; return (c, D)."""
    diff = a - b
    d = diff.shape[0]
    c = sum(diff[i, i] for i in range(d)) / d
    if diff.dtype == object:
        return c, diff - ex.eye(d) * c
    return c, diff - c * np.eye(d)


def compare_residues_mod_scalars(conn_a: FlatConnection, conn_b: FlatConnection) -> ScalarShiftReport:
    """Compare two connections on the same arrangement residue by residue, modulo scalars."""
    if conn_a.arrangement.forms != conn_b.arrangement.forms:
        raise ValueError("connections live on different arrangements")
    ea, eb = conn_a.exact_weighted(), conn_b.exact_weighted()
    exact_h = _exact_scalar(conn_a.h) is not None and _exact_scalar(conn_b.h) is not None
    if ea is not None and eb is not None and exact_h:
        ha, hb = _exact_scalar(conn_a.h), _exact_scalar(conn_b.h)
        pairs = [(x * ha, y * hb) for x, y in zip(ea, eb)]
        shifts = [scalar_shift(x, y) for x, y in pairs]
        off = tuple(ex.max_abs(dm) for _, dm in shifts)
        return ScalarShiftReport(all(o == 0 for o in off), tuple(c for c, _ in shifts), off)
    ra, rb = conn_a.numeric_residues(), conn_b.numeric_residues()
    shifts = [scalar_shift(x, y) for x, y in zip(ra, rb)]
    off = tuple(float(np.abs(dm).max(initial=0.0)) for _, dm in shifts)
    return ScalarShiftReport(all(o <= NUMERIC_TOL for o in off), tuple(complex(c) for c, _ in shifts), off)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def connection_to_json(conn: FlatConnection) -> dict:
    h = complex(conn.h)
    res = []
    for k, r in enumerate(conn.residues):
        w = conn.weight(k)
        if r.dtype == object and _exact_scalar(w) is not None:
            res.append(ex.to_json(r * _exact_scalar(w)))
        else:
            m = complex(w) * (ex.to_complex(r) if r.dtype == object else np.asarray(r))
            res.append([[[z.real, z.imag] for z in row] for row in m.tolist()])
    return {
        "base_dim": conn.arrangement.base_dim,
        "forms": [[ex.fraction_str(c) for c in f] for f in conn.arrangement.forms],
        "residues": res,
        "h": [h.real, h.imag],
    }


def connection_from_json(data: dict) -> FlatConnection:
    arr = Arrangement(int(data["base_dim"]), tuple(tuple(Fraction(c) for c in f) for f in data["forms"]))
    residues = []
    for r in data["residues"]:
        if r and r[0] and isinstance(r[0][0], list):
            residues.append(np.array([[complex(a, b) for a, b in row] for row in r], dtype=complex))
        else:
            residues.append(ex.from_json(r))
    re, im = data.get("h", [1.0, 0.0])
    return FlatConnection(arr, tuple(residues), complex(re, im))
