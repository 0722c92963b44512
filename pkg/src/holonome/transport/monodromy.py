"""Braid group monodromy of flat connections and the relation checks on it."""
from __future__ import annotations

import cmath
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import linear_sum_assignment

from .. import exact as ex
from .. import liecore as lc
from .integrate import DEFAULT_TOL, parallel_transport
from .paths import braid_path_cartan, braid_path_config, default_cartan_basepoint

CONVENTIONS = {
    "orientation": "z_i and z_{i+1} turn counterclockwise about their midpoint; alpha_i(x) runs through the upper half plane",
    "composition": "rho(g) = symmetry . transport",
    "word_product": "image(g_1 g_2 ... g_k) = rho(g_1) rho(g_2) ... rho(g_k)",
}


# ---------------------------------------------------------------------------
# Equivariance data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Equivariance:
    """Finite symmetry composed with transport.

    ``kind`` is ``"permutation"`` (S_n on V^{tensor n}, paths in configuration
    space), ``"tits"`` (Tits lifts, Cartan paths) or ``"reflection"`` (a
    genuine W-action, Cartan paths).
    """

    kind: str
    matrices: tuple
    n: int | None = None
    root_system: lc.RootSystem | None = None

    @property
    def coxeter(self) -> list[list[int]]:
        if self.kind == "permutation":
            k = self.n - 1
            return [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(k)] for i in range(k)]
        return [list(r) for r in self.root_system.coxeter_orders]

    @property
    def group(self) -> str:
        if self.kind == "permutation":
            return f"ArtinBraid({self.n})"
        return f"GeneralisedBraid({self.root_system.name})"


def permutation_equivariance(d: int, n: int) -> Equivariance:
    mats = tuple(lc.transposition_operator(d, n, i, i + 1) for i in range(1, n))
    return Equivariance("permutation", mats, n=n)


def tits_equivariance(lift: lc.TitsLift, block=None) -> Equivariance:
    mats = lift.matrices
    if block is not None:
        idx = list(block)
        restricted = []
        for m in mats:
            sub = m[np.ix_(idx, idx)]
            outside = [k for k in range(m.shape[0]) if k not in set(idx)]
            if outside and not ex.is_zero(m[np.ix_(outside, idx)]):
                raise ValueError("block is not stable under the Tits lifts")
            restricted.append(sub)
        mats = tuple(restricted)
    return Equivariance("tits", tuple(mats), root_system=lift.representation.root_system)


def reflection_equivariance(rs: lc.RootSystem, reflections: dict) -> Equivariance:
    mats = tuple(reflections[rs.simple_root(i)] for i in range(rs.rank))
    return Equivariance("reflection", mats, root_system=rs)


# ---------------------------------------------------------------------------
# Monodromy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyRep:
    group: str
    generator_images: tuple
    basepoint: tuple
    h: complex
    tol: float
    coxeter: tuple
    err_estimates: tuple = ()
    steps: tuple = ()
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))

    @property
    def rank(self) -> int:
        return len(self.generator_images)

    def word(self, letters) -> np.ndarray:
        d = self.generator_images[0].shape[0]
        out = np.eye(d, dtype=complex)
        for k in letters:
            out = out @ _letter(self.generator_images, k)
        return out

    def to_json(self, max_dim: int = 64) -> dict:
        mats = None
        if self.generator_images[0].shape[0] <= max_dim:
            mats = [complex_matrix_json(m) for m in self.generator_images]
        return {
            "group": self.group,
            "h": [complex(self.h).real, complex(self.h).imag],
            "tol": self.tol,
            "basepoint": [[complex(z).real, complex(z).imag] for z in self.basepoint],
            "generators": mats,
            "spectra": [[[z.real, z.imag] for z in spectrum(m)] for m in self.generator_images],
            "err_estimates": list(self.err_estimates),
            "steps": list(self.steps),
            "conventions": self.conventions,
        }


def _letter(images, k: int) -> np.ndarray:
    """Generator k (0-based) or its inverse for negative k encoded as ~k."""
    if k >= 0:
        return images[k]
    return np.linalg.inv(images[~k])


def complex_matrix_json(m: np.ndarray) -> list:
    return [[[z.real, z.imag] for z in row] for row in np.asarray(m, dtype=complex).tolist()]


def monodromy_rep(conn, equivariance: Equivariance, tol: float = DEFAULT_TOL, basepoint=None,
                  workers: int = 1, fixed_steps: int | None = None, backend: str | None = None,
                  eta: float = 1.0) -> MonodromyRep:
    """rho(T_i) = P_{i,i+1} . transport along the half-twist; rho(S_i) = s~_i . transport.

    Generators are integrated independently (in a thread pool when
    ``workers > 1``) and assembled in index order.
    """
    k = len(equivariance.matrices)
    if equivariance.kind == "permutation":
        n = equivariance.n
        if conn.arrangement.base_dim != n:
            raise ValueError("connection does not live on configuration space of n points")
        base = np.arange(1, n + 1, dtype=complex) if basepoint is None else np.asarray(basepoint, dtype=complex)
        paths = [braid_path_config(n, i + 1, base, eta=eta, forms=conn.arrangement) for i in range(k)]
    else:
        rs = equivariance.root_system
        if conn.arrangement.base_dim != rs.rank:
            raise ValueError("connection does not live on the Cartan of this root system")
        base = default_cartan_basepoint(rs) if basepoint is None else np.asarray(basepoint, dtype=complex)
        paths = [braid_path_cartan(rs, i, base, eta=eta) for i in range(k)]
    if equivariance.matrices[0].shape[0] != conn.fiber_dim:
        raise ValueError("symmetry matrices do not act on the fibre")

    def job(i):
        return parallel_transport(conn, paths[i], tol=tol, fixed_steps=fixed_steps, backend=backend)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(k)))
    else:
        results = [job(i) for i in range(k)]
    images = tuple(ex.to_complex(m) @ r.matrix for m, r in zip(equivariance.matrices, results))
    return MonodromyRep(
        equivariance.group,
        images,
        tuple(complex(z) for z in base),
        complex(conn.h),
        tol,
        tuple(tuple(r) for r in equivariance.coxeter),
        tuple(r.err_estimate for r in results),
        tuple(r.steps for r in results),
    )


def local_model(conn, equivariance: Equivariance, i: int) -> np.ndarray:
    """symmetry_i . exp(pi i * residue on the wall crossed by generator i).

    ``rho(generator i)`` is conjugate to this matrix.
    """
    if equivariance.kind == "permutation":
        label = (i + 1, i + 2)
    else:
        label = equivariance.root_system.simple_root(i)
    r = conn.numeric_residues()[conn.residue_index(label)]
    return ex.to_complex(equivariance.matrices[i]) @ expm(1j * np.pi * r)


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    residuals: dict

    def passed(self, bound: float) -> bool:
        return self.max_residual <= bound

    def to_json(self) -> dict:
        return {"max_residual": self.max_residual, "residuals": {str(k): v for k, v in self.residuals.items()}}


def _alternating(images, i, j, m):
    out = np.eye(images[0].shape[0], dtype=complex)
    for k in range(m):
        out = out @ images[i if k % 2 == 0 else j]
    return out


def braid_residuals(images, coxeter) -> ResidualReport:
    res = {}
    for i, j in itertools.combinations(range(len(images)), 2):
        m = coxeter[i][j]
        diff = _alternating(images, i, j, m) - _alternating(images, j, i, m)
        res[(i + 1, j + 1)] = float(np.abs(diff).max())
    return ResidualReport(max(res.values(), default=0.0), res)


def verify_braid_relations(rep: MonodromyRep) -> ResidualReport:
    """Max-entry residuals of the m_ij-fold braid relations."""
    return braid_residuals(rep.generator_images, rep.coxeter)


def _per_generator(q, k):
    if np.ndim(q) == 0:
        return [complex(q)] * k
    q = [complex(x) for x in q]
    if len(q) != k:
        raise ValueError("one Hecke parameter per generator required")
    return q


def hecke_residuals(images, q) -> ResidualReport:
    qs = _per_generator(q, len(images))
    res = {}
    for i, (T, qi) in enumerate(zip(images, qs)):
        eye = np.eye(T.shape[0])
        res[i + 1] = float(np.abs((T - qi * eye) @ (T + eye / qi)).max())
    return ResidualReport(max(res.values(), default=0.0), res)


def hecke_check(rep: MonodromyRep, q) -> ResidualReport:
    """(T_i - q_i)(T_i + q_i^{-1}) per generator."""
    return hecke_residuals(rep.generator_images, q)


def hecke_parameter(h) -> complex:
    return cmath.exp(1j * cmath.pi * complex(h))


def bmw_r(h, dim: int, symmetric: bool) -> complex:
    """r = eps e^{i pi h (dim - eps)}, eps = +1 for orthogonal, -1 for symplectic."""
    eps = 1 if symmetric else -1
    return eps * cmath.exp(1j * cmath.pi * complex(h) * (dim - eps))


def tangle_elements(images, q) -> list[np.ndarray]:
    q = complex(q)
    if abs(q - 1 / q) < 1e-6:
        raise ValueError("q - q^{-1} too small; E_i = 1 - (T - T^{-1})/(q - q^{-1}) is singular")
    eye = np.eye(images[0].shape[0])
    return [eye - (T - np.linalg.inv(T)) / (q - 1 / q) for T in images]


def bmw_check(rep: MonodromyRep, q, r) -> ResidualReport:
    """Cubic relation and the tangle relations E_i T_j^{+-1} E_i = r^{+-1} E_i for |i - j| = 1."""
    images = rep.generator_images
    q, r = complex(q), complex(r)
    E = tangle_elements(images, q)
    eye = np.eye(images[0].shape[0])
    res = {}
    for i, T in enumerate(images):
        cubic = (T - q * eye) @ (T + eye / q) @ (T - eye / r)
        res[("cubic", i + 1)] = float(np.abs(cubic).max())
    for i, j in itertools.permutations(range(len(images)), 2):
        if abs(i - j) != 1:
            continue
        Tj = images[j]
        plus = E[i] @ Tj @ E[i] - r * E[i]
        minus = E[i] @ np.linalg.inv(Tj) @ E[i] - E[i] / r
        res[("tangle+", i + 1, j + 1)] = float(np.abs(plus).max())
        res[("tangle-", i + 1, j + 1)] = float(np.abs(minus).max())
    return ResidualReport(max(res.values(), default=0.0), res)


# ---------------------------------------------------------------------------
# Spectra and comparisons
# ---------------------------------------------------------------------------

def spectrum(matrix) -> np.ndarray:
    """Eigenvalues with multiplicity, sorted by (re, im) after rounding to 1e-9."""
    m = np.asarray(matrix, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError("non-finite matrix")
    ev = np.linalg.eigvals(m)
    key = np.lexsort((np.round(ev.imag, 9), np.round(ev.real, 9)))
    return ev[key]


def spectral_distance(a, b) -> float:
    """Max distance under the optimal matching of two eigenvalue multisets."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("spectra of different sizes")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def default_words(k: int, max_len: int = 3) -> list[tuple[int, ...]]:
    """All positive words of length 1..max_len (this includes every square)."""
    out = []
    for length in range(1, max_len + 1):
        out.extend(itertools.product(range(k), repeat=length))
    return out


@dataclass(frozen=True)
class KDReport:
    passed: bool
    max_deviation: float
    max_spectral: float
    max_trace: float
    per_word: dict
    scalars: tuple
    substitution: str

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "max_spectral": self.max_spectral,
            "max_trace": self.max_trace,
            "per_word": {" ".join(str(x + 1) for x in w): v for w, v in self.per_word.items()},
            "scalars": [[complex(s).real, complex(s).imag] for s in self.scalars],
            "substitution": self.substitution,
        }


def _word_matrix(images, word):
    out = np.eye(images[0].shape[0], dtype=complex)
    for k in word:
        out = out @ _letter(images, k)
    return out


def projective_scalars(images_a, images_b) -> list[complex]:
    """Per-generator scalars c_i minimising the spectral distance of A_i and c_i B_i.

    c_i is a d-th root of det(A_i)/det(B_i); the branch is chosen by matching.
    """
    out = []
    for a, b in zip(images_a, images_b):
        d = a.shape[0]
        ratio = np.linalg.det(a) / np.linalg.det(b)
        root = ratio ** (1 / d)
        sa = np.linalg.eigvals(a)
        sb = np.linalg.eigvals(b)
        best = min(
            (root * cmath.exp(2j * cmath.pi * k / d) for k in range(d)),
            key=lambda c: spectral_distance(sa, c * sb),
        )
        out.append(best)
    return out


def kd_compare(rep_a, rep_b, words=None, tol: float = 1e-6, normalize: str = "none",
               substitution: str = "") -> KDReport:
    """Compare two braid representations through conjugation invariants.

    For every word, the eigenvalue multisets and the traces of its two images
    are compared. ``normalize="projective"`` first rescales each generator of
    ``rep_b`` by a scalar (reported) so that determinants agree.
    """
    images_a = rep_a.generator_images if isinstance(rep_a, MonodromyRep) else tuple(map(np.asarray, rep_a))
    images_b = rep_b.generator_images if isinstance(rep_b, MonodromyRep) else tuple(map(np.asarray, rep_b))
    if len(images_a) != len(images_b) or any(x.shape != y.shape for x, y in zip(images_a, images_b)):
        raise ValueError("representations have mismatched shapes")
    scalars = [1.0 + 0j] * len(images_b)
    if normalize == "projective":
        scalars = projective_scalars(images_a, images_b)
        images_b = tuple(c * m for c, m in zip(scalars, images_b))
    elif normalize != "none":
        raise ValueError(f"unknown normalization {normalize!r}")
    words = default_words(len(images_a)) if words is None else [tuple(w) for w in words]
    per = {}
    max_s = max_t = 0.0
    for w in words:
        ma, mb = _word_matrix(images_a, w), _word_matrix(images_b, w)
        ds = spectral_distance(np.linalg.eigvals(ma), np.linalg.eigvals(mb))
        dt = abs(np.trace(ma) - np.trace(mb))
        per[w] = {"spectral": ds, "trace": dt}
        max_s, max_t = max(max_s, ds), max(max_t, dt)
    dev = max(max_s, max_t)
    return KDReport(dev <= tol, dev, max_s, max_t, per, tuple(scalars), substitution)
