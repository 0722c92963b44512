"""Quantum groups at a numeric parameter q.

Conventions (fixed throughout):

* K_i = q_i^{H_i} with q_i = q^{d_i}, d_i = <alpha_i, alpha_i>/2, evaluated as
  exp(d_i * hbar * H_i) where hbar is the principal logarithm of q.
* Coproduct: Delta(E) = E (x) 1 + K (x) E, Delta(F) = F (x) K^{-1} + 1 (x) F,
  Delta(K) = K (x) K.
* R-matrix: R = C * (1 + sum c_w F-word (x) E-word), where the Cartan part is
  C = exp(hbar * sum_ij (G^{-1})_ij H_i (x) H_j) with G the Gram matrix of the
  simple coroots (plus Z (x) Z / m for gl_m, Z the degree operator). The
  coefficients c_w are solved from R Delta(x) = Delta^op(x) R, and the braid
  operator is R_check = flip . R.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import exact as ex
from . import liecore as lc

COPRODUCT = "Delta(E)=E(x)1+K(x)E, Delta(F)=F(x)K^-1+1(x)F, Delta(K)=K(x)K"
ROOT_OF_UNITY_TOL = 1e-8
RELATION_TOL = 1e-12


class RootOfUnityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# q-numbers
# ---------------------------------------------------------------------------

def q_int(n: int, q) -> complex:
    """[n]_q = (q^n - q^-n)/(q - q^-1), with the limiting value at q = +-1."""
    q = complex(q)
    if abs(q - 1 / q) < 1e-15:
        return n * q ** (n - 1)
    return (q**n - q**-n) / (q - 1 / q)


def q_fact(n: int, q) -> complex:
    out = 1.0 + 0j
    for k in range(1, n + 1):
        out *= q_int(k, q)
    return out


def check_generic(q, degree: int) -> None:
    """Reject q for which some [k]_q, k <= degree, vanishes (q^{2k} = 1, q != +-1)."""
    q = complex(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    if abs(q - 1) < 1e-15 or abs(q + 1) < 1e-15:
        return
    for k in range(1, degree + 1):
        if abs(q ** (2 * k) - 1) < ROOT_OF_UNITY_TOL:
            raise RootOfUnityError(f"q is (numerically) a root of unity of order dividing {2 * k}")


def nilpotency_degree(x: np.ndarray, rtol: float = 1e-12) -> int:
    """Smallest k with x^k = 0 (numerically); raises if x is not nilpotent."""
    d = x.shape[0]
    scale = max(1.0, float(np.abs(x).max(initial=0.0)))
    p = np.eye(d, dtype=complex)
    for k in range(1, d + 2):
        p = p @ x
        if float(np.abs(p).max(initial=0.0)) <= rtol * scale**k:
            return k
    raise ValueError("matrix is not nilpotent")


def exp_q(x: np.ndarray, q) -> np.ndarray:
    """sum_n q^{n(n-1)/2} x^n / [n]_q! for nilpotent x."""
    x = np.asarray(x, dtype=complex)
    deg = nilpotency_degree(x)
    check_generic(q, deg)
    q = complex(q)
    out = np.eye(x.shape[0], dtype=complex)
    p = np.eye(x.shape[0], dtype=complex)
    for n in range(1, deg):
        p = p @ x
        f = q_fact(n, q)
        if abs(f) < ROOT_OF_UNITY_TOL:
            raise RootOfUnityError(f"[{n}]_q! vanishes")
        out = out + q ** (n * (n - 1) / 2) * p / f
    return out


# ---------------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QModule:
    """Finite-dimensional U_q module in a weight basis.

    ``H`` holds the integer weights mu(h_i) of the basis vectors; ``Z`` the
    gl-degree (or None).
    """

    q: complex
    hbar: complex
    root_system: lc.RootSystem
    E: tuple
    F: tuple
    H: tuple  # tuple of int arrays, one per simple root
    Z: np.ndarray | None = None
    center_norm: float | None = None
    conventions: dict = field(default_factory=lambda: {"coproduct": COPRODUCT})

    @property
    def dim(self) -> int:
        return self.E[0].shape[0]

    @property
    def rank(self) -> int:
        return len(self.E)

    def d(self, i: int) -> float:
        return float(self.root_system.gram[i][i]) / 2

    def q_i(self, i: int) -> complex:
        return cmath.exp(self.d(i) * self.hbar)

    def qpow(self, i: int, power: float = 1.0) -> np.ndarray:
        """q_i^{power * H_i} as a diagonal matrix."""
        return np.diag(np.exp(power * self.d(i) * self.hbar * self.H[i]))

    def K(self, i: int) -> np.ndarray:
        return self.qpow(i, 1.0)

    def Kinv(self, i: int) -> np.ndarray:
        return self.qpow(i, -1.0)

    @property
    def weights(self) -> list[tuple[int, ...]]:
        return [tuple(int(h[k]) for h in self.H) for k in range(self.dim)]

    @property
    def weight_decomp(self) -> dict:
        out: dict = {}
        for k, mu in enumerate(self.weights):
            out.setdefault(mu, []).append(k)
        return out

    def relation_residual(self) -> float:
        """Max residual of the defining relations."""
        cm = self.root_system.cartan_matrix
        res = 0.0
        for i in range(self.rank):
            K, Ki = self.K(i), self.Kinv(i)
            qi = self.q_i(i)
            for j in range(self.rank):
                a = cm[i][j]
                res = max(res, float(np.abs(K @ self.E[j] @ Ki - qi**a * self.E[j]).max()))
                res = max(res, float(np.abs(K @ self.F[j] @ Ki - qi**-a * self.F[j]).max()))
                c = self.E[i] @ self.F[j] - self.F[j] @ self.E[i]
                if i == j:
                    if abs(qi - 1 / qi) < 1e-15:
                        target = np.diag(self.H[i].astype(complex))
                    else:
                        target = (K - Ki) / (qi - 1 / qi)
                    c = c - target
                res = max(res, float(np.abs(c).max()))
        return res

    def tensor(self, other: "QModule") -> "QModule":
        return q_tensor(self, other)


def _make_q(q):
    q = complex(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    return q, cmath.log(q)


def uq_sl2_module(m: int, q) -> QModule:
    """V_m: K v_k = q^{m-2k} v_k, F v_k = [k+1] v_{k+1}, E v_k = [m-k+1] v_{k-1}."""
    if m < 0:
        raise ValueError("highest weight must be non-negative")
    q, hbar = _make_q(q)
    check_generic(q, m)
    d = m + 1
    E = np.zeros((d, d), dtype=complex)
    F = np.zeros((d, d), dtype=complex)
    for k in range(m):
        F[k + 1, k] = q_int(k + 1, q)
        E[k, k + 1] = q_int(m - k, q)
    H = np.array([m - 2 * k for k in range(d)])
    return QModule(q, hbar, lc.build_root_system("A", 1), (E,), (F,), (H,))


def uq_sln_vector(n: int, q, gl: bool = False) -> QModule:
    """Vector module C^n of U_q(sl_n) (or U_q(gl_n) with ``gl=True``)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    q, hbar = _make_q(q)
    check_generic(q, 1)
    rs = lc.build_root_system("A", n - 1, "trace" if gl else "basic")
    E, F, H = [], [], []
    for i in range(n - 1):
        e = np.zeros((n, n), dtype=complex)
        e[i, i + 1] = 1
        E.append(e)
        F.append(e.T.copy())
        w = np.zeros(n, dtype=int)
        w[i], w[i + 1] = 1, -1
        H.append(w)
    Z = np.ones(n, dtype=int) if gl else None
    return QModule(q, hbar, rs, tuple(E), tuple(F), tuple(H), Z, float(n) if gl else None)


def q_tensor(m1: QModule, m2: QModule) -> QModule:
    """Tensor product through the coproduct."""
    if abs(m1.q - m2.q) > 1e-15 or m1.root_system.cartan_matrix != m2.root_system.cartan_matrix:
        raise ValueError("modules over different algebras or different q")
    i1, i2 = np.eye(m1.dim), np.eye(m2.dim)
    E, F, H = [], [], []
    for i in range(m1.rank):
        E.append(np.kron(m1.E[i], i2) + np.kron(m1.K(i), m2.E[i]))
        F.append(np.kron(m1.F[i], m2.Kinv(i)) + np.kron(i1, m2.F[i]))
        H.append(np.add.outer(m1.H[i], m2.H[i]).ravel())
    Z = None
    if m1.Z is not None and m2.Z is not None:
        Z = np.add.outer(m1.Z, m2.Z).ravel()
    return QModule(m1.q, m1.hbar, m1.root_system, tuple(E), tuple(F), tuple(H), Z, m1.center_norm)


def q_tensor_power(m: QModule, n: int) -> QModule:
    out = m
    for _ in range(n - 1):
        out = q_tensor(out, m)
    return out


# ---------------------------------------------------------------------------
# R-matrix
# ---------------------------------------------------------------------------

def flip(d1: int, d2: int) -> np.ndarray:
    """v (x) w -> w (x) v from C^d1 (x) C^d2 to C^d2 (x) C^d1."""
    p = np.zeros((d1 * d2, d1 * d2))
    for a in range(d1):
        for b in range(d2):
            p[b * d1 + a, a * d2 + b] = 1
    return p


def cartan_factor(m1: QModule, m2: QModule) -> np.ndarray:
    """Diagonal of exp(hbar (sum G^{-1}_ij H_i (x) H_j + Z (x) Z / m))."""
    rs = m1.root_system
    ginv = np.array(ex.to_complex(ex.inverse(ex.qarray([list(r) for r in rs.coroot_gram]))))
    expo = np.zeros((m1.dim, m2.dim), dtype=complex)
    for i in range(m1.rank):
        for j in range(m1.rank):
            expo += ginv[i, j] * np.multiply.outer(m1.H[i], m2.H[j])
    if m1.Z is not None and m2.Z is not None:
        expo += np.multiply.outer(m1.Z, m2.Z) / m1.center_norm
    return np.exp(m1.hbar * expo).ravel()


def _words(gens, rank):
    """Nonzero monomials in ``gens`` grouped by degree (tuple of multiplicities)."""
    d = gens[0].shape[0]
    by_degree = {(0,) * rank: [np.eye(d, dtype=complex)]}
    frontier = [((0,) * rank, np.eye(d, dtype=complex))]
    while frontier:
        new = []
        for deg, mat in frontier:
            for i, g in enumerate(gens):
                prod = g @ mat
                if float(np.abs(prod).max(initial=0.0)) < 1e-13:
                    continue
                nd = tuple(c + (1 if k == i else 0) for k, c in enumerate(deg))
                by_degree.setdefault(nd, []).append(prod)
                new.append((nd, prod))
        frontier = new
    basis = {}
    for deg, mats in by_degree.items():
        stack = np.array([m.ravel() for m in mats])
        u, s, vh = np.linalg.svd(stack, full_matrices=False)
        r = int((s > 1e-10 * s.max()).sum())
        basis[deg] = [vh[k].reshape(d, d) for k in range(r)]
    return basis


@dataclass(frozen=True)
class RMatrix:
    R: np.ndarray
    Rcheck: np.ndarray
    intertwining_residual: float
    top_eigenvalue: complex
    conventions: dict


def r_matrix(m1: QModule, m2: QModule, tol: float = 1e-8) -> RMatrix:
    """Solve for R on m1 (x) m2 within the ansatz C (1 + sum c F-word (x) E-word)."""
    if m1.root_system.cartan_matrix != m2.root_system.cartan_matrix:
        raise ValueError("modules over different algebras")
    d1, d2 = m1.dim, m2.dim
    C = np.diag(cartan_factor(m1, m2))
    fw, ew = _words(m1.F, m1.rank), _words(m2.E, m2.rank)
    terms = []
    for deg, fs in fw.items():
        if not any(deg) or deg not in ew:
            continue
        for f, e in itertools.product(fs, ew[deg]):
            terms.append(np.kron(f, e))
    P12, P21 = flip(d1, d2), flip(d2, d1)
    m12, m21 = q_tensor(m1, m2), q_tensor(m2, m1)
    ops = []
    for i in range(m1.rank):
        ops.append((m12.E[i], P21 @ m21.E[i] @ P12))
        ops.append((m12.F[i], P21 @ m21.F[i] @ P12))
        ops.append((np.kron(m1.K(i), m2.K(i)), np.kron(m1.K(i), m2.K(i))))
    rows, rhs = [], []
    for x, xop in ops:
        rhs.append(-(C @ x - xop @ C).ravel())
        if terms:
            rows.append(np.array([(C @ t @ x - xop @ C @ t).ravel() for t in terms]).T)
    if terms:
        A = np.vstack(rows)
        b = np.concatenate(rhs)
        coef, *_ = np.linalg.lstsq(A, b, rcond=None)
        R = C @ (np.eye(d1 * d2) + sum(c * t for c, t in zip(coef, terms)))
    else:
        R = C.astype(complex)
    resid = max(float(np.abs(R @ x - xop @ R).max()) for x, xop in ops)
    if resid > tol * max(1.0, float(np.abs(R).max())):
        raise ArithmeticError(f"R-matrix intertwiner solve failed (residual {resid:.2e}); convention mismatch")
    Rcheck = P12 @ R
    conventions = {
        "coproduct": COPRODUCT,
        "R": "R = C (1 + sum c F-word (x) E-word), C = exp(hbar (G^-1 H(x)H + Z(x)Z/m))",
        "Rcheck": "flip . R",
    }
    return RMatrix(R, Rcheck, resid, complex(C[0, 0]), conventions)


def place_adjacent(op: np.ndarray, d: int, n: int, i: int) -> np.ndarray:
    """1 (x) ... (x) op (x) ... (x) 1 with op on factors i, i+1 (1-based)."""
    return np.kron(np.kron(np.eye(d ** (i - 1)), op), np.eye(d ** (n - i - 1)))


def rmat_rep(m: QModule, n: int, cap: int = lc.DEFAULT_DIM_CAP) -> tuple:
    """R_i^check on m^{tensor n}, i = 1..n-1."""
    if n < 2:
        raise ValueError("need n >= 2")
    lc._check_cap(m.dim**n, cap)
    rc = r_matrix(m, m).Rcheck
    return tuple(place_adjacent(rc, m.dim, n, i) for i in range(1, n))


# ---------------------------------------------------------------------------
# Quantum Weyl group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QWeylOp:
    matrices: tuple
    normalization: str
    module: QModule


def qweyl_element(m: QModule, i: int, normalization: str = "triple") -> np.ndarray:
    """S_i = exp_{q_i^-1}(q_i^-1 E_i q_i^-H_i) exp_{q_i^-1}(-F_i) exp_{q_i^-1}(q_i E_i q_i^H_i).

    ``normalization="casimir"`` multiplies on the right by the Cartan
    correction q_i^{(3 H_i^2 + 2 H_i)/4}, which makes S_i^2 central on
    irreducible U_q(sl2)-modules (S^2 = (-1)^m q^{m(m+2)/2} on V_m).
    """
    qi = m.q_i(i)
    E, F = m.E[i], m.F[i]
    a = exp_q(E @ m.qpow(i, -1.0) / qi, 1 / qi)
    b = exp_q(-F, 1 / qi)
    c = exp_q(qi * E @ m.qpow(i, 1.0), 1 / qi)
    S = a @ b @ c
    if normalization == "triple":
        return S
    if normalization == "casimir":
        Hi = m.H[i].astype(float)
        return S @ np.diag(np.exp(m.d(i) * m.hbar * (3 * Hi**2 + 2 * Hi) / 4))
    raise ValueError(f"unknown normalization {normalization!r}")


def qweyl_op(m: QModule, normalization: str = "triple") -> QWeylOp:
    return QWeylOp(tuple(qweyl_element(m, i, normalization) for i in range(m.rank)), normalization, m)


def weight_map_residual(m: QModule, S: np.ndarray, i: int) -> float:
    """Largest component of S_i v outside V[s_i mu], over basis vectors v in V[mu]."""
    rs = m.root_system
    w = m.weights
    worst = 0.0
    for col in range(m.dim):
        target = rs.reflect_weight(i, w[col])
        for row in range(m.dim):
            if w[row] != target:
                worst = max(worst, abs(S[row, col]))
    return worst


def tits_matrices(m: QModule) -> tuple:
    """exp(e_i) exp(-f_i) exp(e_i), from the module's own E_i, F_i (meant for q = 1)."""
    return tuple(expm(E) @ expm(-F) @ expm(E) for E, F in zip(m.E, m.F))
