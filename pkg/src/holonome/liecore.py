"""Classical Lie algebras as explicit matrix algebras, with exact arithmetic.

Series A, B, C, D are realized as sl_{r+1}, so_{2r+1}, sp_{2r}, so_{2r} in a
split basis where the Cartan subalgebra is diagonal:

* sl_{r+1}: h = diag(t_1, ..., t_{r+1}), sum t_i = 0.
* so_{2r+1}: invariant form J = [[0, I, 0], [I, 0, 0], [0, 0, 1]],
  h = diag(t, -t, 0).
* sp_{2r}: symplectic form J = [[0, I], [-I, 0]], h = diag(t, -t).
* so_{2r}: invariant form J = [[0, I], [I, 0]], h = diag(t, -t).

Every algebra in the list is closed under transposition, so f_alpha is a
rescaled transpose of e_alpha.

Two inner-product normalizations are available:

``"basic"``
    The Killing-form multiple with <theta, theta> = 2 for the highest root.
``"trace"``
    The trace conventions of the classical examples: tr(XY) on gl/sl and
    1/2 tr(XY) on so/sp. It coincides with ``"basic"`` except for sp_{2r}
    (where it halves the form, so long roots have squared length 4) and
    so_3 (where <theta, theta> = 1).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exact as ex

SERIES = ("A", "B", "C", "D")
MIN_RANK = {"A": 1, "B": 1, "C": 1, "D": 3}
DEFAULT_DIM_CAP = 20000


class DimensionError(ValueError):
    """Raised when a construction would exceed the configured dimension cap."""


# ---------------------------------------------------------------------------
# Root systems
# ---------------------------------------------------------------------------

Root = tuple  # simple-root coordinates, tuple of ints


def _eps(r: int, *terms: tuple[int, int]) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * r
    for idx, coeff in terms:
        v[idx] += coeff
    return tuple(v)


def _ambient_roots(series: str, rank: int):
    """Simple and positive roots in epsilon coordinates."""
    r = rank
    if series == "A":
        n = r + 1
        simple = [_eps(n, (i, 1), (i + 1, -1)) for i in range(r)]
        positive = [_eps(n, (i, 1), (j, -1)) for i in range(n) for j in range(i + 1, n)]
        return n, simple, positive
    minus = [_eps(r, (i, 1), (j, -1)) for i in range(r) for j in range(i + 1, r)]
    plus = [_eps(r, (i, 1), (j, 1)) for i in range(r) for j in range(i + 1, r)]
    chain = [_eps(r, (i, 1), (i + 1, -1)) for i in range(r - 1)]
    if series == "B":
        simple = chain + [_eps(r, (r - 1, 1))]
        positive = minus + plus + [_eps(r, (i, 1)) for i in range(r)]
    elif series == "C":
        simple = chain + [_eps(r, (r - 1, 2))]
        positive = minus + plus + [_eps(r, (i, 2)) for i in range(r)]
    else:
        simple = chain + [_eps(r, (r - 2, 1), (r - 1, 1))]
        positive = minus + plus
    return r, simple, positive


def _eps_norm(series: str, rank: int, normalization: str) -> Fraction:
    """Squared length of an epsilon basis vector."""
    if normalization == "trace":
        return Fraction(1)
    if normalization != "basic":
        raise ValueError(f"unknown normalization {normalization!r}")
    if series == "C":
        return Fraction(1, 2)
    if series == "B" and rank == 1:
        return Fraction(2)
    return Fraction(1)


@dataclass(frozen=True)
class RootSystem:
    """Cartan and Coxeter data of a classical root system.

    Roots are stored in simple-root coordinates; weights are stored by their
    Dynkin labels ``(mu(h_1), ..., mu(h_r))``.
    """

    series: str
    rank: int
    normalization: str
    simple_ambient: tuple
    positive_ambient: tuple
    eps_norm: Fraction
    positive_roots: tuple
    gram: tuple  # <alpha_i, alpha_j> on simple roots
    cartan_matrix: tuple  # a_ij = <alpha_j, alpha_i^vee>
    coxeter_orders: tuple

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    def inner(self, a, b) -> Fraction:
        return sum(
            (Fraction(a[i]) * self.gram[i][j] * b[j] for i in range(self.rank) for j in range(self.rank)),
            Fraction(0),
        )

    def norm2(self, root) -> Fraction:
        return self.inner(root, root)

    def coroot(self, root) -> tuple[Fraction, ...]:
        """alpha^vee in the basis of simple coroots."""
        n = self.norm2(root)
        return tuple(Fraction(root[i]) * self.gram[i][i] / n for i in range(self.rank))

    def pairing(self, root, coroot_of) -> Fraction:
        """<root, beta^vee>."""
        return 2 * self.inner(root, coroot_of) / self.norm2(coroot_of)

    def labels(self, root) -> tuple[int, ...]:
        """Dynkin labels (values on simple coroots) of a root."""
        return tuple(
            int(sum(root[j] * self.cartan_matrix[i][j] for j in range(self.rank))) for i in range(self.rank)
        )

    def simple_root(self, i: int) -> Root:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def reflect_weight(self, i: int, mu) -> tuple[int, ...]:
        """s_i acting on Dynkin labels."""
        c = mu[i]
        return tuple(mu[j] - c * self.cartan_matrix[j][i] for j in range(self.rank))

    def reflect_root(self, i: int, root) -> Root:
        c = self.labels(root)[i]
        return tuple(root[j] - (c if j == i else 0) for j in range(self.rank))

    def positive_representative(self, root) -> Root:
        return tuple(-x for x in root) if any(x < 0 for x in root) else tuple(root)

    @cached_property
    def highest_root(self) -> Root:
        return max(self.positive_roots, key=sum)

    @cached_property
    def coroot_gram(self) -> tuple:
        """<h_i, h_j> for simple coroots, under the identification h = h*."""
        g = self.gram
        return tuple(
            tuple(4 * g[i][j] / (g[i][i] * g[j][j]) for j in range(self.rank)) for i in range(self.rank)
        )

    def root_orbits(self) -> list[frozenset]:
        """W-orbits of positive roots (up to sign)."""
        remaining = set(self.positive_roots)
        orbits = []
        while remaining:
            seed = remaining.pop()
            orbit = {seed}
            frontier = [seed]
            while frontier:
                beta = frontier.pop()
                for i in range(self.rank):
                    img = self.positive_representative(self.reflect_root(i, beta))
                    if img not in orbit:
                        orbit.add(img)
                        frontier.append(img)
            remaining -= orbit
            orbits.append(frozenset(orbit))
        return sorted(orbits, key=lambda o: min(o))


def _coxeter_order(a_ij: int, a_ji: int) -> int:
    return {0: 2, 1: 3, 2: 4, 3: 6}[a_ij * a_ji]


def build_root_system(series: str, rank: int, normalization: str = "basic") -> RootSystem:
    """Cartan/Coxeter data for one of the classical series."""
    series = series.upper()
    if series not in SERIES:
        raise ValueError(f"unsupported series {series!r}")
    if rank < MIN_RANK[series]:
        raise ValueError(f"{series}{rank} is not a supported classical type")
    _, simple, positive = _ambient_roots(series, rank)
    eps_norm = _eps_norm(series, rank, normalization)

    def dot(u, v):
        return eps_norm * sum((Fraction(x) * y for x, y in zip(u, v)), Fraction(0))

    # simple-root coordinates: solve positive = sum c_i simple_i
    basis = ex.qarray([list(s) for s in simple]).T
    solver = ex.CoordinateSolver(basis)
    coords = []
    for beta in positive:
        c = solver(list(beta))
        coords.append(tuple(int(x) for x in c))
    gram = tuple(tuple(dot(simple[i], simple[j]) for j in range(rank)) for i in range(rank))
    cartan = tuple(tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(rank)) for i in range(rank))
    orders = tuple(
        tuple(1 if i == j else _coxeter_order(-cartan[i][j], -cartan[j][i]) for j in range(rank))
        for i in range(rank)
    )
    order = sorted(range(len(positive)), key=lambda k: (sum(coords[k]), coords[k]))
    return RootSystem(
        series=series,
        rank=rank,
        normalization=normalization,
        simple_ambient=tuple(simple),
        positive_ambient=tuple(positive[k] for k in order),
        eps_norm=eps_norm,
        positive_roots=tuple(coords[k] for k in order),
        gram=gram,
        cartan_matrix=cartan,
        coxeter_orders=orders,
    )


def expected_positive_count(series: str, rank: int) -> int:
    r = rank
    return {"A": r * (r + 1) // 2, "B": r * r, "C": r * r, "D": r * (r - 1)}[series]


def parse_algebra(text: str) -> tuple[str, int]:
    """"A2" -> ("A", 2)."""
    text = text.strip().upper()
    if len(text) < 2 or text[0] not in SERIES or not text[1:].isdigit():
        raise ValueError(f"cannot parse algebra {text!r}; expected e.g. 'A2'")
    return text[0], int(text[1:])


# ---------------------------------------------------------------------------
# Matrix realization (defining representation)
# ---------------------------------------------------------------------------

def _vector_dim(series: str, rank: int) -> int:
    return {"A": rank + 1, "B": 2 * rank + 1, "C": 2 * rank, "D": 2 * rank}[series]


def _root_vector(series: str, rank: int, beta) -> np.ndarray:
    """A nonzero element of the root space for the positive root ``beta``.

    ``beta`` is given in epsilon coordinates.
    """
    r = rank
    n = _vector_dim(series, rank)
    support = [(i, int(c)) for i, c in enumerate(beta) if c != 0]
    m = ex.zeros(n)
    if series == "A":
        (i, _), (j, _) = support
        m[i, j] = Fraction(1)
        return m
    if len(support) == 2 and support[0][1] == 1 and support[1][1] == -1:
        i, j = support[0][0], support[1][0]
        m[i, j] = Fraction(1)
        m[r + j, r + i] = Fraction(-1)
    elif len(support) == 2:
        i, j = support[0][0], support[1][0]
        m[i, r + j] = Fraction(1)
        m[j, r + i] = Fraction(1 if series == "C" else -1)
    elif support[0][1] == 2:
        i = support[0][0]
        m[i, r + i] = Fraction(1)
    else:
        i = support[0][0]
        m[i, 2 * r] = Fraction(1)
        m[2 * r, r + i] = Fraction(-1)
    return m


def _cartan_element(series: str, rank: int, t) -> np.ndarray:
    n = _vector_dim(series, rank)
    m = ex.zeros(n)
    if series == "A":
        for i, x in enumerate(t):
            m[i, i] = Fraction(x)
        return m
    for i, x in enumerate(t):
        m[i, i] = Fraction(x)
        m[rank + i, rank + i] = -Fraction(x)
    return m


def _sl2_triple(e: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Complete e to (e, f, h) with f proportional to e^T and [e, f] = h, [h, e] = 2e."""
    ft = e.T.copy()
    h0 = ex.comm(e, ft)
    he = ex.comm(h0, e)
    i, j = next((i, j) for i in range(e.shape[0]) for j in range(e.shape[1]) if e[i, j] != 0)
    eigen = he[i, j] / e[i, j]
    f = ft * (Fraction(2) / eigen)
    h = ex.comm(e, f)
    return e, f, h


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    """Exact matrices for the Chevalley generators and all sl2-triples.

    ``center`` is the action of the identity of gl_{r+1} when the module is
    regarded as a gl-module (type A only); it is ``None`` for the semisimple
    algebra.
    """

    root_system: RootSystem
    dim: int
    kind: str
    root_e: dict
    root_f: dict
    root_h: dict
    center: np.ndarray | None = None
    center_norm: Fraction | None = None
    factors: tuple = field(default=())

    @property
    def E(self) -> list[np.ndarray]:
        return [self.root_e[self.root_system.simple_root(i)] for i in range(self.root_system.rank)]

    @property
    def F(self) -> list[np.ndarray]:
        return [self.root_f[self.root_system.simple_root(i)] for i in range(self.root_system.rank)]

    @property
    def H(self) -> list[np.ndarray]:
        return [self.root_h[self.root_system.simple_root(i)] for i in range(self.root_system.rank)]

    @cached_property
    def weights(self) -> tuple[tuple[int, ...], ...]:
        """Dynkin labels of each basis vector (the basis is a weight basis)."""
        hs = self.H
        for h in hs:
            if not ex.is_diagonal(h):
                raise ValueError("Cartan generators are not diagonal in this basis")
        return tuple(tuple(int(h[k, k]) for h in hs) for k in range(self.dim))

    @cached_property
    def weight_decomp(self) -> dict:
        out: dict = {}
        for k, mu in enumerate(self.weights):
            out.setdefault(mu, []).append(k)
        return out

    def weight_space(self, mu) -> list[int]:
        return self.weight_decomp.get(tuple(mu), [])

    @property
    def zero_weight(self) -> tuple[int, ...]:
        return (0,) * self.root_system.rank

    def casimir_pairs(self):
        """(X_a, X^a) for dual bases of g (and the center, for gl)."""
        rs = self.root_system
        pairs = []
        ginv = ex.inverse(ex.qarray([list(row) for row in rs.coroot_gram]))
        hs = self.H
        for i in range(rs.rank):
            dual = sum((hs[j] * ginv[i, j] for j in range(rs.rank)), ex.zeros(self.dim))
            pairs.append((hs[i], dual))
        for alpha in rs.positive_roots:
            c = rs.norm2(alpha) / 2
            e, f = self.root_e[alpha], self.root_f[alpha]
            pairs.append((e, f * c))
            pairs.append((f, e * c))
        if self.center is not None:
            pairs.append((self.center, self.center / self.center_norm))
        return pairs

    def generators(self) -> list[np.ndarray]:
        """E_i, F_i, H_i (and the center, if present)."""
        gens = self.E + self.F + self.H
        if self.center is not None:
            gens.append(self.center)
        return gens


def _check_cap(dim: int, cap: int) -> None:
    if dim > cap:
        raise DimensionError(f"representation dimension {dim} exceeds cap {cap}")


def _vector_rep(rs: RootSystem, gl: bool) -> Representation:
    n = _vector_dim(rs.series, rs.rank)
    root_e, root_f, root_h = {}, {}, {}
    for alpha, beta in zip(rs.positive_roots, rs.positive_ambient):
        e, f, h = _sl2_triple(_root_vector(rs.series, rs.rank, beta))
        root_e[alpha], root_f[alpha], root_h[alpha] = e, f, h
    center = None
    norm = None
    if gl:
        if rs.series != "A":
            raise ValueError("the gl center is only available for type A")
        center = ex.eye(n)
        norm = Fraction(n) * rs.eps_norm
    return Representation(rs, n, "vector", root_e, root_f, root_h, center, norm)


def _lie_bracket_basis(vec: Representation):
    """Weight basis of g inside the vector representation: e_alpha, h_i, f_alpha."""
    rs = vec.root_system
    ordered = sorted(rs.positive_roots, key=lambda a: (-sum(a), a))
    basis = [vec.root_e[a] for a in ordered] + vec.H + [vec.root_f[a] for a in reversed(ordered)]
    return basis


def _adjoint_rep(rs: RootSystem) -> Representation:
    vec = _vector_rep(rs, gl=False)
    basis = _lie_bracket_basis(vec)
    dim = len(basis)
    cols = ex.qarray([[x for x in b.ravel().tolist()] for b in basis]).T
    solver = ex.CoordinateSolver(cols)

    def ad(x):
        out = ex.zeros(dim)
        for k, b in enumerate(basis):
            out[:, k] = solver(ex.comm(x, b).ravel().tolist())
        return out

    root_e = {a: ad(vec.root_e[a]) for a in rs.positive_roots}
    root_f = {a: ad(vec.root_f[a]) for a in rs.positive_roots}
    root_h = {a: ad(vec.root_h[a]) for a in rs.positive_roots}
    return Representation(rs, dim, "adjoint", root_e, root_f, root_h)


def _polynomial_functor(vec: Representation, degree: int, alternating: bool, kind: str) -> Representation:
    """Sym^k or Lambda^k of the vector representation in the monomial basis."""
    n = vec.dim
    if alternating:
        monomials = list(itertools.combinations(range(n), degree))
    else:
        monomials = list(itertools.combinations_with_replacement(range(n), degree))
    index = {m: k for k, m in enumerate(monomials)}
    dim = len(monomials)

    def normal_form(word):
        if not alternating:
            return tuple(sorted(word)), 1
        if len(set(word)) < len(word):
            return None, 0
        sign = 1
        w = list(word)
        for i in range(len(w)):
            for j in range(len(w) - 1 - i):
                if w[j] > w[j + 1]:
                    w[j], w[j + 1] = w[j + 1], w[j]
                    sign = -sign
        return tuple(w), sign

    def act(x):
        out = ex.zeros(dim)
        nz = [(i, j, x[i, j]) for i in range(n) for j in range(n) if x[i, j] != 0]
        for col, mono in enumerate(monomials):
            for pos, b in enumerate(mono):
                for i, j, val in nz:
                    if j != b:
                        continue
                    word = list(mono)
                    word[pos] = i
                    key, sign = normal_form(word)
                    if key is None:
                        continue
                    out[index[key], col] += sign * val
        return out

    rs = vec.root_system
    center = act(vec.center) if vec.center is not None else None
    return Representation(
        rs,
        dim,
        kind,
        {a: act(m) for a, m in vec.root_e.items()},
        {a: act(m) for a, m in vec.root_f.items()},
        {a: act(m) for a, m in vec.root_h.items()},
        center,
        vec.center_norm,
    )


def tensor(v: Representation, w: Representation, cap: int = DEFAULT_DIM_CAP) -> Representation:
    """Tensor product with the Leibniz (coproduct) action."""
    _check_cap(v.dim * w.dim, cap)
    iv, iw = ex.eye(v.dim), ex.eye(w.dim)

    def lift(a, b):
        return ex.kron(a, iw) + ex.kron(iv, b)

    center = None
    if v.center is not None and w.center is not None:
        center = lift(v.center, w.center)
    factors = (v.factors or (v,)) + (w.factors or (w,))
    return Representation(
        v.root_system,
        v.dim * w.dim,
        f"({v.kind})x({w.kind})",
        {a: lift(v.root_e[a], w.root_e[a]) for a in v.root_e},
        {a: lift(v.root_f[a], w.root_f[a]) for a in v.root_f},
        {a: lift(v.root_h[a], w.root_h[a]) for a in v.root_h},
        center,
        v.center_norm,
        factors,
    )


def parse_kind(kind) -> tuple[str, int | None]:
    """Accepts 'vector', 'adjoint', 'sym(3)', 'ext(2)', 'tensor_power(3)' or tuples."""
    if isinstance(kind, tuple):
        return kind[0], kind[1] if len(kind) > 1 else None
    kind = kind.strip().lower().replace(" ", "")
    if "(" in kind:
        name, arg = kind.rstrip(")").split("(", 1)
        return name, int(arg)
    return kind, None


def build_rep(rs: RootSystem, kind="vector", gl: bool = False, cap: int = DEFAULT_DIM_CAP) -> Representation:
    """Build a finite-dimensional representation of the classical algebra.

    ``kind`` is one of ``vector``, ``adjoint``, ``sym(k)``, ``ext(k)`` or
    ``tensor_power(n)`` (tensor power of the vector representation). With
    ``gl=True`` (type A only) the identity of gl_{r+1} is added, so that the
    module is a gl-module.
    """
    name, arg = parse_kind(kind)
    vec_dim = _vector_dim(rs.series, rs.rank)
    if name == "vector":
        return _vector_rep(rs, gl)
    if name == "adjoint":
        if gl:
            raise ValueError("gl adjoint is not supported")
        return _adjoint_rep(rs)
    if name in ("sym", "ext"):
        from math import comb

        if arg is None or arg < 0:
            raise ValueError(f"{name} needs a non-negative degree")
        dim = comb(vec_dim + arg - 1, arg) if name == "sym" else comb(vec_dim, arg)
        _check_cap(dim, cap)
        return _polynomial_functor(_vector_rep(rs, gl), arg, name == "ext", f"{name}({arg})")
    if name == "tensor_power":
        if arg is None or arg < 1:
            raise ValueError("tensor_power needs n >= 1")
        _check_cap(vec_dim**arg, cap)
        vec = _vector_rep(rs, gl)
        out = vec
        for _ in range(arg - 1):
            out = tensor(out, vec, cap)
        return Representation(
            rs, out.dim, f"tensor_power({arg})", out.root_e, out.root_f, out.root_h,
            out.center, out.center_norm, (vec,) * arg,
        )
    raise ValueError(f"unknown representation kind {kind!r}")


def sl2_irrep(m: int) -> Representation:
    """Irreducible sl2-module of highest weight m (dimension m + 1)."""
    rs = build_root_system("A", 1)
    if m == 0:
        z = ex.zeros(1)
        a = rs.simple_root(0)
        return Representation(rs, 1, "sym(0)", {a: z}, {a: z}, {a: z})
    return build_rep(rs, f"sym({m})")


# ---------------------------------------------------------------------------
# Casimirs, Omega, Tits lifts
# ---------------------------------------------------------------------------

def casimir_op(rep: Representation, alpha) -> np.ndarray:
    """C_alpha = <alpha,alpha>/2 (e f + f e + h^2 / 2)."""
    alpha = tuple(alpha)
    rs = rep.root_system
    if alpha not in rep.root_e:
        raise ValueError(f"{alpha} is not a positive root of {rs.name}")
    e, f, h = rep.root_e[alpha], rep.root_f[alpha], rep.root_h[alpha]
    return (ex.mul(e, f) + ex.mul(f, e) + ex.mul(h, h) / 2) * (rs.norm2(alpha) / 2)


def full_casimir(rep: Representation) -> np.ndarray:
    out = ex.zeros(rep.dim)
    for x, y in rep.casimir_pairs():
        out = out + ex.mul(x, y)
    return out


def _embed_pair(op: np.ndarray, d: int, n: int, i: int, j: int) -> np.ndarray:
    """Operator acting on tensor factors i, j (0-based) of (C^d)^{tensor n}."""
    total = d**n
    out = ex.zeros(total)
    entries: dict = {}
    for r in range(d * d):
        for c in range(d * d):
            v = op[r, c]
            if v != 0:
                entries.setdefault(divmod(c, d), []).append((divmod(r, d), v))
    for col, idx in enumerate(itertools.product(range(d), repeat=n)):
        for (a, b), v in entries.get((idx[i], idx[j]), []):
            new = list(idx)
            new[i], new[j] = a, b
            row = 0
            for x in new:
                row = row * d + x
            out[row, col] += v
    return out


def omega_two(rep: Representation) -> np.ndarray:
    """Omega = sum_a X_a (x) X^a on V (x) V."""
    out = ex.zeros(rep.dim**2)
    for x, y in rep.casimir_pairs():
        out = out + ex.kron(x, y)
    return out


def omega_pair(rep: Representation, i: int, j: int, n: int, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Omega_ij on V^{tensor n}; tensor factors are numbered from 1."""
    if not 1 <= i < j <= n:
        raise ValueError("need 1 <= i < j <= n")
    _check_cap(rep.dim**n, cap)
    return _embed_pair(omega_two(rep), rep.dim, n, i - 1, j - 1)


def permutation_operator(d: int, n: int, perm) -> np.ndarray:
    """Operator sending e_{k_1} (x) ... (x) e_{k_n} to the tensor with factor p
    moved to position perm[p] (perm is 0-based)."""
    total = d**n
    out = ex.zeros(total)
    for col, idx in enumerate(itertools.product(range(d), repeat=n)):
        new = [0] * n
        for p in range(n):
            new[perm[p]] = idx[p]
        row = 0
        for x in new:
            row = row * d + x
        out[row, col] = Fraction(1)
    return out


def transposition_operator(d: int, n: int, i: int, j: int) -> np.ndarray:
    """(i j) on V^{tensor n}, factors numbered from 1."""
    perm = list(range(n))
    perm[i - 1], perm[j - 1] = j - 1, i - 1
    return permutation_operator(d, n, perm)


def invariant_form(rep: Representation) -> np.ndarray:
    """Matrix J of the invariant bilinear form of an so/sp vector representation."""
    rs = rep.root_system
    r = rs.rank
    n = rep.dim
    j = ex.zeros(n)
    if rs.series == "C":
        for i in range(r):
            j[i, r + i] = Fraction(1)
            j[r + i, i] = Fraction(-1)
    elif rs.series in ("B", "D"):
        for i in range(r):
            j[i, r + i] = Fraction(1)
            j[r + i, i] = Fraction(1)
        if rs.series == "B":
            j[2 * r, 2 * r] = Fraction(1)
    else:
        raise ValueError("type A has no invariant bilinear form on the vector representation")
    return j


def invariant_projection(rep: Representation) -> np.ndarray:
    """g-equivariant projection of V (x) V onto the invariant line of an so/sp vector rep.

    With J the invariant form, the invariant tensor is v_0 = sum (J^{-1})_{ab} e_a (x) e_b
    and the projection is v_0 <J, .> / <J, v_0>.
    """
    j = invariant_form(rep)
    jinv = ex.inverse(j)
    n = rep.dim
    v0 = jinv.reshape(n * n, 1)
    functional = j.reshape(1, n * n)
    norm = ex.mul(functional, v0)[0, 0]
    return ex.mul(v0, functional) / norm


@dataclass(frozen=True)
class TitsLift:
    """s~_i = exp(e_i) exp(-f_i) exp(e_i) for each simple root."""

    representation: Representation
    matrices: tuple

    def inverse(self, i: int) -> np.ndarray:
        """s~_i^{-1} = exp(-e_i) exp(f_i) exp(-e_i)."""
        rep = self.representation
        a = ex.nilpotent_exp(-rep.E[i])
        b = ex.nilpotent_exp(rep.F[i])
        return ex.mul_chain(a, b, a)


def reflection_lift(rep: Representation, alpha) -> np.ndarray:
    """exp(e_a) exp(-f_a) exp(e_a) for any positive root alpha."""
    alpha = tuple(alpha)
    a = ex.nilpotent_exp(rep.root_e[alpha])
    b = ex.nilpotent_exp(-rep.root_f[alpha])
    return ex.mul_chain(a, b, a)


def tits_lift(rep: Representation) -> TitsLift:
    rs = rep.root_system
    mats = tuple(reflection_lift(rep, rs.simple_root(i)) for i in range(rs.rank))
    return TitsLift(rep, mats)


def alternating_product(mats, i: int, j: int, m: int) -> np.ndarray:
    out = ex.eye(mats[0].shape[0])
    for k in range(m):
        out = ex.mul(out, mats[i] if k % 2 == 0 else mats[j])
    return out
