"""Batch job runner.

    holonome --task hecke --algebra A1 --rep vector --n 3 --h 0.1
    holonome --job job.json --out report.json
    holonome --suite paper-exact
    holonome --describe bmw

Exit status: 0 when every check passed, 1 when a check failed, 2 on invalid
input.
"""
from __future__ import annotations

import argparse
import cmath
import json
import os
import pickle
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from . import connections as cn
from . import duality as du
from . import exact as ex
from . import liecore as lc
from . import quantum as qu
from . import transport as tr

SCHEMA = "1"
EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

TASKS = (
    "flatness",
    "monodromy",
    "spectra",
    "hecke",
    "bmw",
    "braid-relations",
    "kd-compare",
    "qweyl",
    "rmatrix",
    "v0-check",
    "duality-check",
    "schur-weyl",
    "omega",
    "transport-check",
    "classical-limit",
)

DESCRIPTIONS = {
    "flatness": (
        "Kohno criterion: [r_j, sum_{j' in J} r_j'] = 0 for every maximal family J of hyperplanes\n"
        "whose forms span a plane. connection = kz | casimir | ckz. Exact by default.\n"
        "Flags: --algebra, --rep, --n (kz), --perturb (adds e_alpha to one residue)."
    ),
    "monodromy": (
        "Braid group monodromy rho(T_i) = (i i+1) . transport (KZ) or rho(S_i) = s~_i . transport\n"
        "(Casimir, Tits lifts). Reports generator spectra and braid residuals."
    ),
    "spectra": "Generator spectra compared with the local model symmetry_i . exp(pi i r_i).",
    "hecke": (
        "(T_i - q)(T_i + q^-1) = 0 with q = exp(i pi h), for gl_m vector KZ monodromy\n"
        "(or Coxeter-KZ with q_i = exp(i pi k_i))."
    ),
    "bmw": (
        "Cubic relation (T - q)(T + q^-1)(T - r^-1) = 0 and tangle relations\n"
        "E_i T_j^{+-1} E_i = r^{+-1} E_i, E_i = 1 - (T_i - T_i^-1)/(q - q^-1),\n"
        "with q = exp(i pi h) and r = eps exp(i pi h (dim V - eps)), eps = +1 orthogonal, -1 symplectic."
    ),
    "braid-relations": "Max residual of the m_ij-fold braid relations of the monodromy generators.",
    "kd-compare": (
        "Conjugation-invariant comparison (spectra and traces over braid words) of monodromy with\n"
        "the quantum group side. Substitution: hbar = 2 pi i h and q = exp(kappa hbar);\n"
        "kappa = 1/2 for KZ against R-matrices, kappa = 1 for Casimir against quantum Weyl elements."
    ),
    "qweyl": (
        "Quantum Weyl elements S_i = exp_{q^-1}(q^-1 E q^-H) exp_{q^-1}(-F) exp_{q^-1}(q E q^H);\n"
        "checks braid relations and the weight-space mapping."
    ),
    "rmatrix": "R-matrix braid operators on M^{tensor n}: Yang-Baxter and commutation with U_q.",
    "v0-check": "C_alpha = <alpha, alpha>(1 - s_alpha) on V[[0]] = {v in V[0] : e_alpha^2 v = 0}, exactly.",
    "duality-check": (
        "sl_n Casimir residues on M_lambda^mu against sl_k KZ residues: C_ij - 2 Omega_ij is scalar\n"
        "on each block (scalars reported)."
    ),
    "schur-weyl": "dim V_{lambda^t}[0] (sl_n) against the hook length dimension of U_lambda, all lambda |- n.",
    "omega": "Omega_12 against (1 2) for gl_m, (1 2) - n p_0 for so_n and (1 2) - 2n q_0 for sp_2n.",
    "transport-check": "Inverse path, homotopy invariance and tolerance refinement of parallel transport.",
    "classical-limit": "log-log slope of |R_check(1+eps) - flip| and |S_i(1+eps) - s~_i| in eps.",
}


class InvalidJob(ValueError):
    pass


# ---------------------------------------------------------------------------
# Job description
# ---------------------------------------------------------------------------

def _complex(value, name):
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidJob(f"{name} must be a number or [re, im]")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError as err:
            raise InvalidJob(f"cannot parse {name}={value!r}") from err
    return complex(value)


@dataclass
class JobSpec:
    task: str
    algebra: str | None = None
    rep: str = "vector"
    connection: str | None = None
    n: int | None = None
    h: complex = 0.1
    q: complex | None = None
    tol: float = 1e-10
    lam: tuple | None = None
    mu: tuple | None = None
    k: int | None = None
    words: list | None = None
    normalization: str | None = None
    gl: bool | None = None
    perturb: bool = False
    fixed_step: int | None = None
    workers: int = 1
    kappa: float | None = None
    bound: float | None = None
    full_dump: bool = False
    out: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "JobSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidJob(f"unknown job fields: {sorted(unknown)}")
        if "task" not in data:
            raise InvalidJob("job has no task")
        spec = cls(**data)
        spec.validate()
        return spec

    def validate(self) -> None:
        if self.task not in TASKS:
            raise InvalidJob(f"unknown task {self.task!r}")
        self.h = _complex(self.h, "h")
        self.q = _complex(self.q, "q")
        if not (isinstance(self.tol, (int, float)) and self.tol > 0):
            raise InvalidJob("tol must be positive")
        if self.workers < 1:
            raise InvalidJob("workers must be at least 1")
        if self.algebra is not None:
            try:
                lc.parse_algebra(self.algebra)
            except ValueError as err:
                raise InvalidJob(str(err)) from err
        needs_algebra = {"flatness", "monodromy", "spectra", "braid-relations", "v0-check", "omega", "bmw"}
        if self.task in needs_algebra and self.algebra is None:
            raise InvalidJob(f"task {self.task} needs an algebra")
        if self.task == "bmw" and lc.parse_algebra(self.algebra)[0] == "A":
            raise InvalidJob("bmw needs an orthogonal or symplectic algebra")
        if self.task in ("duality-check",) and (self.lam is None or self.mu is None):
            raise InvalidJob("duality-check needs lam and mu")
        if self.task == "schur-weyl" and self.n is None:
            raise InvalidJob("schur-weyl needs n")
        if self.connection is not None and self.connection not in ("kz", "casimir", "ckz"):
            raise InvalidJob(f"unknown connection {self.connection!r}")
        if self.n is not None and self.n < 1:
            raise InvalidJob("n must be positive")
        if self.lam is not None:
            self.lam = tuple(int(x) for x in self.lam)
        if self.mu is not None:
            self.mu = tuple(int(x) for x in self.mu)


# ---------------------------------------------------------------------------
# Cached constructions
# ---------------------------------------------------------------------------

def _cache_dir():
    path = os.environ.get("HOLONOME_CACHE")
    if path:
        os.makedirs(path, exist_ok=True)
    return path


def cached_rep(algebra: str, kind: str, normalization: str = "basic", gl: bool = False) -> lc.Representation:
    """build_rep memoized on disk under $HOLONOME_CACHE when set."""
    key = f"rep-{algebra}-{kind}-{normalization}-{int(gl)}".replace("(", "_").replace(")", "")
    cache = _cache_dir()
    path = os.path.join(cache, key + ".pkl") if cache else None
    if path and os.path.exists(path):
        try:
            with open(path, "rb") as fh:
                return pickle.load(fh)
        except (OSError, pickle.UnpicklingError, EOFError):
            pass
    series, rank = lc.parse_algebra(algebra)
    rep = lc.build_rep(lc.build_root_system(series, rank, normalization), kind, gl=gl)
    if path:
        fd, tmp = tempfile.mkstemp(dir=cache, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            pickle.dump(rep, fh)
        os.replace(tmp, path)
    return rep


def _kz_defaults(spec: JobSpec) -> tuple[str, bool]:
    """KZ jobs use the trace form (gl_m for type A) so that q = exp(i pi h)."""
    series, _ = lc.parse_algebra(spec.algebra)
    norm = spec.normalization or "trace"
    gl = spec.gl if spec.gl is not None else series == "A"
    return norm, gl


def _rep_for(spec: JobSpec, conn_kind: str) -> lc.Representation:
    if conn_kind == "kz":
        norm, gl = _kz_defaults(spec)
    else:
        norm, gl = spec.normalization or "basic", bool(spec.gl)
    return cached_rep(spec.algebra, spec.rep, norm, gl)


def _connection_kind(spec: JobSpec) -> str:
    if spec.connection:
        return spec.connection
    return "kz" if spec.n is not None else "casimir"


def build_connection(spec: JobSpec, h=None, verify: bool = True):
    """(connection, equivariance) for a job."""
    kind = _connection_kind(spec)
    h = spec.h if h is None else h
    if kind == "kz":
        rep = _rep_for(spec, "kz")
        n = spec.n or 3
        conn = cn.build_kz(rep, n, h, verify=verify)
        return conn, tr.permutation_equivariance(rep.dim, n)
    if kind == "casimir":
        rep = _rep_for(spec, "casimir")
        conn = cn.build_casimir(rep, h, verify=verify)
        return conn, tr.tits_equivariance(lc.tits_lift(rep))
    series, rank = lc.parse_algebra(spec.algebra)
    rs = lc.build_root_system(series, rank)
    refl = cn.reflection_rep(rs)
    conn = cn.build_ckz(rs, refl, h, verify=verify)
    return conn, tr.reflection_equivariance(rs, refl)


# ---------------------------------------------------------------------------
# Tasks
# ---------------------------------------------------------------------------

def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _mat_json(m, spec: JobSpec):
    if m.shape[0] > 64 and not spec.full_dump:
        return None
    if m.dtype == object:
        return ex.to_json(m)
    return tr.monodromy.complex_matrix_json(m)


def _monodromy(spec: JobSpec, conn, eq):
    return tr.monodromy_rep(conn, eq, tol=spec.tol, workers=spec.workers, fixed_steps=spec.fixed_step)


def task_flatness(spec: JobSpec) -> dict:
    conn, _ = build_connection(spec, h=1, verify=False)
    if spec.perturb:
        res = list(conn.residues)
        kind = _connection_kind(spec)
        if kind == "casimir":
            rep = _rep_for(spec, "casimir")
            res[0] = res[0] + rep.root_e[rep.root_system.positive_roots[0]]
        else:
            d = conn.fiber_dim
            bump = ex.zeros(d)
            bump[0, d - 1] = Fraction(1)
            res[0] = res[0] + bump
        conn = cn.FlatConnection(conn.arrangement, tuple(res), conn.h, conn.weights, conn.labels, conn.kind)
    report = cn.kohno_flatness_check(conn)
    return {"passed": report.passed, "flatness": report.to_json(), "fiber_dim": conn.fiber_dim,
            "families": [list(f) for f in cn.coplanar_families(conn.arrangement)]}


def task_monodromy(spec: JobSpec) -> dict:
    conn, eq = build_connection(spec)
    rep = _monodromy(spec, conn, eq)
    braid = tr.verify_braid_relations(rep)
    bound = spec.bound or 1e-8
    out = rep.to_json(max_dim=10**9 if spec.full_dump else 64)
    return {"passed": braid.passed(bound), "bound": bound, "braid": braid.to_json(), "monodromy": out}


task_braid_relations = task_monodromy


def task_spectra(spec: JobSpec) -> dict:
    conn, eq = build_connection(spec)
    rep = _monodromy(spec, conn, eq)
    bound = spec.bound or 1e-6
    rows = []
    for i, g in enumerate(rep.generator_images):
        model = tr.local_model(conn, eq, i)
        dist = tr.spectral_distance(np.linalg.eigvals(g), np.linalg.eigvals(model))
        rows.append({"generator": i + 1, "spectrum": [_cjson(z) for z in tr.spectrum(g)], "deviation": dist})
    worst = max(r["deviation"] for r in rows)
    return {"passed": worst <= bound, "bound": bound, "max_deviation": worst, "generators": rows}


def task_hecke(spec: JobSpec) -> dict:
    if spec.algebra is None:
        spec.algebra = "A1"
    if spec.n is None and spec.connection != "ckz":
        spec.n = 3
    conn, eq = build_connection(spec)
    rep = _monodromy(spec, conn, eq)
    q = spec.q if spec.q is not None else tr.hecke_parameter(spec.h)
    res = tr.hecke_check(rep, q)
    bound = spec.bound or 1e-6
    return {"passed": res.passed(bound), "bound": bound, "q": _cjson(q), "hecke": res.to_json(),
            "spectra": [[_cjson(z) for z in tr.spectrum(g)] for g in rep.generator_images]}


def task_bmw(spec: JobSpec) -> dict:
    spec.connection = "kz"
    spec.n = spec.n or 3
    series, _ = lc.parse_algebra(spec.algebra)
    conn, eq = build_connection(spec)
    rep = _monodromy(spec, conn, eq)
    q = spec.q if spec.q is not None else tr.hecke_parameter(spec.h)
    dim = conn.fiber_dim
    vdim = round(dim ** (1 / spec.n))
    r = tr.bmw_r(spec.h, vdim, series in ("B", "D"))
    res = tr.bmw_check(rep, q, r)
    bound = spec.bound or 1e-6
    return {"passed": res.passed(bound), "bound": bound, "q": _cjson(q), "r": _cjson(r), "bmw": res.to_json()}


def task_kd_compare(spec: JobSpec) -> dict:
    spec.algebra = spec.algebra or "A1"
    series, rank = lc.parse_algebra(spec.algebra)
    kind = spec.connection or ("kz" if spec.n is not None or spec.rep == "vector" and rank > 1 else "casimir")
    bound = spec.bound or 1e-6
    hbar = 2j * cmath.pi * spec.h
    if kind == "kz":
        if series != "A":
            raise InvalidJob("kd-compare with KZ is implemented for type A vector representations")
        spec.connection, spec.n = "kz", spec.n or 3
        kappa = 0.5 if spec.kappa is None else spec.kappa
        q = cmath.exp(kappa * hbar)
        conn, eq = build_connection(spec)
        _, gl = _kz_defaults(spec)
        qside = qu.rmat_rep(qu.uq_sln_vector(rank + 1, q, gl=gl), spec.n)
    else:
        if (series, rank) != ("A", 1):
            raise InvalidJob("kd-compare with the Casimir connection is implemented for sl2")
        spec.connection = "casimir"
        kappa = 1.0 if spec.kappa is None else spec.kappa
        q = cmath.exp(kappa * hbar)
        conn, eq = build_connection(spec)
        m = conn.fiber_dim - 1
        qside = qu.qweyl_op(qu.uq_sl2_module(m, q), "casimir").matrices
    rep = _monodromy(spec, conn, eq)
    words = [tuple(int(x) - 1 for x in w) for w in spec.words] if spec.words else None
    report = tr.kd_compare(rep, qside, words=words, tol=bound,
                           substitution=f"hbar = 2 pi i h, q = exp({kappa} hbar)")
    return {"passed": report.passed, "bound": bound, "q": _cjson(q), "kd": report.to_json()}


def _qmodule(spec: JobSpec, q) -> qu.QModule:
    series, rank = lc.parse_algebra(spec.algebra or "A1")
    if series != "A":
        raise InvalidJob("quantum modules are implemented for type A")
    name, arg = lc.parse_kind(spec.rep)
    if rank == 1 and name == "sym":
        base = qu.uq_sl2_module(arg, q)
    elif name == "vector":
        base = qu.uq_sln_vector(rank + 1, q, gl=bool(spec.gl))
    else:
        raise InvalidJob("quantum modules: vector (any rank) or sym(m) (rank 1)")
    return base


def task_qweyl(spec: JobSpec) -> dict:
    q = spec.q if spec.q is not None else cmath.exp(0.2)
    base = _qmodule(spec, q)
    mod = qu.q_tensor_power(base, spec.n) if spec.n else base
    op = qu.qweyl_op(mod, spec.normalization or "triple")
    braid = tr.braid_residuals(op.matrices, mod.root_system.coxeter_orders)
    wmap = max(qu.weight_map_residual(mod, s, i) for i, s in enumerate(op.matrices))
    bound = spec.bound or 1e-10
    return {"passed": braid.passed(bound) and wmap <= bound, "bound": bound, "braid": braid.to_json(),
            "weight_map_residual": wmap, "relations_residual": mod.relation_residual(),
            "matrices": [_mat_json(s, spec) for s in op.matrices]}


def task_rmatrix(spec: JobSpec) -> dict:
    q = spec.q if spec.q is not None else cmath.exp(0.2)
    base = _qmodule(spec, q)
    n = spec.n or 3
    rm = qu.r_matrix(base, base)
    gens = qu.rmat_rep(base, n)
    coxeter = [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n - 1)] for i in range(n - 1)]
    braid = tr.braid_residuals(gens, coxeter)
    bound = spec.bound or 1e-10
    return {"passed": braid.passed(bound) and rm.intertwining_residual <= bound, "bound": bound,
            "yang_baxter": braid.to_json(), "intertwining_residual": rm.intertwining_residual,
            "spectrum": [_cjson(z) for z in tr.spectrum(rm.Rcheck)], "Rcheck": _mat_json(rm.Rcheck, spec)}


def task_v0(spec: JobSpec) -> dict:
    rep = cached_rep(spec.algebra, spec.rep, spec.normalization or "basic")
    report = cn.check_v0_identity(rep)
    return {"passed": report.passed, "v0": report.to_json()}


def task_duality(spec: JobSpec) -> dict:
    n = len(spec.mu)
    k = spec.k or len(spec.lam)
    report = du.residue_match_check(k, n, spec.lam, spec.mu)
    return {"passed": report.passed, "duality": report.to_json()}


def task_schur_weyl(spec: JobSpec) -> dict:
    lams = [spec.lam] if spec.lam else du.partitions(spec.n)
    rows = []
    for lam in lams:
        a, b = du.schur_weyl_zero_weight(spec.n, lam)
        rows.append({"lambda": list(lam), "zero_weight_dim": a, "hook_dim": b, "equal": a == b})
    return {"passed": all(r["equal"] for r in rows), "pairs": rows}


def task_omega(spec: JobSpec) -> dict:
    series, rank = lc.parse_algebra(spec.algebra)
    rep = cached_rep(spec.algebra, "vector", "trace", series == "A")
    d = rep.dim
    omega = lc.omega_pair(rep, 1, 2, 2)
    target = lc.transposition_operator(d, 2, 1, 2)
    if series != "A":
        target = target - lc.invariant_projection(rep) * d
    ok = bool((omega == target).all())
    return {"passed": ok, "dim": d, "expected": "(1 2)" if series == "A" else f"(1 2) - {d} p_0"}


TRANSPORT_JOBS = (
    {"connection": "kz", "algebra": "A1", "n": 3, "h": 0.1},
    {"connection": "kz", "algebra": "A1", "n": 4, "h": 0.2},
    {"connection": "casimir", "algebra": "A2", "rep": "vector", "h": 0.1},
    {"connection": "casimir", "algebra": "B2", "rep": "adjoint", "h": 0.15},
    {"connection": "ckz", "algebra": "A3", "h": 0.3},
)
SWEEP_TOLS = tuple(1e-5 / 2**k for k in range(5))


def _first_braid_path(spec: JobSpec, conn, eta: float = 1.0):
    if _connection_kind(spec) == "kz":
        return tr.braid_path_config(spec.n or 3, 1, eta=eta, forms=conn.arrangement)
    series, rank = lc.parse_algebra(spec.algebra)
    return tr.braid_path_cartan(lc.build_root_system(series, rank), 0, eta=eta)


def _transport_props(spec: JobSpec) -> dict:
    conn, _ = build_connection(spec)
    tol = spec.tol
    p = _first_braid_path(spec, conn)
    fwd = tr.parallel_transport(conn, p, tol, fixed_steps=spec.fixed_step)
    back = tr.parallel_transport(conn, p.reversed(), tol, fixed_steps=spec.fixed_step)
    low = tr.parallel_transport(conn, _first_braid_path(spec, conn, 0.5), tol, fixed_steps=spec.fixed_step)
    inv_res = float(np.abs(back.matrix @ fwd.matrix - np.eye(conn.fiber_dim)).max())
    homo = float(np.abs(low.matrix - fwd.matrix).max())
    return {"passed": inv_res <= 2 * tol and homo <= 2 * tol, "tol": tol, "inverse_residual": inv_res,
            "homotopy_residual": homo, "sweep_errors": tr.tolerance_sweep(conn, p, SWEEP_TOLS)}


def task_transport_check(spec: JobSpec) -> dict:
    """Inverse path and homotopy checks; without an algebra, the fixed 5-job set
    plus monotonicity, as tol is halved, of the worst err_estimate and the worst
    error against a tight reference over the set."""
    if spec.algebra is not None:
        out = _transport_props(spec)
        out.pop("sweep_errors")
        return out
    rows = []
    for job in TRANSPORT_JOBS:
        sub = JobSpec.from_dict({"task": "transport-check", "tol": spec.tol, **job})
        sub.fixed_step = spec.fixed_step
        rows.append({"job": _spec_json(sub), **_transport_props(sub)})
    est = [max(r["sweep_errors"][k][0] for r in rows) for k in range(len(SWEEP_TOLS))]
    err = [max(r["sweep_errors"][k][1] for r in rows) for k in range(len(SWEEP_TOLS))]
    monotone = all(b <= a for seq in (est, err) for a, b in zip(seq, seq[1:]))
    return {"passed": monotone and all(r["passed"] for r in rows), "monotone": monotone,
            "sweep_tols": list(SWEEP_TOLS), "sweep_err_estimate": est, "sweep_error": err, "jobs": rows}


def task_classical_limit(spec: JobSpec) -> dict:
    eps = (1e-2, 1e-3, 1e-4)
    # S_i is q-independent on V_1, so the limit is probed on V_2
    m = spec.n or 2
    rn, sn = [], []
    tits = qu.tits_matrices(qu.uq_sl2_module(m, 1.0))[0]
    d = m + 1
    for e in eps:
        M = qu.uq_sl2_module(m, 1 + e)
        rn.append(float(np.abs(qu.r_matrix(M, M).Rcheck - qu.flip(d, d)).max()))
        sn.append(float(np.abs(qu.qweyl_element(M, 0) - tits).max()))
    slope_r = float(np.polyfit(np.log(eps), np.log(rn), 1)[0])
    slope_s = float(np.polyfit(np.log(eps), np.log(sn), 1)[0])
    ok = abs(slope_r - 1) <= 0.2 and abs(slope_s - 1) <= 0.2
    return {"passed": ok, "slope_R": slope_r, "slope_S": slope_s, "norms_R": rn, "norms_S": sn}


HANDLERS = {
    "flatness": task_flatness,
    "monodromy": task_monodromy,
    "braid-relations": task_braid_relations,
    "spectra": task_spectra,
    "hecke": task_hecke,
    "bmw": task_bmw,
    "kd-compare": task_kd_compare,
    "qweyl": task_qweyl,
    "rmatrix": task_rmatrix,
    "v0-check": task_v0,
    "duality-check": task_duality,
    "schur-weyl": task_schur_weyl,
    "omega": task_omega,
    "transport-check": task_transport_check,
    "classical-limit": task_classical_limit,
}


def execute(spec: JobSpec) -> dict:
    t0 = time.perf_counter()
    try:
        result = HANDLERS[spec.task](spec)
    except (ValueError, lc.DimensionError) as err:
        if isinstance(err, InvalidJob):
            raise
        raise InvalidJob(str(err)) from err
    result["runtime_s"] = time.perf_counter() - t0
    return result


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

SUITES = {
    "paper-exact": [
        {"task": "flatness", "connection": "kz", "algebra": "A1", "n": 3},
        {"task": "flatness", "connection": "kz", "algebra": "A1", "n": 4},
        {"task": "flatness", "connection": "kz", "algebra": "A2", "n": 3},
        {"task": "flatness", "connection": "kz", "algebra": "A2", "n": 4},
        *[
            {"task": "flatness", "connection": "casimir", "algebra": a, "rep": r}
            for a in ("A1", "A2", "A3", "B2")
            for r in ("vector", "adjoint")
        ],
        {"task": "flatness", "connection": "ckz", "algebra": "A2", "h": 0.1},
        {"task": "flatness", "connection": "ckz", "algebra": "A3", "h": 0.1},
        *[{"task": "omega", "algebra": a} for a in ("A1", "A2", "B1", "B2", "C1", "C2")],
        {"task": "v0-check", "algebra": "A1", "rep": "adjoint"},
        {"task": "v0-check", "algebra": "A2", "rep": "adjoint"},
        {"task": "v0-check", "algebra": "B2", "rep": "vector"},
        {"task": "v0-check", "algebra": "A2", "rep": "tensor_power(3)"},
        {"task": "duality-check", "lam": [1, 1], "mu": [1, 1]},
        {"task": "duality-check", "lam": [2, 0], "mu": [1, 1]},
        {"task": "duality-check", "lam": [2, 0], "mu": [2, 0]},
        {"task": "duality-check", "lam": [2, 1, 0], "mu": [1, 1, 1]},
        *[{"task": "schur-weyl", "n": n} for n in range(1, 6)],
    ],
    "paper-numeric": [
        {"task": "hecke", "algebra": "A1", "n": 3, "h": 0.05},
        {"task": "hecke", "algebra": "A1", "n": 3, "h": 0.1},
        {"task": "bmw", "algebra": "B1", "n": 3, "h": 0.1},
        {"task": "braid-relations", "connection": "kz", "algebra": "A1", "n": 4, "h": 0.1, "gl": False,
         "normalization": "basic"},
        {"task": "braid-relations", "connection": "casimir", "algebra": "A2", "rep": "vector", "h": 0.1},
        {"task": "braid-relations", "connection": "casimir", "algebra": "A2", "rep": "adjoint", "h": 0.1},
        {"task": "qweyl", "algebra": "A2", "rep": "vector", "n": 3, "q": 1.2214027581601699},
        {"task": "rmatrix", "algebra": "A2", "rep": "vector", "n": 3, "q": 1.2214027581601699},
        *[
            {"task": "kd-compare", "connection": "casimir", "algebra": "A1", "rep": f"sym({m})", "h": h}
            for m in (1, 2, 3)
            for h in (0.02, 0.05)
        ],
        {"task": "kd-compare", "connection": "kz", "algebra": "A1", "n": 3, "h": 0.05},
        {"task": "transport-check", "tol": 1e-10},
        {"task": "classical-limit"},
    ],
}
SUITES["all"] = SUITES["paper-exact"] + SUITES["paper-numeric"]


def run_suite(name: str, workers: int = 1, fixed_step: int | None = None) -> tuple[dict, int]:
    if name not in SUITES:
        raise InvalidJob(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    specs = []
    for job in SUITES[name]:
        spec = JobSpec.from_dict(dict(job))
        spec.fixed_step = fixed_step
        specs.append(spec)

    def one(spec):
        try:
            res = execute(spec)
        except Exception as err:  # noqa: BLE001 - a crashing job is a failed check here
            res = {"passed": False, "error": f"{type(err).__name__}: {err}"}
        res["job"] = _spec_json(spec)
        return res

    t0 = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, specs))
    else:
        results = [one(s) for s in specs]
    passed = all(r["passed"] for r in results)
    report = {"schema": SCHEMA, "suite": name, "passed": passed, "jobs": results,
              "n_jobs": len(results), "n_failed": sum(not r["passed"] for r in results),
              "runtime_s": time.perf_counter() - t0}
    return report, EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _spec_json(spec: JobSpec) -> dict:
    out = {}
    for k, v in asdict(spec).items():
        if v is None or k == "out":
            continue
        out[k] = _cjson(v) if isinstance(v, complex) else (list(v) if isinstance(v, tuple) else v)
    return out


def write_report(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default)
    if path is None:
        sys.stdout.write(text + "\n")
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".holonome-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_default(obj):
    if isinstance(obj, complex):
        return _cjson(obj)
    if isinstance(obj, Fraction):
        return ex.fraction_str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holonome", description="Flat connections, monodromy and quantum checks.")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--job", help="JSON job file")
    mode.add_argument("--suite", help="paper-exact | paper-numeric | all")
    mode.add_argument("--describe", metavar="TASK", help="print what a task checks")
    p.add_argument("--task", choices=TASKS)
    p.add_argument("--algebra", help="series and rank, e.g. A2")
    p.add_argument("--rep", help="vector | adjoint | sym(k) | ext(k) | tensor_power(n)")
    p.add_argument("--connection", choices=("kz", "casimir", "ckz"))
    p.add_argument("--n", type=int)
    p.add_argument("--h", nargs="+", type=float, help="coupling: re [im]")
    p.add_argument("--q", nargs="+", type=float, help="quantum parameter: re [im]")
    p.add_argument("--tol", type=float)
    p.add_argument("--lam", type=int, nargs="+")
    p.add_argument("--mu", type=int, nargs="+")
    p.add_argument("--k", type=int)
    p.add_argument("--normalization", choices=("basic", "trace", "triple", "casimir"))
    p.add_argument("--gl", action="store_true", default=None)
    p.add_argument("--perturb", action="store_true", default=None)
    p.add_argument("--kappa", type=float)
    p.add_argument("--fixed-step", type=int, dest="fixed_step", metavar="N")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--full-dump", action="store_true", default=None, dest="full_dump")
    p.add_argument("--out", help="report path (stdout when omitted)")
    return p


def _pair(values):
    if values is None:
        return None
    if len(values) == 1:
        return complex(values[0])
    if len(values) == 2:
        return complex(values[0], values[1])
    raise InvalidJob("expected re [im]")


def _load_job(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise InvalidJob(f"cannot read job file: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidJob(f"malformed JSON at line {err.lineno}, column {err.colno}: {err.msg}") from err
    if not isinstance(data, dict):
        raise InvalidJob("job file must contain a JSON object")
    return data


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.describe is not None:
            if args.describe not in DESCRIPTIONS:
                raise InvalidJob(f"unknown task {args.describe!r}")
            print(f"{args.describe}\n\n{DESCRIPTIONS[args.describe]}")
            return EXIT_OK
        if args.suite is not None:
            report, code = run_suite(args.suite, workers=args.workers or 1, fixed_step=args.fixed_step)
            write_report(report, args.out)
            print(f"suite {args.suite}: {report['n_jobs'] - report['n_failed']}/{report['n_jobs']} passed",
                  file=sys.stderr)
            return code
        data = _load_job(args.job) if args.job else {}
        overrides = {
            "task": args.task,
            "algebra": args.algebra,
            "rep": args.rep,
            "connection": args.connection,
            "n": args.n,
            "h": _pair(args.h),
            "q": _pair(args.q),
            "tol": args.tol,
            "lam": args.lam,
            "mu": args.mu,
            "k": args.k,
            "normalization": args.normalization,
            "gl": args.gl,
            "perturb": args.perturb,
            "kappa": args.kappa,
            "fixed_step": args.fixed_step,
            "workers": args.workers,
            "full_dump": args.full_dump,
            "out": args.out,
        }
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "task" not in data:
            raise InvalidJob("no task given (use --task, --job, --suite or --describe)")
        spec = JobSpec.from_dict(data)
        result = execute(spec)
    except InvalidJob as err:
        print(f"holonome: invalid input: {err}", file=sys.stderr)
        return EXIT_INVALID
    report = {"schema": SCHEMA, "task": spec.task, "job": _spec_json(spec), **result}
    write_report(report, spec.out)
    print(f"{spec.task}: {'passed' if result['passed'] else 'FAILED'}", file=sys.stderr)
    return EXIT_OK if result["passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
