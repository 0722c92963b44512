import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from holonome import connections as cn
from holonome import exact as ex
from holonome import liecore as lc
from holonome import transport as tr
from holonome.transport import monodromy as mo
from holonome.transport import paths


def kz(series, rank, n, h, norm="basic", gl=False):
    rep = lc.build_rep(lc.build_root_system(series, rank, norm), "vector", gl=gl)
    return cn.build_kz(rep, n, h), tr.permutation_equivariance(rep.dim, n)


def casimir(series, rank, kind, h):
    rep = lc.build_rep(lc.build_root_system(series, rank), kind)
    return cn.build_casimir(rep, h), tr.tits_equivariance(lc.tits_lift(rep)), rep


# paths

def test_config_half_twist_n2():
    p = tr.braid_path_config(2, 1)
    assert np.allclose(p.start, [1, 2]) and np.allclose(p.end, [2, 1])
    ts = np.linspace(0.05, 0.95, 19)
    z1 = np.array([p.segments[0].point(t)[0] for t in ts])
    z2 = np.array([p.segments[0].point(t)[1] for t in ts])
    # both points turn counterclockwise about their midpoint
    assert np.all(z1.imag < 0) and np.all(z2.imag > 0)
    d = z1 - z2
    turn = np.unwrap(np.angle(np.concatenate([[p.start[0] - p.start[1]], d, [p.end[0] - p.end[1]]])))
    assert turn[-1] - turn[0] == pytest.approx(math.pi)


def test_config_clearance_n3():
    p = tr.braid_path_config(3, 2)
    assert p.wall_clearance >= 0.5
    assert np.allclose(p.end, [1, 3, 2])


def test_config_full_twist_is_closed_loop():
    p = tr.braid_path_config(3, 1)
    q = tr.braid_path_config(3, 1, basepoint=p.end)
    loop = p.then(q)
    assert loop.is_closed()
    arr, pairs = cn.kz_arrangement(3)
    loop = paths.PathSpec.build(loop.segments, arr)
    k12 = pairs.index((1, 2))
    assert loop.winding(k12) == pytest.approx(1.0, abs=1e-6)
    for k in range(3):
        if k != k12:
            assert loop.winding(k) == pytest.approx(0.0, abs=1e-6)


def test_config_index_range():
    with pytest.raises(ValueError):
        tr.braid_path_config(3, 3)


def test_cartan_sl2_upper_half_circle():
    rs = lc.build_root_system("A", 1)
    p = tr.braid_path_cartan(rs, 0)
    assert np.allclose(p.start, [1]) and np.allclose(p.end, [-1])
    for t in np.linspace(0.05, 0.95, 10):
        x = p.segments[0].point(t)[0]
        assert x.imag > 0 and abs(x) == pytest.approx(1.0)


def test_cartan_sl3_reflection_endpoint_and_clearance():
    rs = lc.build_root_system("A", 2)
    p = tr.braid_path_cartan(rs, 0)
    x0 = paths.default_cartan_basepoint(rs)
    assert np.allclose(p.end, paths.reflect_point(rs, 0, x0))
    assert p.wall_clearance > 0
    seg = p.segments[0]
    for t in np.linspace(0.05, 0.95, 10):
        assert seg.point(t)[0].imag > 0


def test_cartan_basepoint_on_wall():
    rs = lc.build_root_system("A", 2)
    with pytest.raises(ValueError):
        tr.braid_path_cartan(rs, 0, basepoint=np.array([1.0, 0.0]))


# parallel transport

def test_transport_h_zero_is_identity():
    conn, _ = kz("A", 1, 3, 0)
    res = tr.parallel_transport(conn, tr.braid_path_config(3, 1, forms=conn.arrangement))
    assert res.steps == 0
    assert (res.matrix == np.eye(8)).all()


def test_scalar_residue_loop():
    arr = cn.Arrangement(1, ((Fraction(1),),))
    c = 0.3
    conn = cn.FlatConnection(arr, (np.array([[c, 0], [0, c]], dtype=complex),), h=0.7)
    res = tr.parallel_transport(conn, tr.loop_path([0], 1.0, arr), tol=1e-11)
    assert np.allclose(res.matrix, cmath.exp(2j * math.pi * 0.7 * c) * np.eye(2), atol=1e-10)


@pytest.mark.parametrize("backend", tr.available_backends())
def test_inverse_path(backend):
    conn, _ = kz("A", 1, 3, 0.2)
    p = tr.braid_path_config(3, 1, forms=conn.arrangement)
    tol = 1e-10
    a = tr.parallel_transport(conn, p, tol, backend=backend)
    b = tr.parallel_transport(conn, p.reversed(), tol, backend=backend)
    assert np.abs(b.matrix @ a.matrix - np.eye(8)).max() <= 2 * tol
    assert a.err_estimate <= tol


def test_composition():
    conn, _ = kz("A", 1, 3, 0.15)
    p = tr.braid_path_config(3, 1, forms=conn.arrangement)
    q = tr.braid_path_config(3, 2, basepoint=p.end, forms=conn.arrangement)
    tol = 1e-10
    whole = tr.parallel_transport(conn, p.then(q), tol).matrix
    parts = tr.parallel_transport(conn, q, tol).matrix @ tr.parallel_transport(conn, p, tol).matrix
    assert np.abs(whole - parts).max() <= 4 * tol


def test_homotopy_invariance():
    conn, _, _ = casimir("A", 2, "adjoint", 0.1)
    rs = lc.build_root_system("A", 2)
    tol = 1e-10
    a = tr.parallel_transport(conn, tr.braid_path_cartan(rs, 1, eta=1.0), tol).matrix
    b = tr.parallel_transport(conn, tr.braid_path_cartan(rs, 1, eta=0.5), tol).matrix
    assert np.abs(a - b).max() <= 2 * tol


def test_backends_agree():
    if len(tr.available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    conn, _, _ = casimir("B", 2, "vector", 0.2)
    p = tr.braid_path_cartan(lc.build_root_system("B", 2), 1)
    a = tr.parallel_transport(conn, p, 1e-10, backend="python")
    b = tr.parallel_transport(conn, p, 1e-10, backend="cython")
    assert a.steps == b.steps
    assert np.abs(a.matrix - b.matrix).max() < 1e-13


def test_fixed_step_bit_reproducible():
    conn, _ = kz("A", 1, 3, 0.1)
    p = tr.braid_path_config(3, 2, forms=conn.arrangement)
    a = tr.parallel_transport(conn, p, fixed_steps=200)
    b = tr.parallel_transport(conn, p, fixed_steps=200)
    assert (a.matrix == b.matrix).all()
    assert a.steps == 400 and a.err_estimate < 1e-9


def test_unknown_backend():
    conn, _ = kz("A", 1, 2, 0.1)
    with pytest.raises(ValueError):
        tr.parallel_transport(conn, tr.braid_path_config(2, 1, forms=conn.arrangement), backend="fortran")


def test_tolerance_sweep_shape():
    conn, _ = kz("A", 1, 3, 0.1)
    p = tr.braid_path_config(3, 1, forms=conn.arrangement)
    out = tr.tolerance_sweep(conn, p, (1e-6, 1e-8))
    assert len(out) == 2
    assert out[1][1] < out[0][1]


# monodromy

def test_h_zero_permutation_images_exact():
    conn, eq = kz("A", 1, 3, 0)
    rep = tr.monodromy_rep(conn, eq)
    for i, g in enumerate(rep.generator_images):
        assert (g == ex.to_complex(lc.transposition_operator(2, 3, i + 1, i + 2))).all()
    assert tr.verify_braid_relations(rep).max_residual == 0
    assert tr.hecke_check(rep, 1).max_residual == 0


def test_h_zero_tits_images_exact():
    conn, eq, rep = casimir("A", 2, "adjoint", 0)
    mono = tr.monodromy_rep(conn, eq)
    lift = lc.tits_lift(rep)
    for g, s in zip(mono.generator_images, lift.matrices):
        assert (g == ex.to_complex(s)).all()


def test_gl2_eigenvalues():
    h = 0.1
    conn, eq = kz("A", 1, 3, h, "trace", True)
    rep = tr.monodromy_rep(conn, eq)
    q = cmath.exp(1j * math.pi * h)
    want = [q] * 6 + [-1 / q] * 2
    for g in rep.generator_images:
        assert tr.spectral_distance(np.linalg.eigvals(g), want) < 1e-8


def test_kz_braid_relations():
    conn, eq = kz("A", 1, 3, 0.2)
    assert tr.verify_braid_relations(tr.monodromy_rep(conn, eq)).max_residual <= 1e-8


def test_casimir_braid_relations_sl3_vector():
    conn, eq, _ = casimir("A", 2, "vector", 0.1)
    assert tr.verify_braid_relations(tr.monodromy_rep(conn, eq)).max_residual <= 1e-8


def test_casimir_b2_braid_relation_m4():
    conn, eq, _ = casimir("B", 2, "vector", 0.1)
    rep = tr.monodromy_rep(conn, eq)
    assert rep.coxeter[0][1] == 4
    assert tr.verify_braid_relations(rep).max_residual <= 1e-8


def test_workers_deterministic():
    conn, eq = kz("A", 1, 4, 0.1)
    a = tr.monodromy_rep(conn, eq, workers=1)
    b = tr.monodromy_rep(conn, eq, workers=3)
    for x, y in zip(a.generator_images, b.generator_images):
        assert (x == y).all()


def test_local_model_conjugacy_kz():
    conn, eq = kz("A", 2, 3, 0.13)
    rep = tr.monodromy_rep(conn, eq)
    for i, g in enumerate(rep.generator_images):
        assert tr.spectral_distance(np.linalg.eigvals(g), np.linalg.eigvals(tr.local_model(conn, eq, i))) < 1e-8


def test_ckz_hecke_and_local_model():
    rs = lc.build_root_system("A", 2)
    refl = cn.reflection_rep(rs)
    conn = cn.build_ckz(rs, refl, 0.1)
    eq = tr.reflection_equivariance(rs, refl)
    rep = tr.monodromy_rep(conn, eq)
    q = cmath.exp(1j * math.pi * 0.1)
    assert tr.hecke_check(rep, q).max_residual <= 1e-6
    for i, g in enumerate(rep.generator_images):
        assert tr.spectral_distance(np.linalg.eigvals(g), np.linalg.eigvals(tr.local_model(conn, eq, i))) < 1e-8


def test_casimir_monodromy_block_structure():
    conn, eq, rep = casimir("A", 2, "adjoint", 0.1)
    mono = tr.monodromy_rep(conn, eq)
    rs = rep.root_system
    for i, g in enumerate(mono.generator_images):
        pure = g @ g
        for mu, idx in rep.weight_decomp.items():
            tgt = rep.weight_space(rs.reflect_weight(i, mu))
            out = [k for k in range(rep.dim) if k not in tgt]
            assert np.abs(g[np.ix_(out, idx)]).max(initial=0) < 1e-9
            own = [k for k in range(rep.dim) if k not in idx]
            assert np.abs(pure[np.ix_(own, idx)]).max(initial=0) < 1e-9


def test_bmw_so3_and_sp2():
    h, n = 0.1, 3
    q = tr.hecke_parameter(h)
    conn, eq = kz("B", 1, n, h, "trace")
    rep = tr.monodromy_rep(conn, eq)
    r = tr.bmw_r(h, 3, True)
    assert r == pytest.approx(cmath.exp(2j * math.pi * h))
    assert tr.bmw_check(rep, q, r).max_residual <= 1e-6
    conn, eq = kz("C", 1, n, h, "trace")
    rep = tr.monodromy_rep(conn, eq)
    r = tr.bmw_r(h, 2, False)
    assert r == pytest.approx(-cmath.exp(3j * math.pi * h))
    assert tr.bmw_check(rep, q, r).max_residual <= 1e-6


def test_bmw_small_h_tangle_rank_one():
    h = 1e-3
    conn, eq = kz("B", 1, 2, h, "trace")
    rep = tr.monodromy_rep(conn, eq, tol=1e-12)
    (e,) = mo.tangle_elements(rep.generator_images, tr.hecke_parameter(h))
    s = np.linalg.svd(e, compute_uv=False)
    assert s[1] < 1e-2 * s[0]


def test_tangle_rejects_q_near_one():
    with pytest.raises(ValueError):
        mo.tangle_elements([np.eye(2)], 1.0)


def test_spectrum_examples():
    flip = lc.transposition_operator(2, 2, 1, 2)
    assert np.allclose(tr.spectrum(ex.to_complex(flip)), [-1, 1, 1, 1])
    assert np.allclose(tr.spectrum(np.array([[0, 1], [-1, 0]])), [-1j, 1j])
    z = cmath.exp(0.4j)
    assert np.allclose(tr.spectrum(z * np.eye(2)), [z, z])
    with pytest.raises(ValueError):
        tr.spectrum(np.array([[np.nan]]))


def test_kd_identical_inputs():
    conn, eq = kz("A", 1, 3, 0.1)
    rep = tr.monodromy_rep(conn, eq)
    report = tr.kd_compare(rep, rep.generator_images)
    assert report.passed and report.max_deviation < 1e-12


def test_kd_shape_mismatch():
    conn, eq = kz("A", 1, 3, 0.1)
    rep = tr.monodromy_rep(conn, eq)
    with pytest.raises(ValueError):
        tr.kd_compare(rep, [np.eye(4), np.eye(4)])


def test_default_words():
    words = tr.default_words(2)
    assert (0,) in words and (1, 1) in words and (0, 1, 0) in words
    assert all(1 <= len(w) <= 3 for w in words)


def test_monodromy_json():
    conn, eq = kz("A", 1, 3, 0.1)
    data = tr.monodromy_rep(conn, eq).to_json()
    assert {"generators", "h", "tol", "basepoint", "conventions"} <= set(data)
