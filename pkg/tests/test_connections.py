import json
from fractions import Fraction

import numpy as np
import pytest

from holonome import connections as cn
from holonome import exact as ex
from holonome import liecore as lc


def rep(series, rank, kind="vector", norm="basic", gl=False):
    return lc.build_rep(lc.build_root_system(series, rank, norm), kind, gl=gl)


def test_coplanar_a2_root_arrangement():
    arr = cn.root_arrangement(lc.build_root_system("A", 2))
    assert cn.coplanar_families(arr) == [(0, 1, 2)]


def test_coplanar_kz3():
    arr, _ = cn.kz_arrangement(3)
    assert cn.coplanar_families(arr) == [(0, 1, 2)]


def test_coplanar_kz4_partitions_pairs():
    arr, pairs = cn.kz_arrangement(4)
    fams = cn.coplanar_families(arr)
    named = [{pairs[k] for k in f} for f in fams]
    triples = [f for f in named if len(f) == 3]
    assert sorted(map(sorted, triples)) == sorted(map(sorted, [
        {(1, 2), (1, 3), (2, 3)}, {(1, 2), (1, 4), (2, 4)}, {(1, 3), (1, 4), (3, 4)}, {(2, 3), (2, 4), (3, 4)},
    ]))
    doubles = [f for f in named if len(f) == 2]
    assert {frozenset(f) for f in doubles} == {
        frozenset({(1, 2), (3, 4)}), frozenset({(1, 3), (2, 4)}), frozenset({(1, 4), (2, 3)}),
    }
    covered = [frozenset(p) for f in fams for p in __import__("itertools").combinations(f, 2)]
    assert len(covered) == len(set(covered)) == 15


def test_kz_gl2_n2_residue_is_flip():
    r = rep("A", 1, norm="trace", gl=True)
    conn = cn.build_kz(r, 2, Fraction(1, 3))
    assert len(conn.arrangement.forms) == 1
    assert (conn.residues[0] == lc.transposition_operator(2, 2, 1, 2)).all()
    assert conn.h == Fraction(1, 3)


def test_kz_so3_n2_residue():
    r = rep("B", 1, norm="trace")
    conn = cn.build_kz(r, 2, 1)
    want = lc.transposition_operator(3, 2, 1, 2) - lc.invariant_projection(r) * 3
    assert (conn.exact_weighted()[0] == want).all()


def test_kz_h_zero_is_zero_connection():
    conn = cn.build_kz(rep("A", 1), 3, 0)
    assert not np.any(conn.numeric_residues())


@pytest.mark.parametrize("series,rank,n", [("A", 1, 3), ("A", 1, 4), ("A", 2, 3), ("B", 1, 3)])
def test_kz_flat_exact(series, rank, n):
    conn = cn.build_kz(rep(series, rank), n, 1)
    report = cn.kohno_flatness_check(conn)
    assert report.passed and report.mode == "exact" and report.max_norm == 0


@pytest.mark.parametrize("series,rank,kind", [("A", 2, "adjoint"), ("A", 3, "vector"), ("B", 2, "adjoint"),
                                               ("C", 2, "vector"), ("D", 3, "vector")])
def test_casimir_flat_exact(series, rank, kind):
    conn = cn.build_casimir(rep(series, rank, kind), 1)
    assert conn.verified_flat
    assert cn.kohno_flatness_check(conn).passed


def test_casimir_perturbed_fails():
    r = rep("A", 2, "adjoint")
    conn = cn.build_casimir(r, 1)
    res = list(conn.residues)
    res[0] = res[0] + r.root_e[r.root_system.positive_roots[0]]
    bad = cn.FlatConnection(conn.arrangement, tuple(res), conn.h, conn.weights, conn.labels, conn.kind)
    report = cn.kohno_flatness_check(bad)
    assert not report.passed
    assert report.offending is not None and report.offending_norm > 0


def test_casimir_rank1_single_hyperplane():
    r = rep("A", 1, "sym(3)")
    conn = cn.build_casimir(r, Fraction(1, 5))
    assert len(conn.arrangement.forms) == 1 and len(conn.arrangement.forms[0]) == 1
    assert (conn.residues[0] == lc.casimir_op(r, (1,))).all()
    assert np.allclose(conn.numeric_residues()[0], ex.to_complex(lc.casimir_op(r, (1,))) / 5)


def test_casimir_weight_block_is_block_diagonal():
    r = lc.tensor(rep("A", 3), rep("A", 3))
    conn = cn.build_casimir(r, 1)
    for res in conn.residues:
        for mu, idx in r.weight_decomp.items():
            outside = [k for k in range(r.dim) if k not in idx]
            assert ex.is_zero(res[np.ix_(outside, idx)])
    mu = max(r.weight_decomp, key=lambda w: len(r.weight_decomp[w]))
    block = cn.build_casimir(r, 1, block=mu)
    assert block.fiber_dim == len(r.weight_decomp[mu]) == 2
    assert cn.kohno_flatness_check(block).passed


def test_casimir_sl3_adjoint_zero_block_matches_ckz_mod_scalars():
    r = rep("A", 2, "adjoint")
    cas = cn.build_casimir(r, 1, block="zero")
    rs = r.root_system
    refl = cn.zero_weight_reflections(r)
    ckz = cn.build_ckz(rs, refl, {a: -rs.norm2(a) for a in rs.positive_roots})
    report = cn.compare_residues_mod_scalars(cas, ckz)
    assert report.passed
    assert all(s == 2 for s in report.scalars)


@pytest.mark.parametrize("series,rank", [("A", 2), ("A", 3), ("B", 2), ("C", 3)])
def test_ckz_reflection_rep_flat(series, rank):
    rs = lc.build_root_system(series, rank)
    conn = cn.build_ckz(rs, cn.reflection_rep(rs), Fraction(1, 7))
    assert cn.kohno_flatness_check(conn).passed


def test_ckz_zero_weights():
    rs = lc.build_root_system("A", 2)
    conn = cn.build_ckz(rs, cn.reflection_rep(rs), 0)
    assert not np.any(conn.numeric_residues())


def test_ckz_rejects_non_invariant_weights():
    rs = lc.build_root_system("B", 2)
    roots = rs.positive_roots
    weights = {a: Fraction(k + 1, 10) for k, a in enumerate(roots)}
    with pytest.raises(ValueError):
        cn.build_ckz(rs, cn.reflection_rep(rs), weights)


def test_ckz_b2_unequal_weights_allowed():
    rs = lc.build_root_system("B", 2)
    weights = {a: Fraction(1, 10) if rs.norm2(a) == 1 else Fraction(3, 10) for a in rs.positive_roots}
    assert cn.kohno_flatness_check(cn.build_ckz(rs, cn.reflection_rep(rs), weights)).passed


def test_ckz_sn_on_tensor_power_equals_kz_gl():
    r = rep("A", 1, norm="trace", gl=True)
    n = 3
    rs = lc.build_root_system("A", n - 1)
    ckz = cn.build_ckz(rs, cn.permutation_reflections(2, n), Fraction(1, 4))
    kz = cn.build_kz(r, n, Fraction(1, 4))
    for a, res in zip(rs.positive_roots, ckz.exact_weighted()):
        pair = cn.root_to_pair(rs, a)
        assert (res == kz.residues[kz.residue_index(pair)] * kz.h).all()


def test_v0_subspace_examples():
    assert cn.v0_subspace(rep("A", 2, "adjoint")).shape[1] == 2
    r = rep("A", 1, "sym(4)")
    assert len(r.weight_space(r.zero_weight)) == 1
    assert cn.v0_subspace(r).shape[1] == 0
    r3 = lc.build_rep(lc.build_root_system("A", 2), "tensor_power(3)")
    assert cn.v0_subspace(r3).shape[1] == len(r3.weight_space(r3.zero_weight))


@pytest.mark.parametrize("series,rank,kind", [("A", 1, "adjoint"), ("A", 2, "adjoint"), ("B", 2, "vector"),
                                               ("A", 2, "tensor_power(3)"), ("C", 2, "adjoint")])
def test_v0_identity(series, rank, kind):
    report = cn.check_v0_identity(lc.build_rep(lc.build_root_system(series, rank), kind))
    assert report.passed and report.w_invariant and report.v0_dim > 0


def test_commutant_dims():
    r = rep("A", 1, norm="trace", gl=True)
    # commutant of the flip on C^2 (x) C^2: End(Sym^2) + End(Alt^2) = 9 + 1
    assert cn.commutant_dim(cn.build_kz(r, 2, 1)) == 10
    cas = cn.build_casimir(rep("A", 1), 1)
    for mu in cas_weights(cas):
        assert cn.commutant_dim(cas.restrict(mu)) == 1
    zero = cn.build_kz(r, 2, 0)
    assert cn.commutant_dim(zero) == 16


def cas_weights(conn):
    return [[k] for k in range(conn.fiber_dim)]


@pytest.mark.parametrize("builder", ["kz", "casimir", "ckz"])
def test_holonomy_relations_vanish(builder):
    if builder == "kz":
        conn = cn.build_kz(rep("A", 1), 4, 1)
    elif builder == "casimir":
        conn = cn.build_casimir(rep("B", 2, "adjoint"), 1)
    else:
        rs = lc.build_root_system("A", 3)
        conn = cn.build_ckz(rs, cn.reflection_rep(rs), 1)
    assert all(ex.is_zero(m) for m in cn.evaluate_holonomy_relations(conn))


def test_knutson_rank2_subsystems():
    r = rep("B", 3, "vector")
    rs = r.root_system
    cs = {a: lc.casimir_op(r, a) for a in rs.positive_roots}
    arr = cn.root_arrangement(rs)
    for fam in cn.coplanar_families(arr):
        total = sum((cs[rs.positive_roots[k]] for k in fam), ex.zeros(r.dim))
        for k in fam:
            assert ex.is_zero(ex.comm(cs[rs.positive_roots[k]], total))


def test_numeric_flatness_mode():
    conn = cn.build_kz(rep("A", 1), 3, 0.3)
    assert cn.kohno_flatness_check(conn, mode="numeric").passed


def test_residue_count_mismatch():
    arr, _ = cn.kz_arrangement(3)
    with pytest.raises(ValueError):
        cn.FlatConnection(arr, (ex.eye(2),), 1, None, None, "raw")


def test_connection_json_roundtrip():
    conn = cn.build_kz(rep("A", 1), 3, complex(0.1, 0.2))
    data = json.loads(json.dumps(cn.connection_to_json(conn)))
    assert set(data) >= {"base_dim", "forms", "residues", "h"}
    back = cn.connection_from_json(data)
    assert np.allclose(back.numeric_residues(), conn.numeric_residues())
