from fractions import Fraction

import numpy as np
import pytest

from holonome import exact as ex
from holonome import liecore as lc


def rs(series, rank, norm="basic"):
    return lc.build_root_system(series, rank, norm)


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 4)])
def test_positive_root_counts(series, rank):
    assert len(rs(series, rank).positive_roots) == lc.expected_positive_count(series, rank)


def test_a1_a2_norms():
    assert [rs("A", 1).norm2(a) for a in rs("A", 1).positive_roots] == [2]
    a2 = rs("A", 2)
    assert len(a2.positive_roots) == 3
    assert {a2.norm2(a) for a in a2.positive_roots} == {2}


def test_b2_norms():
    b2 = rs("B", 2)
    assert sorted(b2.norm2(a) for a in b2.positive_roots) == [1, 1, 2, 2]
    assert b2.norm2(b2.highest_root) == 2


@pytest.mark.parametrize("series,rank", [("E", 6), ("D", 2), ("A", 0)])
def test_unsupported_root_system(series, rank):
    with pytest.raises(ValueError):
        lc.build_root_system(series, rank)


def test_parse_algebra():
    assert lc.parse_algebra("B2") == ("B", 2)
    with pytest.raises(ValueError):
        lc.parse_algebra("Q7")


@pytest.mark.parametrize(
    "series,rank,kind,dim,zero",
    [("A", 1, "adjoint", 3, 1), ("B", 2, "vector", 5, 1), ("A", 2, "adjoint", 8, 2), ("C", 2, "vector", 4, 0)],
)
def test_rep_dims(series, rank, kind, dim, zero):
    rep = lc.build_rep(rs(series, rank), kind)
    assert rep.dim == dim
    assert len(rep.weight_space(rep.zero_weight)) == zero


def test_a1_adjoint_weights():
    rep = lc.build_rep(rs("A", 1), "adjoint")
    assert sorted(w[0] for w in rep.weights) == [-2, 0, 2]


@pytest.mark.parametrize(
    "series,rank,kind",
    [("A", 2, "vector"), ("A", 2, "adjoint"), ("B", 2, "vector"), ("C", 2, "adjoint"), ("D", 3, "vector"),
     ("A", 1, "sym(3)"), ("A", 3, "ext(2)")],
)
def test_serre_and_root_brackets(series, rank, kind):
    rep = lc.build_rep(rs(series, rank), kind)
    r = rep.root_system.rank
    for i in range(r):
        for j in range(r):
            c = ex.comm(rep.E[i], rep.F[j])
            assert (c == (rep.H[i] if i == j else ex.zeros(rep.dim))).all()
    for a in rep.root_system.positive_roots:
        assert (ex.comm(rep.root_e[a], rep.root_f[a]) == rep.root_h[a]).all()


def test_casimir_sl2_vector_scalar():
    rep = lc.build_rep(rs("A", 1), "vector")
    c = lc.casimir_op(rep, rep.root_system.positive_roots[0])
    assert (c == ex.eye(2) * Fraction(3, 2)).all()


@pytest.mark.parametrize("series,rank,kind", [("A", 2, "adjoint"), ("B", 2, "adjoint"), ("C", 2, "vector")])
def test_casimir_commutes_with_cartan_and_preserves_weights(series, rank, kind):
    rep = lc.build_rep(rs(series, rank), kind)
    for a in rep.root_system.positive_roots:
        c = lc.casimir_op(rep, a)
        for h in rep.H:
            assert ex.is_zero(ex.comm(c, h))
        for mu, idx in rep.weight_decomp.items():
            outside = [k for k in range(rep.dim) if k not in idx]
            assert ex.is_zero(c[np.ix_(outside, idx)])


def test_casimir_sl3_adjoint_zero_weight():
    rep = lc.build_rep(rs("A", 2), "adjoint")
    idx = rep.weight_space(rep.zero_weight)
    for a in rep.root_system.positive_roots:
        c = lc.casimir_op(rep, a)[np.ix_(idx, idx)]
        s = lc.reflection_lift(rep, a)[np.ix_(idx, idx)]
        assert (c == (ex.eye(len(idx)) - s) * rep.root_system.norm2(a)).all()


def test_full_casimir_scalars():
    assert lc.full_casimir(lc.build_rep(rs("A", 2), "adjoint"))[0, 0] == 6
    assert lc.full_casimir(lc.build_rep(rs("B", 2), "vector"))[0, 0] == 4


@pytest.mark.parametrize("m", [2, 3])
def test_omega_gl_is_transposition(m):
    rep = lc.build_rep(rs("A", m - 1, "trace"), "vector", gl=True)
    assert (lc.omega_pair(rep, 1, 2, 2) == lc.transposition_operator(m, 2, 1, 2)).all()
    assert (lc.omega_pair(rep, 1, 3, 3) == lc.transposition_operator(m, 3, 1, 3)).all()


@pytest.mark.parametrize("series,rank", [("B", 1), ("B", 2), ("D", 3), ("C", 1), ("C", 2)])
def test_omega_orthogonal_symplectic(series, rank):
    rep = lc.build_rep(rs(series, rank, "trace"), "vector")
    d = rep.dim
    p0 = lc.invariant_projection(rep)
    assert ex.rank(p0) == 1
    assert (ex.mul(p0, p0) == p0).all()
    want = lc.transposition_operator(d, 2, 1, 2) - p0 * d
    assert (lc.omega_pair(rep, 1, 2, 2) == want).all()


def test_omega_symmetric_and_invariant():
    rep = lc.build_rep(rs("A", 2), "vector")
    om = lc.omega_pair(rep, 1, 2, 2)
    p = lc.transposition_operator(3, 2, 1, 2)
    assert (ex.mul_chain(p, om, p) == om).all()
    for x in rep.E + rep.F + rep.H:
        diag = ex.kron(x, ex.eye(3)) + ex.kron(ex.eye(3), x)
        assert ex.is_zero(ex.comm(om, diag))


def test_omega_pair_index_check():
    rep = lc.build_rep(rs("A", 1), "vector")
    with pytest.raises(ValueError):
        lc.omega_pair(rep, 2, 2, 3)


def test_tits_sl2_vector():
    rep = lc.build_rep(rs("A", 1), "vector")
    s = lc.tits_lift(rep).matrices[0]
    assert (s == ex.qarray([[0, 1], [-1, 0]])).all()
    assert (ex.mul(s, s) == -ex.eye(2)).all()


@pytest.mark.parametrize("series,rank,kind", [("A", 2, "adjoint"), ("B", 2, "vector"), ("A", 3, "vector")])
def test_tits_braid_relations_and_weight_map(series, rank, kind):
    rep = lc.build_rep(rs(series, rank), kind)
    lift = lc.tits_lift(rep)
    cox = rep.root_system.coxeter_orders
    r = rep.root_system.rank
    for i in range(r):
        for j in range(i + 1, r):
            m = cox[i][j]
            left = lc.alternating_product(lift.matrices, i, j, m)
            right = lc.alternating_product(lift.matrices, j, i, m)
            assert (left == right).all()
    for i in range(r):
        s = lift.matrices[i]
        sq = ex.mul(s, s)
        for mu, idx in rep.weight_decomp.items():
            tgt = rep.weight_space(rep.root_system.reflect_weight(i, mu))
            outside = [k for k in range(rep.dim) if k not in tgt]
            assert ex.is_zero(s[np.ix_(outside, idx)])
            if mu[i] == 0:
                sub = sq[np.ix_(idx, idx)]
                assert (sub == ex.eye(len(idx))).all()


def test_dimension_cap():
    with pytest.raises(lc.DimensionError):
        lc.build_rep(rs("A", 3), "tensor_power(4)", cap=100)
