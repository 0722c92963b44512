from fractions import Fraction

import pytest

from holonome import duality as du
from holonome import liecore as lc


def test_partitions_and_conjugate():
    assert du.partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert du.conjugate((3, 1)) == (2, 1, 1)
    assert du.hook_length_dim((2, 2)) == 2
    assert du.hook_length_dim((3, 2)) == 5
    assert du.gl_dim((2, 1, 0), 3) == 8


def test_polyspace_dim():
    space = du.PolySpace(3, 2, (2, 1))
    assert space.dim == 6 * 3 == len(space.monomials())


def test_hw_space_determinant():
    hw = du.hw_space(2, 2, (1, 1), (1, 1))
    assert hw.dim == 1
    (v,) = hw.vectors()
    # exponents are row-major: (x11, x12, x21, x22)
    assert v[(1, 0, 0, 1)] == -v[(0, 1, 1, 0)] != 0
    assert len(v) == 2


def test_hw_space_dims():
    assert du.hw_space(2, 2, (2, 0), (1, 1)).dim == 1
    assert du.hw_space(2, 2, (1, 1), (2, 0)).dim == 0
    assert du.hw_space(3, 3, (2, 1, 0), (1, 1, 1)).dim == 2


def test_hw_space_annihilated_by_raising():
    k, n = 3, 3
    hw = du.hw_space(k, n, (2, 1, 0), (1, 1, 1))
    for v in hw.vectors():
        for a in range(k):
            for b in range(a + 1, k):
                assert not du.row_op(v, k, n, a, b)


def test_hw_space_requires_k_ge_n():
    with pytest.raises(ValueError):
        du.hw_space(2, 3, (2, 1), (1, 1, 1))


@pytest.mark.parametrize("k,n,lam,mu", [
    (2, 2, (1, 1), (1, 1)),
    (2, 2, (2, 0), (1, 1)),
    (2, 2, (2, 0), (2, 0)),
    (3, 3, (2, 1, 0), (1, 1, 1)),
    (3, 3, (3, 0, 0), (2, 1, 0)),
    (3, 3, (2, 1, 0), (2, 1, 0)),
])
def test_residue_match(k, n, lam, mu):
    report = du.residue_match_check(k, n, lam, mu)
    assert report.passed
    assert all(v == 0 for v in report.off_scalar.values())


def test_residue_match_scalars_reported():
    report = du.residue_match_check(2, 2, (2, 0), (1, 1))
    assert report.scalars == {((1, 1), 0, 1): Fraction(3)}


def test_residue_match_coupling_one_fails_off_scalar():
    assert not du.residue_match_check(3, 3, (2, 1, 0), (1, 1, 1), coupling=1).passed


@pytest.mark.parametrize("n,lam,want", [(2, (2,), (1, 1)), (3, (2, 1), (2, 2)), (4, (2, 2), (2, 2))])
def test_schur_weyl_examples(n, lam, want):
    assert du.schur_weyl_zero_weight(n, lam) == want


@pytest.mark.parametrize("n", range(1, 6))
def test_schur_weyl_all(n):
    for lam in du.partitions(n):
        a, b = du.schur_weyl_zero_weight(n, lam)
        assert a == b


def test_schur_weyl_rejects_non_partition():
    with pytest.raises(ValueError):
        du.schur_weyl_zero_weight(3, (1, 2))


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_multiplicity_free(k, n):
    for d in range(5):
        lhs, rhs = du.multiplicity_free_check(k, n, d)
        assert lhs == rhs


def test_column_omega_matches_omega_pair():
    rep = lc.build_rep(lc.build_root_system("A", 1, "trace"), "vector", gl=True)
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        assert (du.column_omega_matrix(2, 3, i, j) == lc.omega_pair(rep, i + 1, j + 1, 3)).all()
