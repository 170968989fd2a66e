from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bareiss_rank
from twisted_poisson.linalg import (MatrixQ, NotASubspace, QuotientBasis, Subspace, annihilator, image,
                                    kernel, map_subspace, preimage, quotient_dim, rank, rref, solve,
                                    subspace_intersect, subspace_sum)

entries = st.integers(-3, 3).map(Fraction) | st.fractions(-2, 2, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # sparse-ish so that rank deficiency is common
    cell = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), entries)
    rows = draw(st.lists(st.lists(cell, min_size=c, max_size=c), min_size=r, max_size=r))
    return MatrixQ.from_dense(rows, cols=c)


def subspaces(n):
    vec = st.dictionaries(st.integers(0, n - 1), entries.filter(bool), max_size=n)
    return st.lists(vec, max_size=n).map(lambda vs: Subspace(n, vs))


@given(matrices())
@settings(max_examples=150)
def test_rank_matches_bareiss(m):
    assert rank(m) == bareiss_rank(m.to_dense())


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.cols
    assert image(m).dim == rank(m)
    for v in kernel(m).basis:
        assert not m.apply(v)


@given(matrices())
def test_rref_is_reduced(m):
    r = rref(m).row_list()
    nonzero = [row for row in r if row]
    pivots = [min(row) for row in nonzero]
    assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
    for row, p in zip(nonzero, pivots):
        assert row[p] == 1
        assert all(other.get(p, 0) == 0 for other in nonzero if other is not row)


@given(matrices(), st.data())
def test_transpose_and_product(m, data):
    assert m.transpose().transpose() == m
    assert rank(m.transpose()) == rank(m)
    assert (MatrixQ.identity(m.rows) @ m) == m


@given(matrices(), st.data())
def test_solve(m, data):
    x = data.draw(st.lists(entries, min_size=m.cols, max_size=m.cols))
    xv = {i: v for i, v in enumerate(x) if v}
    b = m.apply(xv)
    sol = solve(m, b)
    assert sol is not None and m.apply(sol) == b


def test_solve_inconsistent():
    m = MatrixQ.from_dense([[1, 1], [2, 2]])
    assert solve(m, {0: Fraction(1), 1: Fraction(3)}) is None


@given(subspaces(5), subspaces(5), subspaces(5))
@settings(max_examples=100)
def test_modular_law_and_dimension_formula(a, b, c):
    s, i = subspace_sum(a, b), subspace_intersect(a, b)
    assert s.dim + i.dim == a.dim + b.dim
    assert s.contains_subspace(a) and a.contains_subspace(i)
    # modular law: if A <= C then A + (B cap C) = (A + B) cap C
    ac = subspace_sum(a, c)
    assert subspace_sum(a, subspace_intersect(b, ac)) == subspace_intersect(subspace_sum(a, b), ac)


@given(subspaces(5))
def test_annihilator(a):
    ann = annihilator(a)
    assert ann.dim + a.dim == 5
    for u in a.basis:
        for w in ann.basis:
            assert sum(u.get(k, 0) * x for k, x in w.items()) == 0


@given(matrices(5, 5), st.data())
def test_map_and_preimage(m, data):
    s = data.draw(subspaces(m.cols))
    t = data.draw(subspaces(m.rows))
    img = map_subspace(m, s)
    assert img.dim <= s.dim
    pre = preimage(m, t)
    assert pre.contains_subspace(kernel(m))
    for v in pre.basis:
        assert t.contains(m.apply(v))
    assert preimage(m, img).contains_subspace(s)


@given(subspaces(6), subspaces(6))
def test_quotient_basis(a, b):
    big = subspace_sum(a, b)
    q = QuotientBasis(big, b)
    assert q.dim == quotient_dim(big, b) == big.dim - b.dim
    for j, r in enumerate(q.reps):
        expect = [Fraction(int(i == j)) for i in range(q.dim)]
        assert q.coords_checked(r) == expect
    for v in b.basis:
        assert q.coords(v) == [0] * q.dim


def test_quotient_requires_containment():
    a = Subspace.coordinate(3, [0])
    b = Subspace.coordinate(3, [1])
    with pytest.raises(NotASubspace):
        QuotientBasis(a, b)
    with pytest.raises(NotASubspace):
        quotient_dim(a, b)
    with pytest.raises(NotASubspace):
        QuotientBasis(a, Subspace.zero(3)).coords_checked({1: Fraction(1)})


def test_small_examples():
    m = MatrixQ.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    assert kernel(m).dim == 1
    assert Subspace.full(4).dim == 4 and Subspace.zero(4).dim == 0
    assert Subspace(3, [{0: Fraction(2)}, {0: Fraction(-1)}]).dim == 1
