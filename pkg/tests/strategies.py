from fractions import Fraction

from hypothesis import strategies as st

from twisted_poisson.algebra import Poly
from twisted_poisson.multivector import Multivector, index_sets

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
monos = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(monos, rationals, max_size=5).map(Poly)
small_polys = st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3), rationals, max_size=3).map(Poly)
points = st.tuples(rationals, rationals, rationals)


def multivectors(grade):
    keys = index_sets(grade)
    return st.lists(small_polys, min_size=len(keys), max_size=len(keys)).map(
        lambda ps: Multivector(grade, dict(zip(keys, ps))))


def homogeneous(deg):
    from twisted_poisson.algebra import monomials_of_degree
    ms = monomials_of_degree(deg)
    return st.lists(rationals, min_size=len(ms), max_size=len(ms)).map(
        lambda cs: Poly(dict(zip(ms, cs))))


def quadratic_bivectors():
    return st.tuples(homogeneous(2), homogeneous(2), homogeneous(2)).map(
        lambda t: Multivector.bivector(*t))


nonzero_rationals = rationals.filter(lambda q: q != 0)
__all__ = ["Fraction", "rationals", "nonzero_rationals", "polys", "small_polys", "points",
           "multivectors", "homogeneous", "quadratic_bivectors"]
