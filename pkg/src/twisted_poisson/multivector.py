"""Polyvector fields on R^3 with polynomial coefficients.

A multivector of grade ``g`` stores one :class:`Poly` per sorted index
subset of {1, 2, 3} of size ``g``; the keys are ``(1,)``, ``(1, 2)``,
``(1, 2, 3)`` and so on, standing for ``d1``, ``d1 ^ d2``, ...  Text
rendering uses the cyclic names ``d23, d31, d12`` for grade 2, so the
``d31`` coefficient is minus the stored ``(1, 3)`` component.

The Schouten bracket is computed with the odd-coordinate formula

    [P, Q] = sum_i (P <d/dxi_i) (d/dx_i Q) - (d/dx_i P) (d/dxi_i> Q)

(right derivative in the odd variable on P, left derivative on Q).  With
this choice [X, f] = X(f), [X, Y] is the Lie bracket and

    [P, Q ^ R] = [P, Q] ^ R + (-1)^((|P|-1)|Q|) Q ^ [P, R].
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple

from .algebra import Monomial, Poly, parse_poly, render_poly

Index = Tuple[int, ...]

# display order and names of the d-basis per grade
DISPLAY = {
    0: [((), 1, "")],
    1: [((1,), 1, "d1"), ((2,), 1, "d2"), ((3,), 1, "d3")],
    2: [((2, 3), 1, "d23"), ((1, 3), -1, "d31"), ((1, 2), 1, "d12")],
    3: [((1, 2, 3), 1, "d123")],
}
_NAME_TO_KEY = {name: (key, sign) for g in (1, 2, 3) for key, sign, name in DISPLAY[g]}


class ResidualNotExact(ArithmeticError):
    """The residual bivector of a curl decomposition is not Koszul-exact."""


def index_sets(grade: int) -> list[Index]:
    """Sorted index tuples of the given grade, in display order."""
    return [key for key, _, _ in DISPLAY[grade]]


def merge_sign(a: Index, b: Index) -> Tuple[int, Index]:
    """Sign and sorted union for ``xi_a ^ xi_b``; sign 0 if they overlap."""
    if set(a) & set(b):
        return 0, ()
    seq = list(a) + list(b)
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


def _rderiv(key: Index, i: int) -> Tuple[int, Index]:
    # right derivative d/dxi_i acting on xi_key
    if i not in key:
        return 0, ()
    pos = key.index(i)
    sign = -1 if (len(key) - 1 - pos) % 2 else 1
    return sign, key[:pos] + key[pos + 1:]


def _lderiv(key: Index, i: int) -> Tuple[int, Index]:
    if i not in key:
        return 0, ()
    pos = key.index(i)
    return (-1 if pos % 2 else 1), key[:pos] + key[pos + 1:]


def _mono_partial(m: Monomial, i: int) -> Tuple[int, Monomial]:
    e = m[i - 1]
    if not e:
        return 0, m
    mm = list(m)
    mm[i - 1] = e - 1
    return e, tuple(mm)


class Multivector:
    """Grade-homogeneous polyvector field; immutable."""

    __slots__ = ("grade", "_comps")

    def __init__(self, grade: int, components: Mapping[Index, Poly] | None = None):
        if grade not in (0, 1, 2, 3):
            raise ValueError("grade must be in 0..3")
        self.grade = grade
        valid = set(index_sets(grade))
        comps: Dict[Index, Poly] = {}
        for key, p in (components or {}).items():
            key = tuple(key)
            if key not in valid:
                raise ValueError(f"index {key} not addressable in grade {grade}")
            if not isinstance(p, Poly):
                p = Poly.const(p)
            if p:
                comps[key] = p
        self._comps = comps

    # -- constructors ----------------------------------------------------
    @classmethod
    def function(cls, f: Poly) -> "Multivector":
        return cls(0, {(): f})

    @classmethod
    def vector(cls, a1=0, a2=0, a3=0) -> "Multivector":
        return cls(1, {(1,): _p(a1), (2,): _p(a2), (3,): _p(a3)})

    @classmethod
    def bivector(cls, a23=0, a31=0, a12=0) -> "Multivector":
        """Bivector ``a23 d23 + a31 d31 + a12 d12``."""
        return cls(2, {(2, 3): _p(a23), (1, 3): -_p(a31), (1, 2): _p(a12)})

    @classmethod
    def trivector(cls, f) -> "Multivector":
        return cls(3, {(1, 2, 3): _p(f)})

    @classmethod
    def zero(cls, grade: int) -> "Multivector":
        return cls(grade)

    # -- access -------------------------------------------------------------
    def __getitem__(self, key: Index) -> Poly:
        key = tuple(key)
        if key not in index_sets(self.grade):
            raise KeyError(key)
        return self._comps.get(key, Poly())

    def components(self) -> Dict[Index, Poly]:
        return dict(self._comps)

    def cyclic(self) -> tuple[Poly, Poly, Poly]:
        """Coefficients on (d23, d31, d12) of a bivector."""
        if self.grade != 2:
            raise ValueError("cyclic() needs a bivector")
        return self[(2, 3)], -self[(1, 3)], self[(1, 2)]

    def terms(self) -> Iterator[Tuple[Index, Monomial, Fraction]]:
        for key, p in self._comps.items():
            for m, c in p._terms.items():
                yield key, m, c

    def is_zero(self) -> bool:
        return not self._comps

    def __bool__(self) -> bool:
        return bool(self._comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.grade == other.grade and self._comps == other._comps

    def __hash__(self) -> int:
        return hash((self.grade, frozenset(self._comps.items())))

    # -- linear structure ----------------------------------------------------
    def _check(self, other: "Multivector") -> None:
        if other.grade != self.grade:
            raise ValueError(f"grade mismatch {self.grade} vs {other.grade}")

    def __add__(self, other: "Multivector") -> "Multivector":
        # zero results of capped grades may meet nonzero ones
        if other.is_zero() and other.grade != self.grade:
            return self
        if self.is_zero() and other.grade != self.grade:
            return other
        self._check(other)
        comps = dict(self._comps)
        for k, p in other._comps.items():
            comps[k] = comps.get(k, Poly()) + p
        return Multivector(self.grade, comps)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return Multivector(self.grade, {k: -p for k, p in self._comps.items()})

    def scale(self, f) -> "Multivector":
        """Multiply every component by a scalar or polynomial."""
        return Multivector(self.grade, {k: p * f for k, p in self._comps.items()})

    __rmul__ = scale

    def map_coeffs(self, fn) -> "Multivector":
        return Multivector(self.grade, {k: fn(p) for k, p in self._comps.items()})

    def __str__(self) -> str:
        return render_multivector(self)

    def __repr__(self) -> str:
        return f"Multivector({self.grade}, {render_multivector(self)!r})"


def _p(v) -> Poly:
    return v if isinstance(v, Poly) else Poly.const(v)


def _from_terms(grade: int, acc: Dict[Tuple[Index, Monomial], Fraction]) -> Multivector:
    comps: Dict[Index, Dict[Monomial, Fraction]] = {}
    for (key, m), c in acc.items():
        if c:
            comps.setdefault(key, {})[m] = c
    return Multivector(grade, {k: Poly._raw(t) for k, t in comps.items()})


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Exterior product; past grade 3 the result is the zero trivector."""
    grade = a.grade + b.grade
    if grade > 3:
        return Multivector.zero(3)
    acc: Dict[Tuple[Index, Monomial], Fraction] = {}
    for ka, pa in a._comps.items():
        for kb, pb in b._comps.items():
            sign, key = merge_sign(ka, kb)
            if not sign:
                continue
            for (m, c) in (pa * pb)._terms.items():
                acc[(key, m)] = acc.get((key, m), 0) + sign * c
    return _from_terms(grade, acc)


def schouten(a: Multivector, b: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket ``[a, b]`` of grade ``|a| + |b| - 1``."""
    grade = a.grade + b.grade - 1
    if grade < 0:
        return Multivector.zero(0)
    if grade > 3:
        return Multivector.zero(3)
    acc: Dict[Tuple[Index, Monomial], Fraction] = {}

    def push(sign: int, ka: Index, kb: Index, ma: Monomial, mb: Monomial, c: Fraction):
        s, key = merge_sign(ka, kb)
        if not s:
            return
        m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
        acc[(key, m)] = acc.get((key, m), 0) + sign * s * c

    a_terms = list(a.terms())
    b_terms = list(b.terms())
    for i in (1, 2, 3):
        for ka, ma, ca in a_terms:
            # (a <d/dxi_i) ^ (d/dx_i b)
            sa, ka_i = _rderiv(ka, i)
            if sa:
                for kb, mb, cb in b_terms:
                    e, mb_i = _mono_partial(mb, i)
                    if e:
                        push(sa, ka_i, kb, ma, mb_i, ca * cb * e)
            # - (d/dx_i a) ^ (d/dxi_i> b)
            e, ma_i = _mono_partial(ma, i)
            if e:
                for kb, mb, cb in b_terms:
                    sb, kb_i = _lderiv(kb, i)
                    if sb:
                        push(-sb, ka, kb_i, ma_i, mb, ca * cb * e)
    return _from_terms(grade, acc)


def lichnerowicz(pi: Multivector, c: Multivector) -> Multivector:
    """Poisson coboundary ``[pi, c]``."""
    return schouten(pi, c)


def jacobi_defect(pi: Multivector) -> Multivector:
    """``[pi, pi]``; vanishes exactly when ``pi`` is Poisson."""
    return schouten(pi, pi)


def euler_field() -> Multivector:
    x, y, z = Poly.gens()
    return Multivector.vector(x, y, z)


def koszul(phi: Poly) -> Multivector:
    """Koszul-exact bivector ``(d1 phi) d23 + (d2 phi) d31 + (d3 phi) d12``."""
    return Multivector.bivector(phi.partial(1), phi.partial(2), phi.partial(3))


def curl(pi: Multivector) -> Multivector:
    """Classical curl of ``pi = a1 d23 + a2 d31 + a3 d12`` read as (a1, a2, a3)."""
    a1, a2, a3 = pi.cyclic()
    return Multivector.vector(
        a3.partial(2) - a2.partial(3),
        a1.partial(3) - a3.partial(1),
        a2.partial(1) - a1.partial(2),
    )


def xu_decompose(pi: Multivector) -> tuple[Multivector, Poly]:
    """Split a quadratic bivector as ``(1/3) K ^ E + koszul(f)``.

    Returns ``(K, f)`` with ``K = curl(pi)`` and ``f`` cubic with zero
    constant term.
    """
    if pi.grade != 2:
        raise ValueError("xu_decompose needs a bivector")
    for p in pi.components().values():
        if p.degree() != 2 or not p.is_homogeneous():
            raise ValueError("xu_decompose needs homogeneous quadratic coefficients")
    K = curl(pi)
    residual = pi - wedge(K, euler_field()).scale(Fraction(1, 3))
    a1, a2, a3 = residual.cyclic()
    # for a gradient field of a homogeneous cubic, 3 f = x a1 + y a2 + z a3
    x, y, z = Poly.gens()
    f = (x * a1 + y * a2 + z * a3) * Fraction(1, 3)
    if koszul(f) != residual:
        raise ResidualNotExact(f"residual {residual} is not Koszul-exact")
    return K, f


# ----------------------------------------------------------------------
# text form: "yz d23 + xz d31 + (xy + z^2) d12"

def render_multivector(mv: Multivector) -> str:
    if mv.grade == 0:
        return render_poly(mv[()])
    pieces = []
    for key, sign, name in DISPLAY[mv.grade]:
        p = mv[key] * sign
        if p.is_zero():
            continue
        if len(p) == 1:
            (m, c), = p.items()
            neg = c < 0
            body = render_poly(-p if neg else p)
            body = f"{body} {name}" if body != "1" else name
        else:
            neg = False
            body = f"({render_poly(p)}) {name}"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces) if pieces else "0"


_D_TOKEN = re.compile(r"\bd(123|23|31|12|1|2|3)$")


def _split_top(s: str) -> list[tuple[int, str]]:
    out, depth, start, sign = [], 0, 0, 1
    i = 0
    if s.startswith("-"):
        sign, i, start = -1, 1, 1
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and s[i:i + 3] in (" + ", " - "):
            out.append((sign, s[start:i].strip()))
            sign = 1 if s[i + 1] == "+" else -1
            i += 3
            start = i
            continue
        i += 1
    out.append((sign, s[start:].strip()))
    return out


def parse_multivector(text: str, grade: int | None = None) -> Multivector:
    """Inverse of :func:`render_multivector`.

    ``grade`` is required only to disambiguate ``"0"`` and plain functions.
    """
    s = text.strip()
    if not re.search(r"\bd(123|23|31|12|1|2|3)\b", s):
        p = parse_poly(s)
        if grade in (None, 0):
            return Multivector.function(p)
        if p.is_zero():
            return Multivector.zero(grade)
        raise ValueError(f"no basis token in {text!r} for grade {grade}")
    comps: Dict[Index, Poly] = {}
    found = None
    for sign, chunk in _split_top(s):
        m = _D_TOKEN.search(chunk)
        if not m:
            raise ValueError(f"term {chunk!r} lacks a basis token")
        name = "d" + m.group(1)
        key, ksign = _NAME_TO_KEY[name]
        coef_txt = chunk[: m.start()].strip()
        if coef_txt.startswith("(") and coef_txt.endswith(")"):
            coef_txt = coef_txt[1:-1]
        coef = parse_poly(coef_txt) if coef_txt else Poly.const(1)
        if found is None:
            found = len(key)
        elif found != len(key):
            raise ValueError("mixed grades in multivector text")
        comps[key] = comps.get(key, Poly()) + coef * (sign * ksign)
    if grade is not None and grade != found:
        raise ValueError(f"expected grade {grade}, text has grade {found}")
    return Multivector(found, comps)
