"""Exact rational scalars and sparse polynomials in x, y, z.

Scalars are :class:`fractions.Fraction` throughout.  A :class:`Poly` is an
immutable map from exponent triples ``(i, j, k)`` (degrees in x, y, z) to
nonzero Fractions.  Iteration and rendering use graded lexicographic order
with x > y > z.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Monomial = Tuple[int, int, int]
Scalar = Union[int, Fraction]

VARS = ("x", "y", "z")
ZERO_MONO: Monomial = (0, 0, 0)


class Indivisible(ArithmeticError):
    """Raised by :meth:`Poly.divide_exact` when the quotient is not a polynomial."""


def glex_key(m: Monomial):
    """Sort key placing monomials in graded-lex order, largest first."""
    return (-(m[0] + m[1] + m[2]), -m[0], -m[1], -m[2])


def monomials_of_degree(d: int) -> list[Monomial]:
    """All exponent triples of total degree ``d``, graded-lex order."""
    if d < 0:
        return []
    out = [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]
    return out


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def mono_degree(m: Monomial) -> int:
    return m[0] + m[1] + m[2]


class Poly:
    """Sparse trivariate polynomial with Fraction coefficients.

    >>> x, y, z = Poly.gens()
    >>> str(x * y + Fraction(1, 3) * z**2)
    'xy + 1/3 z^2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    m = tuple(m)
                    if len(m) != 3 or min(m) < 0:
                        raise ValueError(f"bad exponent triple {m!r}")
                    clean[m] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({ZERO_MONO: c}) if c else cls()

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> "Poly":
        return cls({m: c})

    @classmethod
    def gens(cls) -> tuple["Poly", "Poly", "Poly"]:
        return cls({(1, 0, 0): 1}), cls({(0, 1, 0): 1}), cls({(0, 0, 1): 1})

    # -- structure -----------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order."""
        for m in sorted(self._terms, key=glex_key):
            yield m, self._terms[m]

    def coeff(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((mono_degree(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m) for m in self._terms}) <= 1

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            return Poly._raw({m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def partial(self, axis: int) -> "Poly":
        """Formal derivative in x (axis=1), y (2) or z (3)."""
        if axis not in (1, 2, 3):
            raise ValueError("axis must be 1, 2 or 3")
        k = axis - 1
        out = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                mm = list(m)
                mm[k] = e - 1
                out[tuple(mm)] = c * e
        return Poly._raw(out)

    def divide_exact(self, den: "Poly") -> "Poly":
        """Return ``q`` with ``q * den == self``, else raise :class:`Indivisible`.

        Multivariate division by the graded-lex leading term; the remainder
        must vanish.
        """
        den = self._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = min(den._terms, key=glex_key)
        lc = den._terms[lead]
        rem = dict(self._terms)
        quot: Dict[Monomial, Fraction] = {}
        while rem:
            m = min(rem, key=glex_key)
            if any(m[i] < lead[i] for i in range(3)):
                raise Indivisible(f"{self} is not divisible by {den}")
            qm = (m[0] - lead[0], m[1] - lead[1], m[2] - lead[2])
            qc = rem[m] / lc
            quot[qm] = qc
            for dm, dc in den._terms.items():
                t = (qm[0] + dm[0], qm[1] + dm[1], qm[2] + dm[2])
                v = rem.get(t, 0) - qc * dc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Poly._raw(quot)

    def evaluate(self, x: Scalar, y: Scalar, z: Scalar) -> Fraction:
        pt = (Fraction(x), Fraction(y), Fraction(z))
        total = Fraction(0)
        for m, c in self._terms.items():
            total += c * pt[0] ** m[0] * pt[1] ** m[1] * pt[2] ** m[2]
        return total

    # -- text ----------------------------------------------------------
    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"Poly({render_poly(self)!r})"


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_partial(p: Poly, axis: int) -> Poly:
    return p.partial(axis)


def poly_divide_exact(num: Poly, den: Poly) -> Poly:
    return num.divide_exact(den)


def poly_sum(polys: Iterable[Poly]) -> Poly:
    acc: Dict[Monomial, Fraction] = {}
    for p in polys:
        for m, c in p._terms.items():
            acc[m] = acc.get(m, 0) + c
    return Poly._raw({m: c for m, c in acc.items() if c})


# ----------------------------------------------------------------------
# canonical text form: "xy + 1/3 z^2", "-2 x^2z + 5"

def _render_mono(m: Monomial) -> str:
    parts = []
    for v, e in zip(VARS, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "".join(parts)


def _render_abs_term(m: Monomial, c: Fraction) -> str:
    mono = _render_mono(m)
    c = abs(c)
    if not mono:
        return str(c)
    if c == 1:
        return mono
    return f"{c} {mono}"


def render_poly(p: Poly) -> str:
    out = []
    for idx, (m, c) in enumerate(p.items()):
        body = _render_abs_term(m, c)
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out) if out else "0"


_TERM_RE = re.compile(
    r"^(?P<coef>\d+(?:/\d+)?)?\s*(?P<mono>(?:\s*[xyz](?:\^\d+)?)*)$"
)
_FACTOR_RE = re.compile(r"([xyz])(?:\^(\d+))?")


def _parse_term(text: str) -> tuple[Monomial, Fraction]:
    match = _TERM_RE.match(text.strip())
    if not match or not (match.group("coef") or match.group("mono")):
        raise ValueError(f"cannot parse polynomial term {text!r}")
    coef = Fraction(match.group("coef")) if match.group("coef") else Fraction(1)
    exps = [0, 0, 0]
    for var, e in _FACTOR_RE.findall(match.group("mono")):
        exps[VARS.index(var)] += int(e) if e else 1
    return tuple(exps), coef


def parse_poly(text: str) -> Poly:
    """Inverse of :func:`render_poly`; also tolerates extra whitespace."""
    s = text.strip()
    if s == "0":
        return Poly()
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:].lstrip()
    terms: Dict[Monomial, Fraction] = {}
    pieces = re.split(r"\s+([+-])\s+", s)
    signs = [sign] + [1 if op == "+" else -1 for op in pieces[1::2]]
    for sg, chunk in zip(signs, pieces[0::2]):
        m, c = _parse_term(chunk)
        terms[m] = terms.get(m, 0) + sg * c
    return Poly(terms)
