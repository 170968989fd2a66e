"""The twisted quadratic Poisson structures lambda4, lambda8 and lambda11.

Each structure is ``lambda_I + lambda_II`` where ``lambda_I`` is a linear
combination of wedges of three commuting linear fields ``Y1, Y2, Y3`` and
``lambda_II`` is the Koszul bivector of a multiple of ``z^3``.

    lambda4(a, b)      = a yz d23 + a xz d31 + (b xy + z^2) d12
    lambda8(b, c, +/-) = b(x^2+y^2) d12 + (2b+c) xz d23 + (2b+c) yz d31 +/- z^2 d12
    lambda11(a, b)     = (a x^2 + b z^2) d12 + (2a+1) xz d23
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional, Tuple

from .algebra import Poly
from .multivector import Multivector, koszul, schouten, wedge

STRUCTURES = ("lambda4", "lambda8", "lambda11")
PARAM_NAMES = {"lambda4": ("a", "b"), "lambda8": ("b", "c"), "lambda11": ("a", "b")}


class InvalidParams(ValueError):
    """A structure parameter violates its admissibility constraint."""


@dataclass(frozen=True)
class StructureSpec:
    id: str
    params: Tuple[Tuple[str, Fraction], ...]
    sign: Optional[int] = None  # lambda8 only: +1 or -1

    @classmethod
    def make(cls, id: str, sign: int | str | None = None, **params) -> "StructureSpec":
        if id not in STRUCTURES:
            raise InvalidParams(f"unknown structure {id!r}")
        names = PARAM_NAMES[id]
        if set(params) != set(names):
            raise InvalidParams(f"{id} takes parameters {', '.join(names)}; got {sorted(params)}")
        vals = tuple((n, parse_rational(params[n])) for n in names)
        if id == "lambda8":
            sign = _parse_sign(sign if sign is not None else 1)
        elif sign is not None:
            raise InvalidParams(f"{id} takes no sign")
        spec = cls(id, vals, sign)
        spec.validate()
        return spec

    def p(self, name: str) -> Fraction:
        return dict(self.params)[name]

    def validate(self) -> None:
        p = dict(self.params)
        if self.id == "lambda4":
            if p["a"] == 0 or p["b"] == 0:
                raise InvalidParams("lambda4 needs a != 0 and b != 0")
        elif self.id == "lambda8":
            if 2 * p["b"] + p["c"] == 0:
                raise InvalidParams("lambda8 needs 2b + c != 0")
            if p["c"] == 0:
                raise InvalidParams("lambda8 needs c != 0")
            if self.sign not in (1, -1):
                raise InvalidParams("lambda8 needs sign plus or minus")
        elif self.id == "lambda11":
            if p["a"] == Fraction(-1, 3):
                raise InvalidParams("lambda11 needs a != -1/3")
            if p["b"] == 0:
                raise InvalidParams("lambda11 needs b != 0")

    def to_json(self) -> dict:
        out = {"structure": self.id, "params": {k: str(v) for k, v in self.params}}
        if self.sign is not None:
            out["sign"] = "plus" if self.sign > 0 else "minus"
        return out

    @classmethod
    def from_json(cls, data: Mapping | str) -> "StructureSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.make(data["structure"], sign=data.get("sign"), **data["params"])

    def label(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params)
        if self.sign is not None:
            body += ",+" if self.sign > 0 else ",-"
        return f"{self.id}({body})"


def parse_rational(v) -> Fraction:
    """Parse ``p/q`` strings or ints; floats are refused."""
    if isinstance(v, bool) or isinstance(v, float):
        raise InvalidParams(f"parameters must be exact rationals, got {v!r}")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip()
        if any(ch in s for ch in ".eE"):
            raise InvalidParams(f"parameters must be written as p/q, got {v!r}")
        try:
            return Fraction(s)
        except ValueError:
            raise InvalidParams(f"cannot parse rational {v!r}") from None
    raise InvalidParams(f"cannot parse rational {v!r}")


def _parse_sign(s) -> int:
    if s in (1, "+", "plus", "+1"):
        return 1
    if s in (-1, "-", "minus", "-1"):
        return -1
    raise InvalidParams(f"sign must be plus or minus, got {s!r}")


@dataclass(frozen=True)
class ReducedRatio:
    """Irreducible representative of a parameter ratio and its closed-form branch.

    ``branch`` is one of ``pos_rational``, ``other``, ``accidental`` (with
    ``num == -1``) or ``b_zero``.
    """

    num: int
    den: int
    branch: str

    @property
    def accidental(self) -> Optional[Tuple[int, int]]:
        return (self.num, self.den) if self.branch == "accidental" else None


@dataclass(frozen=True)
class TwistedStructure:
    spec: StructureSpec
    lam: Multivector
    lam_I: Multivector
    lam_II: Multivector
    y: Tuple[Multivector, Multivector, Multivector]
    ell: Tuple[Tuple[Poly, ...], ...]  # Y_i = sum_j ell[i][j] d_j
    y_coeffs: Tuple[Fraction, Fraction, Fraction]  # lam_I = a Y23 + b Y31 + c Y12
    x_fund: Tuple[Multivector, Multivector, Multivector]
    det_d: Poly
    d_prime: Optional[Poly]
    eigen: Tuple[Fraction, Fraction, Fraction]
    phi: Poly  # lam_II = koszul(phi)
    ratio: Optional[ReducedRatio]

    def y_wedge(self, key: Tuple[int, ...]) -> Multivector:
        """``Y_key`` in the d-basis, e.g. key (2, 3) gives Y2 ^ Y3."""
        out = Multivector.function(Poly.const(1))
        for i in key:
            out = wedge(out, self.y[i - 1])
        return out


def _y_fields(ell) -> Tuple[Multivector, Multivector, Multivector]:
    return tuple(Multivector.vector(*row) for row in ell)


def _det3(m) -> Poly:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def build(spec: StructureSpec) -> TwistedStructure:
    """Construct a catalog structure and assert its defining identities."""
    spec.validate()
    x, y, z = Poly.gens()
    zero = Poly()
    if spec.id == "lambda4":
        a, b = spec.p("a"), spec.p("b")
        ell = ((x, zero, zero), (zero, y, zero), (zero, zero, z))
        coeffs = (a, a, b)
        phi = z**3 * Fraction(1, 3)
        d_prime = x * y
        lam = Multivector.bivector(y * z * a, x * z * a, x * y * b + z**2)
    elif spec.id == "lambda8":
        b, c, sg = spec.p("b"), spec.p("c"), spec.sign
        ell = ((x, y, zero), (-y, x, zero), (zero, zero, z))
        coeffs = (2 * b + c, Fraction(0), b)
        phi = z**3 * Fraction(sg, 3)
        d_prime = x**2 + y**2
        lam = Multivector.bivector(x * z * (2 * b + c), y * z * (2 * b + c),
                                   (x**2 + y**2) * b + z**2 * sg)
    else:
        a, b = spec.p("a"), spec.p("b")
        ell = ((x, y, z), (zero, x, zero), (zero, zero, z * (3 * a + 1)))
        coeffs = (Fraction(1), Fraction(0), a)
        phi = z**3 * (b / 3)
        d_prime = None
        lam = Multivector.bivector(x * z * (2 * a + 1), zero, x**2 * a + z**2 * b)

    yf = _y_fields(ell)
    Y23, Y31, Y12 = wedge(yf[1], yf[2]), wedge(yf[2], yf[0]), wedge(yf[0], yf[1])
    lam_I = Y23.scale(coeffs[0]) + Y31.scale(coeffs[1]) + Y12.scale(coeffs[2])
    lam_II = koszul(phi)
    ca, cb, cc = coeffs
    x_fund = (
        yf[1].scale(cc) - yf[2].scale(cb),
        yf[2].scale(ca) - yf[0].scale(cc),
        yf[0].scale(cb) - yf[1].scale(ca),
    )
    D = _det3(ell)
    eigen = []
    for Yi in yf:
        YD = schouten(Yi, Multivector.function(D))[()]
        lam_i = YD.divide_exact(D)
        assert lam_i.degree() <= 0, "det is not an eigenvector of Y"
        eigen.append(lam_i.coeff((0, 0, 0)))
    s = TwistedStructure(
        spec=spec, lam=lam, lam_I=lam_I, lam_II=lam_II, y=yf, ell=ell,
        y_coeffs=coeffs, x_fund=x_fund, det_d=D, d_prime=d_prime,
        eigen=tuple(eigen), phi=phi, ratio=reduced_ratio(spec),
    )
    check_invariants(s)
    return s


def check_invariants(s: TwistedStructure) -> None:
    """Assert the structural identities; raises AssertionError on failure."""
    assert s.lam == s.lam_I + s.lam_II, "lambda != lambda_I + lambda_II"
    assert schouten(s.lam, s.lam).is_zero(), "[lambda, lambda] != 0"
    assert schouten(s.lam_I, s.lam_I).is_zero(), "[lambda_I, lambda_I] != 0"
    assert schouten(s.lam_I, s.lam_II).is_zero(), "[lambda_I, lambda_II] != 0"
    assert schouten(s.lam_II, s.lam_II).is_zero(), "[lambda_II, lambda_II] != 0"
    for i in range(3):
        for j in range(i + 1, 3):
            assert schouten(s.y[i], s.y[j]).is_zero(), f"[Y{i+1}, Y{j+1}] != 0"
    Dm = Multivector.function(s.det_d)
    for Yi, lam_i in zip(s.y, s.eigen):
        assert schouten(Yi, Dm) == Dm.scale(lam_i), "Y_i D != lambda_i D"
    assert s.lam_II == koszul(s.phi)


def reduced_ratio(spec: StructureSpec) -> Optional[ReducedRatio]:
    """Branch data for the closed-form predictors; None for lambda11."""
    if spec.id == "lambda4":
        q = spec.p("b") / spec.p("a")
        num, den = q.numerator, q.denominator
        if q > 0:
            return ReducedRatio(num, den, "pos_rational")
        if num == -1:
            return ReducedRatio(num, den, "accidental")
        return ReducedRatio(num, den, "other")
    if spec.id == "lambda8":
        b, c = spec.p("b"), spec.p("c")
        if b == 0:
            return ReducedRatio(0, 1, "b_zero")
        q = b / c
        num, den = q.numerator, q.denominator
        if b * (2 * b + c) < 0:
            # positive denominator (Fraction already normalises that way)
            if num == -1 and den >= 4 and den % 2 == 0:
                return ReducedRatio(num, den, "accidental")
            return ReducedRatio(num, den, "other")
        # positive numerator
        if num < 0:
            num, den = -num, -den
        assert gcd(num, den) == 1
        return ReducedRatio(num, den, "pos_rational")
    return None
