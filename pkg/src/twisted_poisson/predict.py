"""Closed-form cohomology tables for lambda4 and lambda8.

Each predicted class is a named family of cochains.  Its weight ``t`` and
its spectral-sequence cell ``(p, q)`` are read off the exponents of its
Y-numerator ``(j1, j2, j3)``: ``p = j3``, ``q = j1 + j2 + c``, ``t = j1 + j2
+ j3``.  Nothing here calls the direct engine except :func:`lemma1_check`,
which exists to test explicit cochains against it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .catalog import ReducedRatio, StructureSpec, build
from .algebra import Poly

Key = Tuple[int, int]  # (grade, t)
CellKey = Tuple[int, int, int]  # (t, p, q)


@dataclass
class PredictedTable:
    source: str
    structure: dict
    t_max: int
    entries: Dict[Key, int] = field(default_factory=dict)
    cells: Dict[CellKey, int] = field(default_factory=dict)
    families: Dict[Key, List[str]] = field(default_factory=dict)

    def add(self, c: int, xy: int, z: int, dim: int, family: str) -> None:
        """Record ``dim`` classes of grade ``c`` with numerator degrees (xy, z)."""
        t = xy + z
        if dim <= 0 or t > self.t_max or t < 0:
            return
        self.entries[(c, t)] = self.entries.get((c, t), 0) + dim
        cell = (t, z, xy + c)
        self.cells[cell] = self.cells.get(cell, 0) + dim
        self.families.setdefault((c, t), []).append(f"{family} x{dim}" if dim > 1 else family)

    def dim(self, c: int, t: int) -> int:
        return self.entries.get((c, t), 0)

    def cell_dims(self, t: int) -> Dict[Tuple[int, int], int]:
        return {(p, q): d for (tt, p, q), d in self.cells.items() if tt == t and d}

    def to_json(self) -> dict:
        out = dict(self.structure)
        out["source"] = self.source
        out["entries"] = [
            {"grade": c, "weight": t, "dim": d, "family": "; ".join(self.families.get((c, t), []))}
            for (c, t), d in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            if d
        ]
        return out


# ----------------------------------------------------------------------
# lambda4

def build_ratio(spec: StructureSpec) -> ReducedRatio:
    from .catalog import reduced_ratio
    return reduced_ratio(spec)


def _admissible_lambda4(ratio: ReducedRatio, t_max: int) -> Tuple[int, int, List[int], bool]:
    """``(alpha, beta, admissible i, accidental)`` for the prolongation bookkeeping.

    Positive ratios admit every ``i`` (bounded here by the weight range);
    other ratios admit only ``i = 0`` with ``alpha = 1``, except the
    accidental ratio ``(-1, alpha)`` which also admits ``i = 1``.
    """
    if ratio.branch == "pos_rational":
        alpha, beta = ratio.den, ratio.num
        step = 2 * alpha + beta
        return alpha, beta, list(range(t_max // step + 1)), False
    if ratio.branch == "accidental":
        return ratio.den, -1, [0, 1], True
    return 1, ratio.num, [0], False


def _type1_cell(alpha: int, beta: int, i: int) -> Tuple[int, int]:
    # D'^{alpha i} z^{beta i} * D: (xy-degree, z-degree) of the numerator
    return 2 * alpha * i + 2, beta * i + 1


def _lambda4_pages(a, b, t_max: int, n: Optional[int], source: str) -> PredictedTable:
    """Page ``E_{2 n alpha + 2}`` (``n = None``: the limit) of the lambda4 sequence."""
    spec = StructureSpec.make("lambda4", a=a, b=b)
    ratio = build_ratio(spec)
    alpha, beta, adm, accidental = _admissible_lambda4(ratio, t_max)
    tab = PredictedTable(source, spec.to_json(), t_max)
    done = (lambda i: True) if n is None else (lambda i: i <= n - 1)
    acc_i = 1 if accidental else None
    for i in adm:
        xy, z = _type1_cell(alpha, beta, i)
        if xy + z > t_max:
            continue
        name = "A" if i == acc_i else f"Cas_I^{i}"
        old = done(i)
        # type 1
        if i != acc_i:
            tab.add(0, xy, z, 1, f"{name} (c=0)")
        c1 = 1 if i == acc_i else 3  # B, C, D (only D when accidental)
        tab.add(1, xy, z, c1 - (1 if old else 0), f"{name} Y_i (c=1)")
        tab.add(2, xy, z, 2 - (1 if old else 0), f"{name} (Y23, Y31) (c=2)")
        # type 2
        if i != acc_i:
            tab.add(2, xy, z, 1, f"{name} Y12")
        tab.add(3, xy, z, 1, f"{name} Y123")
    crit12 = set()
    crit123 = set()
    for i in adm:
        if done(i):
            k = i * (2 * alpha + beta)
            crit12.add(k + 2)
            crit123.add(k + 3)
    for k in range(0, t_max + 1):
        # z^k d12: numerator z^(k+1); z^k d123: numerator z^k
        if k not in crit12:
            tab.add(2, 0, k + 1, 1, f"z^{k} d12")
        if k not in crit123:
            tab.add(3, 0, k, 1, f"z^{k} d123")
    if ratio.branch == "pos_rational" and ratio.num == ratio.den:
        for k in range(0, t_max + 1):
            # x^k d23 and y^k d31: numerator x^(k+1) or y^(k+1), with c = 2
            tab.add(2, k + 1, 0, 2, f"x^{k} d23, y^{k} d31")
            # x^k d123, y^k d123: numerator of degree k; constants already counted
            if k >= 1:
                tab.add(3, k, 0, 2, f"x^{k} d123, y^{k} d123")
    return tab


def predict_E2_lambda4(a, b, t_max: int) -> PredictedTable:
    """``E_2``: the cohomology of ``d' = [lambda_I, .]``, cell by cell."""
    return _lambda4_pages(a, b, t_max, 0, "prop2")


def predict_pages_lambda4(a, b, n: int, t_max: int) -> PredictedTable:
    """The common value of the pages ``E_{2(n-1)alpha+4} .. E_{2n alpha+2}``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _lambda4_pages(a, b, t_max, n, f"thm1(n={n})")


def page_range_lambda4(a, b, n: int) -> List[int]:
    """Indices of the even pages in the ``n``-th plateau."""
    ratio = build_ratio(StructureSpec.make("lambda4", a=a, b=b))
    alpha = _admissible_lambda4(ratio, 0)[0]
    if n == 0:
        return [2]
    return list(range(2 * (n - 1) * alpha + 4, 2 * n * alpha + 3, 2))


def predict_H_lambda4(a, b, t_max: int) -> PredictedTable:
    """``H(lambda4)`` by weight, with families as in the limit of the pages."""
    tab = _lambda4_pages(a, b, t_max, None, "thm2")
    return tab


# ----------------------------------------------------------------------
# lambda8

def predict_H_lambda8(b, c, sign, t_max: int) -> PredictedTable:
    spec = StructureSpec.make("lambda8", b=b, c=c, sign=sign)
    ratio = build_ratio(spec)
    tab = PredictedTable("thm3", spec.to_json(), t_max)
    if ratio.branch == "pos_rational":
        beta, gamma = ratio.num, ratio.den
        step = 3 * beta + gamma
        adm = [i for i in range(t_max // step + 1) if (gamma * i) % 2 == 0]
    elif ratio.branch == "b_zero":
        step = 2
        adm = list(range(t_max // step + 1))
    else:
        step = None
        adm = [0]
    crit12, crit123 = set(), set()
    for i in adm:
        deg = step * i if step else 0
        # Cas^i has degree ``deg``; z-degree beta*i (0 when b = 0)
        zdeg = ratio.num * i if ratio.branch == "pos_rational" else 0
        xy, z = deg - zdeg + 2, zdeg + 1
        tab.add(0, xy, z, 1, f"Cas^{i}")
        tab.add(1, xy, z, 2, f"Cas_I^{i} Y2, Cas^{i} (Y1 + Y3)")
        tab.add(2, xy, z, 2, f"Cas_I^{i} Y12, Cas_I^{i} Y23")
        tab.add(3, xy, z, 1, f"Cas_I^{i} Y123")
        crit12.add(deg + 2)
        crit123.add(deg + 3)
    if ratio.branch == "accidental":
        gamma = ratio.den
        # A = D'^(gamma/2 - 1) / z; numerator A * D = D'^(gamma/2)
        tab.add(2, gamma, 0, 1, "A Y23")
        tab.add(3, gamma, 0, 1, "A Y123")
        crit12.add(gamma - 1)
        crit123.add(gamma)
    for k in range(0, t_max + 1):
        if k not in crit12:
            tab.add(2, 0, k + 1, 1, f"z^{k} d12")
        if k not in crit123:
            tab.add(3, 0, k, 1, f"z^{k} d123")
    return tab


# ----------------------------------------------------------------------
# explicit Casimirs

def casimir_lambda4(a, b) -> Optional[Poly]:
    """``(D' + z^2/(2a+b))^alpha z^beta`` when ``b/a`` is a positive rational."""
    spec = StructureSpec.make("lambda4", a=a, b=b)
    ratio = build_ratio(spec)
    if ratio.branch != "pos_rational":
        return None
    x, y, z = Poly.gens()
    base = x * y + z**2 * (1 / (2 * spec.p("a") + spec.p("b")))
    return base ** ratio.den * z ** ratio.num


def casimir_lambda8(b, c, sign, i: int) -> Poly:
    """The ``i``-th Casimir of lambda8 listed for the positive-ratio and b = 0 cases."""
    spec = StructureSpec.make("lambda8", b=b, c=c, sign=sign)
    ratio = build_ratio(spec)
    x, y, z = Poly.gens()
    bb, cc, sg = spec.p("b"), spec.p("c"), spec.sign
    if ratio.branch == "b_zero":
        return (x**2 + y**2 + z**2 * (sg / cc)) ** i
    if ratio.branch != "pos_rational":
        raise ValueError("only constants are Casimirs in this case")
    beta, gamma = ratio.num, ratio.den
    if (gamma * i) % 2:
        raise ValueError("gamma * i must be even")
    power = (2 * beta + gamma) * i // 2
    return (x**2 + y**2 + z**2 * (sg / (3 * bb + cc))) ** power * z ** (beta * i)


# ----------------------------------------------------------------------
# coefficient recursions for the prolongation ansatz

@dataclass
class CoeffWitness:
    """Coefficient sequences ``k = 0 .. alpha*i`` for the grade-``c`` ansatz."""

    i: int
    c: int
    A: Sequence[Fraction] = ()
    B: Sequence[Fraction] = ()
    C: Sequence[Fraction] = ()
    D: Sequence[Fraction] = ()
    E: Sequence[Fraction] = ()
    F: Sequence[Fraction] = ()


@dataclass
class Lemma1Report:
    i: int
    c: int
    equations: List[bool]  # stage 0 .. alpha*i
    conditions: List[bool]  # condition at k = 0 .. alpha*i - 1
    terminal_ok: bool
    terminal_zero: bool

    @property
    def solves(self) -> bool:
        return all(self.equations)

    @property
    def conditions_hold(self) -> bool:
        return all(self.conditions)

    @property
    def ok(self) -> bool:
        """Each equation holds exactly when its condition does; terminal value matches."""
        paired = all(e == cnd for e, cnd in zip(self.equations[1:], self.conditions))
        return self.equations[0] and paired and self.terminal_ok

    def failures(self) -> List[str]:
        out = []
        if not self.equations[0]:
            out.append("stage 0: d' Z is not zero")
        for k, (e, cnd) in enumerate(zip(self.equations[1:], self.conditions)):
            if e != cnd:
                out.append(f"stage {k + 1}: equation {'holds' if e else 'fails'} but condition "
                           f"{'holds' if cnd else 'fails'}")
        if not self.terminal_ok:
            out.append("terminal d'' value differs from the closed form")
        return out


def lemma1_conditions(alpha_i: int, w: CoeffWitness) -> List[bool]:
    out = []
    for k in range(alpha_i):
        if w.c == 0:
            ok = w.A[k + 1] == w.A[k]
        elif w.c == 1:
            lhs = w.B[k + 1] + w.C[k + 1]
            rhs = Fraction((alpha_i - k + 1) * (w.B[k] + w.C[k]) - 2 * w.D[k], alpha_i - k)
            ok = lhs == rhs and w.D[k + 1] == w.D[k]
        else:
            ok = (w.E[k + 1] - w.F[k + 1]) == Fraction(alpha_i - k + 1, alpha_i - k) * (w.E[k] - w.F[k])
        out.append(ok)
    return out


def lemma1_cochains(a, b, w: CoeffWitness):
    """The cochains ``Z^{q_ic - 2k, p_i + 2k}``, ``k = 0 .. alpha*i``."""
    from .multivector import Multivector, wedge
    spec = StructureSpec.make("lambda4", a=a, b=b)
    s = build(spec)
    ratio = s.ratio
    alpha, beta, _, _ = _admissible_lambda4(ratio, 0)
    ai = alpha * w.i
    x, y, z = Poly.gens()
    Dp = x * y
    two_ab = 2 * spec.p("a") + spec.p("b")
    Y = s.y
    Y23, Y31 = wedge(Y[1], Y[2]), wedge(Y[2], Y[0])
    out = []
    for k in range(ai + 1):
        if beta * w.i + 2 * k < 0:
            raise ValueError("negative z power")
        g = Dp ** (ai - k) * z ** (beta * w.i + 2 * k) * (Fraction(comb(ai, k)) / two_ab**k)
        if w.c == 0:
            mv = Multivector.function(g * Fraction(w.A[k]))
        elif w.c == 1:
            mv = (Y[0].scale(Fraction(w.B[k])) + Y[1].scale(Fraction(w.C[k]))
                  + Y[2].scale(Fraction(w.D[k]))).scale(g)
        else:
            mv = (Y23.scale(Fraction(w.E[k])) + Y31.scale(Fraction(w.F[k]))).scale(g)
        out.append(mv)
    return s, alpha, beta, out


def lemma1_check(a, b, i: int, c: int, witness: CoeffWitness) -> Lemma1Report:
    """Test the explicit ansatz against the real ``d'`` and ``d''``.

    Stage ``j`` is ``d'' Z_{j-1} + d' Z_j = 0`` (stage 0 is ``d' Z_0 = 0``).
    The terminal ``d'' Z_{alpha i}`` is compared with the closed form.
    """
    from .multivector import Multivector, schouten
    if witness.i != i or witness.c != c:
        raise ValueError("witness does not match (i, c)")
    s, alpha, beta, Z = lemma1_cochains(a, b, witness)
    ai = alpha * i
    d1 = lambda m: schouten(s.lam_I, m)
    d2 = lambda m: schouten(s.lam_II, m)
    eqs = [d1(Z[0]).is_zero()]
    for j in range(1, ai + 1):
        eqs.append((d2(Z[j - 1]) + d1(Z[j])).is_zero())
    conds = lemma1_conditions(ai, witness)
    term = d2(Z[ai])
    spec = s.spec
    factor = (2 * spec.p("a") + spec.p("b")) ** (-ai)
    zpow = i * (2 * alpha + beta)
    z = Poly.gens()[2]
    if c == 0:
        expected = Multivector.zero(1)
    elif c == 1:
        coef = factor * (Fraction(witness.B[ai]) + Fraction(witness.C[ai]) - 2 * Fraction(witness.D[ai]))
        expected = Multivector.bivector(0, 0, z ** (zpow + 2) * coef)
    else:
        coef = factor * (Fraction(witness.E[ai]) - Fraction(witness.F[ai]))
        expected = Multivector.trivector(z ** (zpow + 3) * coef)
    return Lemma1Report(i, c, eqs, conds, term == expected, term.is_zero())


def standard_witness(a, b, i: int, c: int, seed_values: Sequence[Fraction]) -> CoeffWitness:
    """Extend initial coefficients by the coefficient recursions.

    ``seed_values`` gives ``A_0`` (c=0), ``B_0, C_0, D_0`` (c=1) or
    ``E_0, F_0`` (c=2).  Where the recursion fixes only a sum or a
    difference, the free part is put on ``B`` (resp. ``E``).
    """
    ratio = build_ratio(StructureSpec.make("lambda4", a=a, b=b))
    alpha = _admissible_lambda4(ratio, 0)[0]
    ai = alpha * i
    vals = [Fraction(v) for v in seed_values]
    if c == 0:
        return CoeffWitness(i, c, A=[vals[0]] * (ai + 1))
    if c == 1:
        B, C, D = [vals[0]], [vals[1]], [vals[2]]
        for k in range(ai):
            s = Fraction((ai - k + 1) * (B[k] + C[k]) - 2 * D[k], ai - k)
            C.append(C[k])
            B.append(s - C[k])
            D.append(D[k])
        return CoeffWitness(i, c, B=B, C=C, D=D)
    E, F = [vals[0]], [vals[1]]
    for k in range(ai):
        diff = Fraction(ai - k + 1, ai - k) * (E[k] - F[k])
        F.append(F[k])
        E.append(F[k] + diff)
    return CoeffWitness(i, c, E=E, F=F)
