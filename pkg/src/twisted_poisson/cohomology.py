"""Weight sectors of the Lichnerowicz complex and their direct cohomology.

Cochains live in the d-basis with polynomial coefficients.  Writing a
cochain in the Y-basis, ``C = sum sigma_K / D * Y_K``, the total degree of
the numerators is the weight ``t``; the differential preserves it, so each
weight gives a finite complex

    C^0_t -> C^1_t -> C^2_t -> C^3_t

whose grade-``c`` part has d-coefficients of degree ``t - 3 + c``.  The
numerator degrees ``(j1, j2, j3)`` give the bigrading ``r = j1 + j2 + c``,
``s = j3`` under which ``d = d' + d''`` with ``d' = [lambda_I, .]`` of
bidegree (1, 0) and ``d'' = [lambda_II, .]`` of bidegree (-1, 2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .algebra import Indivisible, Monomial, Poly, monomials_of_degree
from .catalog import TwistedStructure
from .linalg import MatrixQ, QuotientBasis, Subspace, Vec, image, kernel
from .multivector import DISPLAY, Index, Multivector, render_multivector, schouten, wedge


class SectorLeak(RuntimeError):
    """The differential left the weight sector it started in."""


class WeightViolation(RuntimeError):
    """A differential component has a block outside its declared bidegree."""


class NotDivisible(ArithmeticError):
    """A cochain fails the divisibility conditions of the Y-basis form."""


# ----------------------------------------------------------------------
# Y-basis view

@dataclass(frozen=True)
class YForm:
    """``sum_K numerators[K] / D * Y_K`` with K in display order."""

    grade: int
    numerators: Tuple[Poly, ...]

    def items(self):
        for (key, sign, name), p in zip(DISPLAY[self.grade], self.numerators):
            yield name.replace("d", "Y") if name else "1", p


def _inverse_rows(s: TwistedStructure) -> List[Multivector]:
    """``D * d_j`` written over the Y-fields, as vectors indexed by Y.

    ``d_j = sum_i adj(ell)[j][i] / D * Y_i``; index ``i`` of the returned
    vector stands for ``Y_i``.
    """
    m = s.ell
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    # adj[j][i] = cof[i][j]
    return [Multivector.vector(cof[0][j], cof[1][j], cof[2][j]) for j in range(3)]


_MINOR_CACHE: Dict[int, Tuple[TwistedStructure, Dict[Index, Multivector]]] = {}


def _minors(s: TwistedStructure) -> Dict[Index, Multivector]:
    """``D^c d_J`` expanded over ``Y_K`` for every index set ``J``."""
    hit = _MINOR_CACHE.get(id(s))
    if hit is not None and hit[0] is s:
        return hit[1]
    rows = _inverse_rows(s)
    data: Dict[Index, Multivector] = {(): Multivector.function(Poly.const(1))}
    for g in (1, 2, 3):
        for J, _, _ in DISPLAY[g]:
            acc = Multivector.function(Poly.const(1))
            for j in J:
                acc = wedge(acc, rows[j - 1])
            data[J] = acc
    _MINOR_CACHE[id(s)] = (s, data)
    return data


def to_y_basis(s: TwistedStructure, c: Multivector) -> YForm:
    """Numerators ``sigma_K`` of ``c = sum sigma_K / D * Y_K``."""
    minors = _minors(s)
    D = s.det_d
    g = c.grade
    total: Dict[Index, Poly] = {}
    for J, f in c.components().items():
        for K, p in minors[J].components().items():
            total[K] = total.get(K, Poly()) + f * p
    nums = []
    for K, sign, _ in DISPLAY[g]:
        p = total.get(K, Poly()) * sign
        # p / D^g * Y_K = sigma / D * Y_K, so sigma = p * D^(1-g)
        if g == 0:
            p = p * D
        else:
            for _ in range(g - 1):
                try:
                    p = p.divide_exact(D)
                except Indivisible:
                    raise NotDivisible(f"{render_multivector(c)} is not polynomial over D in the Y-basis") from None
        nums.append(p)
    return YForm(g, tuple(nums))


def from_y_basis(s: TwistedStructure, yf: YForm) -> Multivector:
    acc = Multivector.zero(yf.grade)
    for (K, sign, _), sigma in zip(DISPLAY[yf.grade], yf.numerators):
        if sigma:
            acc = acc + s.y_wedge(K).scale(sigma * sign)
    try:
        return acc.map_coeffs(lambda p: p.divide_exact(s.det_d))
    except Indivisible:
        raise NotDivisible("numerators do not define a polynomial cochain") from None


# ----------------------------------------------------------------------
# bigrading

def bigrade_of_yform(yf: YForm) -> Tuple[int, int]:
    """``(r, s)`` read from the numerator exponents; must be unique."""
    seen = set()
    for p in yf.numerators:
        for (i, j, k), _ in p.items():
            seen.add((i + j + yf.grade, k))
    if len(seen) != 1:
        raise WeightViolation(f"cochain is not bihomogeneous: {sorted(seen)}")
    return seen.pop()


def bigrade(s: TwistedStructure, c: Multivector) -> Tuple[int, int]:
    """Bigrading of a single-term cochain via the Y-basis conversion."""
    return bigrade_of_yform(to_y_basis(s, c))


def offset_table(s: TwistedStructure) -> Dict[Index, Tuple[int, int]]:
    """``(r, s)`` of ``1 * d_J`` for every index set; monomial factors add."""
    out = {}
    for g in range(4):
        for J, sign, _ in DISPLAY[g]:
            out[J] = bigrade(s, Multivector(g, {J: Poly.const(sign)}))
    return out


# ----------------------------------------------------------------------
# sectors

@dataclass(frozen=True)
class BasisCochain:
    grade: int
    key: Index
    sign: int  # display sign: d31 is -d13
    mono: Monomial

    def multivector(self) -> Multivector:
        return Multivector(self.grade, {self.key: Poly.monomial(self.mono, self.sign)})


def sector_basis(grade: int, t: int) -> List[BasisCochain]:
    m = t - 3 + grade
    if m < 0:
        return []
    return [BasisCochain(grade, key, sign, mono)
            for key, sign, _ in DISPLAY[grade]
            for mono in monomials_of_degree(m)]


@dataclass
class WeightSector:
    structure: TwistedStructure
    t: int
    bases: List[List[BasisCochain]]
    index: List[Dict[Tuple[Index, Monomial], int]]
    d_mat: List[MatrixQ]  # d_mat[c]: C^c -> C^(c+1), c = 0, 1, 2
    d1_mat: List[MatrixQ]  # d'
    d2_mat: List[MatrixQ]  # d''
    bigrade_of: List[List[Tuple[int, int]]]

    def dim(self, c: int) -> int:
        return len(self.bases[c]) if 0 <= c <= 3 else 0

    def dims(self) -> Tuple[int, int, int, int]:
        return tuple(len(b) for b in self.bases)

    def vector(self, mv: Multivector) -> Vec:
        """Coordinates of a cochain of this sector; SectorLeak otherwise."""
        c = mv.grade
        out: Vec = {}
        for key, m, coef in mv.terms():
            sign = 1
            if c == 2 and key == (1, 3):
                sign = -1
            try:
                idx = self.index[c][(key, m)]
            except KeyError:
                raise SectorLeak(f"term {key} {m} outside weight {self.t}, grade {c}") from None
            out[idx] = coef * sign
        return out

    def cochain(self, c: int, v: Vec) -> Multivector:
        acc: Dict[Index, Dict[Monomial, Fraction]] = {}
        for i, coef in v.items():
            b = self.bases[c][i]
            acc.setdefault(b.key, {})[b.mono] = coef * b.sign
        return Multivector(c, {k: Poly(t) for k, t in acc.items()})

    def d(self, c: int) -> MatrixQ:
        """Full differential out of grade c (zero map past grade 3)."""
        if 0 <= c <= 2:
            return self.d_mat[c]
        return MatrixQ.zeros(self.dim(c + 1), self.dim(c))


def _matrix(sec: WeightSector, pi: Multivector, c: int) -> MatrixQ:
    cols = [sec.vector(schouten(pi, b.multivector())) for b in sec.bases[c]]
    return MatrixQ.from_columns(len(sec.bases[c + 1]), cols)


def build_sector(s: TwistedStructure, t: int, check: bool = True) -> WeightSector:
    """Assemble the weight-``t`` complex with its d, d', d'' matrices."""
    if t < 0:
        raise ValueError("weight must be non-negative")
    bases = [sector_basis(c, t) for c in range(4)]
    index = [{(b.key, b.mono): i for i, b in enumerate(bs)} for bs in bases]
    offsets = offset_table(s)
    bigr = [[(offsets[b.key][0] + b.mono[0] + b.mono[1], offsets[b.key][1] + b.mono[2])
             for b in bs] for bs in bases]
    sec = WeightSector(s, t, bases, index, [], [], [], bigr)
    for c in range(3):
        d1 = _matrix(sec, s.lam_I, c)
        d2 = _matrix(sec, s.lam_II, c)
        sec.d1_mat.append(d1)
        sec.d2_mat.append(d2)
        sec.d_mat.append(d1 + d2)
    if check:
        check_sector(sec)
    return sec


def check_sector(sec: WeightSector) -> None:
    """Assert d^2 = 0 and the bidegree and anticommutation identities."""
    for c in range(2):
        if not (sec.d_mat[c + 1] @ sec.d_mat[c]).is_zero():
            raise AssertionError(f"d^2 != 0 at grade {c}, weight {sec.t}")
    split_differential(sec)


def split_differential(sec: WeightSector) -> Tuple[List[MatrixQ], List[MatrixQ]]:
    """``(d', d'')`` per grade, after checking their bidegrees and relations."""
    for mats, (dr, ds), name in ((sec.d1_mat, (1, 0), "d'"), (sec.d2_mat, (-1, 2), "d''")):
        for c, m in enumerate(mats):
            src, dst = sec.bigrade_of[c], sec.bigrade_of[c + 1]
            for i, row in enumerate(m.row_list()):
                for j in row:
                    if (dst[i][0] - src[j][0], dst[i][1] - src[j][1]) != (dr, ds):
                        raise WeightViolation(
                            f"{name} entry {src[j]} -> {dst[i]} at grade {c}, weight {sec.t}")
    for c in range(2):
        a, b = sec.d1_mat, sec.d2_mat
        if not (a[c + 1] @ a[c]).is_zero():
            raise AssertionError("d'^2 != 0")
        if not (b[c + 1] @ b[c]).is_zero():
            raise AssertionError("d''^2 != 0")
        if not (a[c + 1] @ b[c] + b[c + 1] @ a[c]).is_zero():
            raise AssertionError("d'd'' + d''d' != 0")
    return list(sec.d1_mat), list(sec.d2_mat)


# ----------------------------------------------------------------------
# cohomology

@dataclass
class CohomologyEntry:
    grade: int
    weight: int
    dim: int
    reps: List[Multivector] = field(default_factory=list)


@dataclass
class CohomologyTable:
    structure: dict
    entries: List[CohomologyEntry]

    def dims(self) -> Dict[Tuple[int, int], int]:
        return {(e.grade, e.weight): e.dim for e in self.entries}

    def to_json(self, reps: bool = False) -> dict:
        out = dict(self.structure)
        out["entries"] = [{"grade": e.grade, "weight": e.weight, "dim": e.dim} for e in self.entries]
        if reps:
            out["representatives"] = [
                {"grade": e.grade, "weight": e.weight, "cochains": [render_multivector(r) for r in e.reps]}
                for e in self.entries if e.reps
            ]
        return out


def cocycles(sec: WeightSector, c: int) -> Subspace:
    return kernel(sec.d(c))


def coboundaries(sec: WeightSector, c: int) -> Subspace:
    if c == 0:
        return Subspace.zero(sec.dim(0))
    return image(sec.d(c - 1))


def direct_cohomology(sec: WeightSector, with_reps: bool = True) -> List[CohomologyEntry]:
    """``H^c`` of the sector for c = 0..3; Euler characteristic asserted."""
    out = []
    for c in range(4):
        q = QuotientBasis(cocycles(sec, c), coboundaries(sec, c))
        reps = [sec.cochain(c, v) for v in q.reps] if with_reps else []
        out.append(CohomologyEntry(c, sec.t, q.dim, reps))
    chi_c = sum((-1) ** c * sec.dim(c) for c in range(4))
    chi_h = sum((-1) ** e.grade * e.dim for e in out)
    assert chi_c == chi_h, "Euler characteristic mismatch"
    return out


def cohomology_table(s: TwistedStructure, t_max: int, with_reps: bool = False) -> CohomologyTable:
    entries: List[CohomologyEntry] = []
    for t in range(t_max + 1):
        entries.extend(direct_cohomology(build_sector(s, t), with_reps))
    return CohomologyTable(s.spec.to_json(), entries)
