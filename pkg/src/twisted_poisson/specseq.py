"""Spectral sequence of the filtration by ``s`` on a weight sector.

A sector with its bigrading is a double complex with ``d = d' + d''``,
``d'`` of bidegree (1, 0) and ``d''`` of bidegree (-1, 2).  Filtering by
``s >= p`` gives a regular filtered complex; a cochain of bigrade
``(r, s)`` sits in cell ``(p, q) = (s, r)`` of total degree ``n = r + s``.

Pages are computed straight from the definitions

    Z_r^{pq} = K_p  cap d^{-1} K_{p+r}
    B_r^{pq} = K_p  cap d(K_{p-r})
    E_r^{pq} = Z_r^{pq} / (Z_{r-1}^{p+1,q-1} + B_{r-1}^{pq})

inside the grade ``c = n - t`` part of the sector, so any page can be
evaluated without computing its predecessors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .cohomology import WeightSector, coboundaries, cocycles
from .linalg import (MatrixQ, QuotientBasis, Subspace, Vec, map_subspace,
                     preimage, solve, subspace_intersect, subspace_sum, vec_add)

Cell = Tuple[int, int]


class FilteredSector:
    """A weight sector together with its filtration ``K_p`` (``s >= p``)."""

    def __init__(self, sector: WeightSector, check: bool = True):
        self.sector = sector
        self.t = sector.t
        self.level = [[rs[1] for rs in sector.bigrade_of[c]] for c in range(4)]
        self.max_s = max((s for lv in self.level for s in lv), default=-1)
        self._K: Dict[Tuple[int, int], Subspace] = {}
        self._Z: Dict[Tuple[int, int, int], Subspace] = {}
        self._B: Dict[Tuple[int, int, int], Subspace] = {}
        if check:
            self.check()

    # -- filtration ----------------------------------------------------------
    def K(self, c: int, p: int) -> Subspace:
        p = max(p, 0)
        p = min(p, self.max_s + 1)
        key = (c, p)
        if key not in self._K:
            lv = self.level[c]
            self._K[key] = Subspace.coordinate(len(lv), [i for i, s in enumerate(lv) if s >= p])
        return self._K[key]

    def grade_of(self, p: int, q: int) -> int:
        return p + q - self.t

    def cell_of(self, c: int, p: int) -> Cell:
        return (p, self.t + c - p)

    def check(self) -> None:
        for c in range(4):
            dim = self.sector.dim(c)
            assert self.K(c, 0).dim == dim, "K_0 is not the whole sector"
            assert self.K(c, self.max_s + 1).dim == 0, "filtration does not end"
            for p in range(self.max_s + 1):
                assert self.K(c, p).contains_subspace(self.K(c, p + 1))
                if c < 3:
                    img = map_subspace(self.sector.d(c), self.K(c, p))
                    assert self.K(c + 1, p).contains_subspace(img), "d does not respect K_p"

    # -- Z and B ---------------------------------------------------------------
    def Z(self, c: int, p: int, r: int) -> Subspace:
        """Weak cocycles ``K_p cap d^{-1} K_{p+r}`` in grade ``c``."""
        p = max(p, 0)
        top = self.max_s + 1
        if p >= top:
            return self.K(c, top)
        r = min(r, top - p)
        key = (c, p, r)
        if key not in self._Z:
            if c >= 3:
                z = self.K(c, p)
            else:
                z = subspace_intersect(self.K(c, p), preimage(self.sector.d(c), self.K(c + 1, p + r)))
            self._Z[key] = z
        return self._Z[key]

    def B(self, c: int, p: int, r: int) -> Subspace:
        """Strong coboundaries ``K_p cap d(K_{p-r})`` in grade ``c``."""
        p = max(p, 0)
        top = self.max_s + 1
        if p >= top:
            return self.K(c, top)
        src = max(p - r, 0)
        key = (c, p, src)
        if key not in self._B:
            if c == 0:
                b = Subspace.zero(self.sector.dim(0))
            else:
                img = map_subspace(self.sector.d(c - 1), self.K(c - 1, src))
                b = subspace_intersect(self.K(c, p), img)
            self._B[key] = b
        return self._B[key]

    def Z_inf(self, c: int, p: int) -> Subspace:
        return subspace_intersect(self.K(c, p), cocycles(self.sector, c))

    def B_inf(self, c: int, p: int) -> Subspace:
        return subspace_intersect(self.K(c, p), coboundaries(self.sector, c))

    # -- pages -----------------------------------------------------------------
    def quotient(self, c: int, p: int, r: int) -> QuotientBasis:
        num = self.Z(c, p, r)
        den = subspace_sum(self.Z(c, p + 1, r - 1), self.B(c, p, r - 1))
        return QuotientBasis(num, den)

    def cells(self) -> List[Tuple[int, int]]:
        """``(c, p)`` pairs that can carry a nonzero term."""
        return [(c, p) for c in range(4) for p in range(self.max_s + 1) if self.K(c, p).dim]


def filter(sec: WeightSector, check: bool = True) -> FilteredSector:  # noqa: A001
    return FilteredSector(sec, check)


@dataclass
class PageCell:
    dim: int
    reps: List[Vec] = field(default_factory=list)


@dataclass
class Page:
    r: int
    t: int
    cells: Dict[Cell, PageCell]

    def dims(self) -> Dict[Cell, int]:
        return {pq: cell.dim for pq, cell in self.cells.items() if cell.dim}

    def to_json(self, structure: dict, sector: Optional[WeightSector] = None) -> dict:
        from .multivector import render_multivector
        out = dict(structure)
        out.update({"weight": self.t, "page": self.r, "cells": []})
        for (p, q) in sorted(self.cells):
            cell = self.cells[(p, q)]
            if not cell.dim:
                continue
            entry = {"p": p, "q": q, "dim": cell.dim}
            if sector is not None:
                c = p + q - self.t
                entry["reps"] = [render_multivector(sector.cochain(c, v)) for v in cell.reps]
            out["cells"].append(entry)
        return out


def page(fs: FilteredSector, r: int) -> Page:
    if r < 0:
        raise ValueError("page index must be non-negative")
    cells = {}
    for c, p in fs.cells():
        q = fs.quotient(c, p, r)
        cells[fs.cell_of(c, p)] = PageCell(q.dim, list(q.reps))
    return Page(r, fs.t, cells)


def page_differential(fs: FilteredSector, r: int, check: bool = True) -> Dict[Cell, MatrixQ]:
    """Matrices of ``d_r : E_r^{pq} -> E_r^{p+r, q-r+1}`` in the chosen bases.

    Columns are indexed by the representatives of the source cell.  With
    ``check`` the map is verified to kill the denominator of the source,
    so it does not depend on the representatives.
    """
    out: Dict[Cell, MatrixQ] = {}
    for c, p in fs.cells():
        if c >= 3:
            continue
        src = fs.quotient(c, p, r)
        if not src.dim:
            continue
        tgt = fs.quotient(c + 1, p + r, r)
        d = fs.sector.d(c)
        cols = []
        for v in src.reps:
            coords = tgt.coords_checked(d.apply(v))
            cols.append({i: x for i, x in enumerate(coords) if x})
        out[fs.cell_of(c, p)] = MatrixQ.from_columns(tgt.dim, cols)
        if check:
            for v in src.small.basis:
                if any(tgt.coords_checked(d.apply(v))):
                    raise AssertionError(f"d_{r} is not well defined at cell {fs.cell_of(c, p)}")
    return out


def target_cell(pq: Cell, r: int) -> Cell:
    p, q = pq
    return (p + r, q - r + 1)


# ----------------------------------------------------------------------
# triangular systems

@dataclass
class TriangularSystem:
    start: Vec
    grade: int
    cell: Cell
    length: int
    solution: Optional[List[Vec]]  # z_0 .. z_{length-1}
    failed_stage: Optional[int] = None

    @property
    def solved(self) -> bool:
        return self.solution is not None


def _block(fs: FilteredSector, c: int, s: int) -> List[int]:
    return [i for i, lv in enumerate(fs.level[c]) if lv == s]


def _stage_rows(fs: FilteredSector, c: int, p: int, upto: int) -> List[int]:
    levels = {p + 2 * j for j in range(1, upto + 1)}
    return [i for i, lv in enumerate(fs.level[c + 1]) if lv in levels]


def solve_triangular(fs: FilteredSector, z: Vec, c: int, k: int) -> TriangularSystem:
    """Solve ``d' z_0 = 0`` and ``d'' z_{j-1} + d' z_j = 0`` for ``j < k``.

    ``z`` must be bihomogeneous in grade ``c``; the unknowns ``z_j`` are
    sought at levels ``s = p + 2j``.  All stages are solved jointly; when
    there is no solution the smallest stage whose truncated system is
    unsolvable is reported.
    """
    levels = {fs.level[c][i] for i in z}
    if len(levels) > 1:
        raise ValueError("seed is not bihomogeneous")
    p = levels.pop() if levels else 0
    cell = fs.cell_of(c, p)
    if c >= 3:
        sol = [dict(z)] + [{} for _ in range(k - 1)]
        return TriangularSystem(dict(z), c, cell, k, sol)
    sec = fs.sector
    if sec.d1_mat[c].apply(z):
        return TriangularSystem(dict(z), c, cell, k, None, 0)
    if k <= 1:
        return TriangularSystem(dict(z), c, cell, k, [dict(z)])

    def attempt(stages: int) -> Optional[List[Vec]]:
        unknown = [i for j in range(1, stages + 1) for i in _block(fs, c, p + 2 * j)]
        rows = _stage_rows(fs, c, p, stages)
        d = sec.d(c)
        sub = d.submatrix(rows, unknown)
        rhs_full = d.apply(z)
        pos = {row: n for n, row in enumerate(rows)}
        rhs = {pos[i]: -x for i, x in rhs_full.items() if i in pos}
        x = solve(sub, rhs)
        if x is None:
            return None
        full = {unknown[j]: v for j, v in x.items()}
        out = [dict(z)]
        for j in range(1, stages + 1):
            blk = set(_block(fs, c, p + 2 * j))
            out.append({i: v for i, v in full.items() if i in blk})
        return out

    sol = attempt(k - 1)
    if sol is not None:
        return TriangularSystem(dict(z), c, cell, k, sol)
    for j in range(1, k):
        if attempt(j) is None:
            return TriangularSystem(dict(z), c, cell, k, None, j)
    raise AssertionError("unreachable: full system failed but every truncation solved")


def prolong_sum(ts: TriangularSystem) -> Vec:
    """``sum_j z_j`` of a solved system."""
    if ts.solution is None:
        raise ValueError("system has no solution")
    out: Vec = {}
    for v in ts.solution:
        out = vec_add(out, v)
    return out


def check_prolongation(fs: FilteredSector, ts: TriangularSystem) -> bool:
    """``d`` of the prolongation lies in ``K_{p + 2k}`` and equals ``d'' z_{k-1}``."""
    c, (p, _) = ts.grade, ts.cell
    if c >= 3:
        return True
    total = fs.sector.d(c).apply(prolong_sum(ts))
    last = fs.sector.d2_mat[c].apply(ts.solution[-1])
    return total == last and fs.K(c + 1, p + 2 * ts.length).contains(total)


def leading_part(fs: FilteredSector, c: int, v: Vec) -> Tuple[int, Vec]:
    """Lowest-level component of ``v`` and that level."""
    if not v:
        return 0, {}
    p = min(fs.level[c][i] for i in v)
    return p, {i: x for i, x in v.items() if fs.level[c][i] == p}


def eq9_check(fs: FilteredSector, r: int) -> List[Tuple[Cell, bool]]:
    """Compare ``d_{2r}`` with ``d''`` of the last entry of a solved system.

    For each representative of each cell of ``E_{2r}``, its leading
    component seeds ``S(z; r)``; the class of ``d'' z_{r-1}`` in the target
    cell must coincide with the page differential column.
    """
    if r < 1:
        raise ValueError("needs r >= 1")
    results = []
    diffs = page_differential(fs, 2 * r, check=False)
    for c, p in fs.cells():
        if c >= 3:
            continue
        src = fs.quotient(c, p, 2 * r)
        if not src.dim:
            continue
        tgt = fs.quotient(c + 1, p + 2 * r, 2 * r)
        mat = diffs[fs.cell_of(c, p)]
        ok = True
        for j, v in enumerate(src.reps):
            lp, lead = leading_part(fs, c, v)
            if lp != p:
                ok = False
                break
            ts = solve_triangular(fs, lead, c, r)
            if not ts.solved:
                ok = False
                break
            if not check_prolongation(fs, ts):
                ok = False
                break
            image = fs.sector.d2_mat[c].apply(ts.solution[-1])
            coords = tgt.coords_checked(image)
            column = [mat[i, j] for i in range(mat.rows)]
            if coords != column:
                ok = False
                break
        results.append((fs.cell_of(c, p), ok))
    return results


# ----------------------------------------------------------------------
# limit and graded cohomology

def collapse_page(pq: Cell) -> int:
    p, q = pq
    return max(p, q + 1) + 1


def einfty(fs: FilteredSector, check: bool = True) -> Page:
    """``E_infinity`` from ``Z_inf / (Z_inf^{p+1} + B_inf)``, checked against pages."""
    cells = {}
    for c, p in fs.cells():
        num = fs.Z_inf(c, p)
        den = subspace_sum(fs.Z_inf(c, p + 1), fs.B_inf(c, p))
        q = QuotientBasis(num, den)
        pq = fs.cell_of(c, p)
        if check:
            r0 = collapse_page(pq)
            for r in (r0, r0 + 1, r0 + 2):
                qr = fs.quotient(c, p, r)
                assert qr.big == num and qr.small == den, f"page {r} has not collapsed at {pq}"
        cells[pq] = PageCell(q.dim, list(q.reps))
    return Page(-1, fs.t, cells)


def graded_of_h(fs: FilteredSector) -> Dict[Cell, int]:
    """``dim H_p^n / H_{p+1}^n`` with ``H_p`` the image of ``H(K_p)`` in ``H(K)``."""
    out = {}
    for c, p in fs.cells():
        cob = coboundaries(fs.sector, c)
        hp = subspace_sum(fs.Z_inf(c, p), cob)
        hp1 = subspace_sum(fs.Z_inf(c, p + 1), cob)
        d = hp.dim - hp1.dim
        if d:
            out[fs.cell_of(c, p)] = d
    return out
