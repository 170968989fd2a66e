"""Exact linear algebra over Q on sparse rows.

Vectors are ``dict[int, Fraction]`` with no stored zeros.  A
:class:`MatrixQ` acts on column vectors: ``m.apply(v)`` is ``m @ v``.
Subspaces are kept in reduced row-echelon form, which is canonical, so two
:class:`Subspace` values compare equal iff they are the same subspace.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

Vec = Dict[int, Fraction]


class NotASubspace(ValueError):
    """``quotient_dim`` was asked for big/small with small not inside big."""


def _axpy(v: Vec, c: Fraction, w: Vec) -> None:
    # v += c * w, in place
    for k, x in w.items():
        y = v.get(k, 0) + c * x
        if y:
            v[k] = y
        else:
            v.pop(k, None)


def vec_add(a: Vec, b: Vec, c: Fraction = Fraction(1)) -> Vec:
    out = dict(a)
    _axpy(out, c, b)
    return out


def vec_scale(a: Vec, c) -> Vec:
    if not c:
        return {}
    return {k: x * c for k, x in a.items()}


def dense(v: Vec, n: int) -> tuple:
    return tuple(v.get(i, Fraction(0)) for i in range(n))


def sparse(values: Sequence) -> Vec:
    return {i: Fraction(x) for i, x in enumerate(values) if x}


class MatrixQ:
    """Sparse rational matrix with ``rows`` x ``cols`` shape."""

    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows: int, cols: int, data: Iterable[Vec] | None = None):
        self.rows, self.cols = rows, cols
        self._r: List[Vec] = [dict(r) for r in data] if data is not None else [{} for _ in range(rows)]
        if len(self._r) != rows:
            raise ValueError("row count mismatch")
        for r in self._r:
            if r and (min(r) < 0 or max(r) >= cols):
                raise ValueError("column index out of range")

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence], cols: int | None = None) -> "MatrixQ":
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, [sparse(row) for row in entries])

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Vec]) -> "MatrixQ":
        data: List[Vec] = [{} for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x:
                    data[i][j] = Fraction(x)
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixQ":
        return cls(rows, cols)

    def row(self, i: int) -> Vec:
        return dict(self._r[i])

    def row_list(self) -> List[Vec]:
        return [dict(r) for r in self._r]

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._r[i].get(j, Fraction(0))

    def to_dense(self) -> list[list[Fraction]]:
        return [list(dense(r, self.cols)) for r in self._r]

    def transpose(self) -> "MatrixQ":
        data: List[Vec] = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._r):
            for j, x in r.items():
                data[j][i] = x
        return MatrixQ(self.cols, self.rows, data)

    def columns(self) -> List[Vec]:
        return self.transpose()._r

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, r in enumerate(self._r):
            if len(r) < len(v):
                s = sum((x * v[j] for j, x in r.items() if j in v), Fraction(0))
            else:
                s = sum((x * r[j] for j, x in v.items() if j in r), Fraction(0))
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        data = []
        for r in self._r:
            acc: Vec = {}
            for k, x in r.items():
                _axpy(acc, x, other._r[k])
            data.append(acc)
        return MatrixQ(self.rows, other.cols, data)

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return MatrixQ(self.rows, self.cols, [vec_add(a, b) for a, b in zip(self._r, other._r)])

    def __sub__(self, other: "MatrixQ") -> "MatrixQ":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return MatrixQ(self.rows, self.cols, [vec_add(a, b, Fraction(-1)) for a, b in zip(self._r, other._r)])

    def __neg__(self) -> "MatrixQ":
        return MatrixQ(self.rows, self.cols, [vec_scale(r, -1) for r in self._r])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixQ):
            return NotImplemented
        return self.shape == other.shape and self._r == other._r

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not any(self._r)

    def nnz(self) -> int:
        return sum(len(r) for r in self._r)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "MatrixQ":
        cmap = {c: k for k, c in enumerate(col_idx)}
        data = [{cmap[j]: x for j, x in self._r[i].items() if j in cmap} for i in row_idx]
        return MatrixQ(len(row_idx), len(col_idx), data)

    def __repr__(self) -> str:
        return f"MatrixQ({self.rows}x{self.cols}, nnz={self.nnz()})"


# ----------------------------------------------------------------------
# incremental Gauss-Jordan

class _RREF:
    """Fully reduced echelon rows keyed by pivot column."""

    __slots__ = ("piv",)

    def __init__(self):
        self.piv: Dict[int, Vec] = {}

    def reduce(self, v: Vec) -> Vec:
        v = dict(v)
        for p in [p for p in v if p in self.piv]:
            c = v.get(p)
            if c:
                _axpy(v, -c, self.piv[p])
        return v

    def insert(self, v: Vec) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        lead = min(v)
        inv = 1 / v[lead]
        if inv != 1:
            v = {k: x * inv for k, x in v.items()}
        for r in self.piv.values():
            c = r.get(lead)
            if c:
                _axpy(r, -c, v)
        self.piv[lead] = v
        return True

    def rows(self) -> List[Vec]:
        return [self.piv[p] for p in sorted(self.piv)]


def _rref_of(vectors: Iterable[Vec]) -> _RREF:
    e = _RREF()
    for v in vectors:
        if v:
            e.insert(v)
    return e


def rref(m: MatrixQ) -> MatrixQ:
    """Reduced row-echelon form, zero rows dropped to the bottom."""
    rows = _rref_of(m._r).rows()
    rows += [{} for _ in range(m.rows - len(rows))]
    return MatrixQ(m.rows, m.cols, rows)


def rank(m: MatrixQ) -> int:
    return len(_rref_of(m._r).piv)


class Subspace:
    """Subspace of Q^n held as canonical RREF basis rows."""

    __slots__ = ("ambient_dim", "_basis")

    def __init__(self, ambient_dim: int, vectors: Iterable[Vec] = ()):
        self.ambient_dim = ambient_dim
        rows = _rref_of(vectors).rows()
        for r in rows:
            if max(r) >= ambient_dim:
                raise ValueError("vector outside ambient space")
        self._basis = tuple(rows)

    @classmethod
    def _from_rref(cls, n: int, rows: Sequence[Vec]) -> "Subspace":
        s = object.__new__(cls)
        s.ambient_dim = n
        s._basis = tuple(rows)
        return s

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls._from_rref(n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls._from_rref(n, [])

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls._from_rref(n, [{i: Fraction(1)} for i in sorted(set(indices))])

    @property
    def dim(self) -> int:
        return len(self._basis)

    @property
    def basis(self) -> List[Vec]:
        return [dict(r) for r in self._basis]

    def pivots(self) -> List[int]:
        return [min(r) for r in self._basis]

    def matrix(self) -> MatrixQ:
        return MatrixQ(len(self._basis), self.ambient_dim, self._basis)

    def reduce(self, v: Vec) -> Vec:
        """Remainder of ``v`` modulo this subspace (zero at all pivots)."""
        v = dict(v)
        for r in self._basis:
            c = v.get(min(r))
            if c:
                _axpy(v, -c, r)
        return v

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        _same_ambient(self, other)
        return all(self.contains(v) for v in other._basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._basis == other._basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, tuple(frozenset(r.items()) for r in self._basis)))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def _kernel_rows(rows: Iterable[Vec], ncols: int) -> List[Vec]:
    e = _rref_of(rows)
    pivots = e.piv
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        v: Vec = {f: Fraction(1)}
        for p, r in pivots.items():
            c = r.get(f)
            if c:
                v[p] = -c
        out.append(v)
    return out


def kernel(m: MatrixQ) -> Subspace:
    """Null space of ``m`` inside Q^cols."""
    return Subspace(m.cols, _kernel_rows(m._r, m.cols))


def image(m: MatrixQ) -> Subspace:
    """Column space of ``m`` inside Q^rows."""
    return Subspace(m.rows, m.columns())


def annihilator(s: Subspace) -> Subspace:
    """Orthogonal complement under the standard pairing."""
    return Subspace(s.ambient_dim, _kernel_rows(s._basis, s.ambient_dim))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    if not b.dim:
        return a
    if not a.dim:
        return b
    e = _RREF()
    e.piv = {min(r): dict(r) for r in a._basis}
    for v in b._basis:
        e.insert(v)
    return Subspace._from_rref(a.ambient_dim, e.rows())


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    if not a.dim or not b.dim:
        return Subspace.zero(a.ambient_dim)
    if a.dim == a.ambient_dim:
        return b
    if b.dim == b.ambient_dim:
        return a
    return annihilator(subspace_sum(annihilator(a), annihilator(b)))


def map_subspace(m: MatrixQ, s: Subspace) -> Subspace:
    """Image ``m(s)`` inside Q^rows."""
    if s.ambient_dim != m.cols:
        raise ValueError("dimension mismatch")
    return Subspace(m.rows, (m.apply(v) for v in s._basis))


def preimage(m: MatrixQ, s: Subspace) -> Subspace:
    """``{v : m v in s}`` inside Q^cols."""
    if s.ambient_dim != m.rows:
        raise ValueError("dimension mismatch")
    if s.dim == s.ambient_dim:
        return Subspace.full(m.cols)
    ann = annihilator(s)
    proj = MatrixQ(ann.dim, m.rows, ann._basis) @ m
    return kernel(proj)


def quotient_dim(big: Subspace, small: Subspace) -> int:
    _same_ambient(big, small)
    if not big.contains_subspace(small):
        raise NotASubspace("quotient requested with small not contained in big")
    return big.dim - small.dim


class QuotientBasis:
    """Chosen representatives for ``big / small`` and coordinates in them.

    Representatives are the RREF rows of the remainders of ``big`` modulo
    ``small``; they are deterministic.
    """

    def __init__(self, big: Subspace, small: Subspace):
        _same_ambient(big, small)
        if not big.contains_subspace(small):
            raise NotASubspace("small is not contained in big")
        self.big, self.small = big, small
        rem = (small.reduce(v) for v in big._basis)
        self.reps: List[Vec] = _rref_of(rem).rows()
        self._piv = [min(r) for r in self.reps]

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: Vec) -> List[Fraction]:
        """Coordinates of ``v`` (assumed in ``big``) modulo ``small``."""
        w = self.small.reduce(v)
        return [w.get(p, Fraction(0)) for p in self._piv]

    def coords_checked(self, v: Vec) -> List[Fraction]:
        w = self.small.reduce(v)
        c = [w.get(p, Fraction(0)) for p in self._piv]
        for ci, r in zip(c, self.reps):
            if ci:
                _axpy(w, -ci, r)
        if w:
            raise NotASubspace("vector is not in the numerator space")
        return c


def solve(m: MatrixQ, b: Vec) -> Vec | None:
    """A particular solution of ``m x = b`` (free variables zero), or None."""
    aug = [dict(r) for r in m._r]
    n = m.cols
    for i, x in b.items():
        aug[i][n] = Fraction(x)
    e = _rref_of(aug)
    if n in e.piv:
        return None
    return {p: r[n] for p, r in e.piv.items() if r.get(n)}
