"""Exact dense linear algebra over the rationals.

Matrices act on column vectors: a map V -> W with dim V = c, dim W = r is an
r x c matrix and composition g o f is the product ``g @ f``.  Tensor products
are flattened left-factor-major: the coordinate of ``c_i (x) v_j`` is
``i * dim(V) + j``.

Storage is FLINT's ``fmpq_mat`` (via python-flint); everything else here
(echelon bookkeeping, subspaces, quotients, factor solving) is built on top of
its reduced row echelon form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import NoSolution, ShapeError

_LITERAL = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_fmpq(x) -> flint.fmpq:
    """Coerce an int, Fraction, fmpq or ``"p/q"`` literal to ``fmpq``."""
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, flint.fmpz)):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        m = _LITERAL.match(x)
        if not m:
            raise ValueError(f"not a rational literal: {x!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"zero denominator in {x!r}")
        return flint.fmpq(int(m.group(1)), den)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def to_fraction(q: flint.fmpq) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def rational_str(q) -> str:
    """``"p/q"`` (or ``"p"`` for integers), always in lowest terms."""
    q = to_fmpq(q)
    return str(q.p) if q.q == 1 else f"{q.p}/{q.q}"


class RationalMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("_m", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        entries = [to_fmpq(x) for x in entries]
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative shape {rows}x{cols}")
        if entries and len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self._m = flint.fmpq_mat(rows, cols, entries) if entries else flint.fmpq_mat(rows, cols)
        self._hash = None

    @classmethod
    def _wrap(cls, m: flint.fmpq_mat) -> "RationalMatrix":
        out = cls.__new__(cls)
        out._m = m
        out._hash = None
        return out

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        """Build from nested row lists; ``cols`` fixes the width when there are no rows."""
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged matrix literal")
        if cols is not None and cols != width:
            raise ShapeError(f"expected {cols} columns, got {width}")
        return cls(len(rows), width, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        m = flint.fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls._wrap(m)

    @classmethod
    def column_vector(cls, values: Sequence) -> "RationalMatrix":
        return cls(len(values), 1, values)

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return to_fraction(self._m[i, j])

    def entries(self) -> list:
        """Row-major list of ``fmpq`` entries."""
        if self.rows == 0 or self.cols == 0:
            return []
        return self._m.entries()

    def to_rows(self) -> list[list[Fraction]]:
        e = self.entries()
        c = self.cols
        return [[to_fraction(x) for x in e[i * c:(i + 1) * c]] for i in range(self.rows)]

    def to_literal(self) -> list[list[str]]:
        e = self.entries()
        c = self.cols
        return [[rational_str(x) for x in e[i * c:(i + 1) * c]] for i in range(self.rows)]

    def column(self, j: int) -> "RationalMatrix":
        return self.submatrix(range(self.rows), [j])

    def columns(self) -> list["RationalMatrix"]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "RationalMatrix":
        rows, cols = list(rows), list(cols)
        e = self.entries()
        c = self.cols
        return RationalMatrix(len(rows), len(cols), [e[i * c + j] for i in rows for j in cols])

    def row_block(self, start: int, stop: int) -> "RationalMatrix":
        return self.submatrix(range(start, stop), range(self.cols))

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix._wrap(self._m.transpose())

    def inverse(self) -> "RationalMatrix":
        if self.rows != self.cols:
            raise ShapeError(f"cannot invert a {self.shape} matrix")
        if self.rows == 0:
            return self
        return RationalMatrix._wrap(self._m.inv())

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self._m.rank()

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries())

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot compose {self.shape} with {other.shape}")
        if self.cols == 0:
            return RationalMatrix.zeros(self.rows, other.cols)
        return RationalMatrix._wrap(self._m * other._m)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return RationalMatrix._wrap(self._m + other._m)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return RationalMatrix._wrap(self._m - other._m)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._wrap(-self._m)

    def scale(self, s) -> "RationalMatrix":
        return RationalMatrix._wrap(self._m * to_fmpq(s))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries() == other.entries()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, tuple(rational_str(x) for x in self.entries())))
        return self._hash

    def __repr__(self) -> str:
        return f"RationalMatrix({self.to_literal()!r}, shape={self.shape})"


def hstack(*ms: RationalMatrix, rows: int | None = None) -> RationalMatrix:
    if not ms:
        return RationalMatrix.zeros(rows or 0, 0)
    r = ms[0].rows
    if any(m.rows != r for m in ms):
        raise ShapeError("hstack: row counts differ")
    ents = [m.entries() for m in ms]
    out = []
    for i in range(r):
        for m, e in zip(ms, ents):
            out.extend(e[i * m.cols:(i + 1) * m.cols])
    return RationalMatrix(r, sum(m.cols for m in ms), out)


def vstack(*ms: RationalMatrix, cols: int | None = None) -> RationalMatrix:
    if not ms:
        return RationalMatrix.zeros(0, cols or 0)
    c = ms[0].cols
    if any(m.cols != c for m in ms):
        raise ShapeError("vstack: column counts differ")
    out = []
    for m in ms:
        out.extend(m.entries())
    return RationalMatrix(sum(m.rows for m in ms), c, out)


def block_diag(*ms: RationalMatrix) -> RationalMatrix:
    r = sum(m.rows for m in ms)
    c = sum(m.cols for m in ms)
    out = flint.fmpq_mat(r, c)
    ro = co = 0
    for m in ms:
        e = m.entries()
        for i in range(m.rows):
            for j in range(m.cols):
                x = e[i * m.cols + j]
                if x != 0:
                    out[ro + i, co + j] = x
        ro += m.rows
        co += m.cols
    return RationalMatrix._wrap(out)


def kronecker(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Tensor product of linear maps, left-factor-major flattening."""
    ar, ac = a.shape
    br, bc = b.shape
    out = flint.fmpq_mat(ar * br, ac * bc)
    be = b.entries()
    bnz = [(k // bc, k % bc, v) for k, v in enumerate(be) if v != 0]
    for k, x in enumerate(a.entries()):
        if x == 0:
            continue
        i, j = divmod(k, ac)
        for p, q, v in bnz:
            out[i * br + p, j * bc + q] = x * v
    return RationalMatrix._wrap(out)


def rref(m: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form and the strictly increasing pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, ()
    r, rank = m._m.rref()
    e = r.entries()
    c = m.cols
    pivots = []
    for i in range(rank):
        row = e[i * c:(i + 1) * c]
        start = pivots[-1] + 1 if pivots else 0
        for j in range(start, c):
            if row[j] != 0:
                pivots.append(j)
                break
    return RationalMatrix._wrap(r), tuple(pivots)


def _canonical_basis(spanning: RationalMatrix) -> RationalMatrix:
    # reduced column echelon form = transpose of the RREF of the transpose
    n = spanning.rows
    if spanning.cols == 0 or n == 0:
        return RationalMatrix.zeros(n, 0)
    r, piv = rref(spanning.T)
    return r.submatrix(range(len(piv)), range(n)).T


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held by its reduced column echelon basis.

    Two subspaces are equal exactly when their bases are equal.
    """

    ambient_dim: int
    basis: RationalMatrix
    pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def span(cls, spanning: RationalMatrix) -> "Subspace":
        b = _canonical_basis(spanning)
        pivots = []
        e = b.entries()
        k = b.cols
        for j in range(k):
            for i in range(b.rows):
                if e[i * k + j] != 0:
                    pivots.append(i)
                    break
        return cls(spanning.rows, b, tuple(pivots))

    @classmethod
    def of_vectors(cls, ambient_dim: int, vectors: Sequence[RationalMatrix]) -> "Subspace":
        return cls.span(hstack(*vectors, rows=ambient_dim))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, RationalMatrix.zeros(n, 0), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, RationalMatrix.identity(n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def __contains__(self, v: RationalMatrix) -> bool:
        return contains(self, Subspace.span(v))

    def __repr__(self) -> str:
        return f"Subspace(ambient={self.ambient_dim}, basis={self.basis.to_literal()})"


@dataclass(frozen=True)
class QuotientData:
    ambient_dim: int
    kernel: Subspace
    projection: RationalMatrix
    section: RationalMatrix

    @property
    def dim(self) -> int:
        return self.projection.rows


def canonicalize(b: RationalMatrix) -> RationalMatrix:
    return Subspace.span(b).basis


def kernel(m: RationalMatrix) -> Subspace:
    """Null space {v : m v = 0}."""
    c = m.cols
    r, piv = rref(m)
    free = [j for j in range(c) if j not in set(piv)]
    if not free:
        return Subspace.zero(c)
    e = r.entries()
    out = flint.fmpq_mat(c, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, p in enumerate(piv):
            x = e[i * c + f]
            if x != 0:
                out[p, k] = -x
    return Subspace.span(RationalMatrix._wrap(out))


def image(m: RationalMatrix) -> Subspace:
    return Subspace.span(m)


def annihilator(s: Subspace) -> RationalMatrix:
    """Rows spanning the linear forms vanishing on ``s``; ``s`` = its kernel."""
    return kernel(s.basis.T).basis.T


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ShapeError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return kernel(vstack(annihilator(a), annihilator(b), cols=a.ambient_dim))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return Subspace.span(hstack(a.basis, b.basis))


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    _same_ambient(a, b)
    if b.dim == 0 or a.dim == a.ambient_dim:
        return True
    return (annihilator(a) @ b.basis).is_zero()


def preimage_subspace(m: RationalMatrix, s: Subspace) -> Subspace:
    """{w : m w in s}."""
    if m.rows != s.ambient_dim:
        raise ShapeError(f"map has {m.rows} rows but subspace lives in dim {s.ambient_dim}")
    return kernel(annihilator(s) @ m)


def quotient(ambient: int, s: Subspace) -> QuotientData:
    """Projection onto the complement spanned by the non-pivot coordinates."""
    if s.ambient_dim != ambient:
        raise ShapeError(f"subspace lives in dim {s.ambient_dim}, not {ambient}")
    piv = set(s.pivots)
    rest = [i for i in range(ambient) if i not in piv]
    section = RationalMatrix.identity(ambient).submatrix(range(ambient), rest)
    # x = B x[pivots] + (part supported off the pivots)
    select = RationalMatrix.identity(ambient).submatrix(s.pivots, range(ambient))
    residual = RationalMatrix.identity(ambient) - s.basis @ select
    projection = residual.submatrix(rest, range(ambient))
    return QuotientData(ambient, s, projection, section)


def solve_factor(through: RationalMatrix, f: RationalMatrix, side: str = "left") -> tuple[RationalMatrix, int]:
    """Solve ``through @ g = f`` (side="left") or ``g @ through = f`` (side="right").

    Returns one exact solution and the dimension of the solution space of the
    homogeneous system; 0 means the factor is unique.  Raises NoSolution when
    ``f`` does not factor.
    """
    if side == "right":
        g, nullity = solve_factor(through.T, f.T, "left")
        return g.T, nullity
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if through.rows != f.rows:
        raise ShapeError(f"cannot factor {f.shape} through {through.shape}")
    n = through.cols
    k = f.cols
    r, piv = rref(hstack(through, f))
    if piv and piv[-1] >= n:
        raise NoSolution("target is not in the image of the factoring map")
    e = r.entries()
    width = n + k
    g = flint.fmpq_mat(n, k)
    for i, p in enumerate(piv):
        for j in range(k):
            x = e[i * width + n + j]
            if x != 0:
                g[p, j] = x
    return RationalMatrix._wrap(g), (n - len(piv)) * k
