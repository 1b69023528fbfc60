"""Exact integer linear algebra.

Smith and Hermite normal forms, saturated integer kernels and coset
normal forms for quotients of ``Z^n``.  Everything is done with Python
integers, so there is no overflow however large intermediate entries get.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "IntMatrix",
    "SNFResult",
    "QuotientLattice",
    "smith_normal_form",
    "hermite_normal_form",
    "kernel_basis",
    "is_primitive",
    "primitive_part",
    "quotient_lattice",
    "normal_form",
    "rational_solve",
    "rank",
]


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        self._rows = data
        self._ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(((0,) * cols for _ in range(rows)), cols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        if not cols:
            if nrows is None:
                raise ValueError("nrows is required without columns")
            return cls(((),) * nrows, 0)
        return cls(zip(*cols), len(cols))

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix((self.column(j) for j in range(self.cols)), self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntMatrix(
                (tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self._rows),
                other.cols,
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self._rows, self._ncols))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self._rows])

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self._rows) for j, x in enumerate(r) if i != j)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self._rows[i][i] for i in range(min(self.shape)))


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class SNFResult(NamedTuple):
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.D.diagonal() if d != 0)


def smith_normal_form(M: IntMatrix) -> SNFResult:
    """Smith normal form by elementary operations.

    The pivot at each stage is an entry of minimal absolute value in the
    remaining block. Entries that the pivot does not divide are folded
    into the pivot row, which strictly lowers the pivot on the next pass.
    """
    m, n = M.shape
    A = M.tolist()
    U = IntMatrix.identity(m).tolist()
    V = IntMatrix.identity(n).tolist()

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):  # col_dst += c * col_src
        for r in A:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(t, i, -q)
                dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(t, j, -q)
                dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if best is None:
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    return SNFResult(IntMatrix(U, m), IntMatrix(A, n), IntMatrix(V, n))


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns a basis of the row lattice in echelon form: positive pivots,
    entries above a pivot reduced into ``[0, pivot)``, zero rows dropped.
    """
    A = [list(map(int, r)) for r in rows]
    if not A:
        return []
    n = len(A[0]) if ncols is None else ncols
    r = 0
    for c in range(n):
        if r == len(A):
            break
        for i in range(r + 1, len(A)):
            while A[i][c]:
                q = A[r][c] // A[i][c]
                A[r] = [x - q * y for x, y in zip(A[r], A[i])]
                A[r], A[i] = A[i], A[r]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        p = A[r][c]
        for k in range(r):
            q = A[k][c] // p
            if q:
                A[k] = [x - q * y for x, y in zip(A[k], A[r])]
        r += 1
    out = A[:r]
    return [tuple(x) for x in out]


def rank(M: IntMatrix) -> int:
    return len(smith_normal_form(M).invariant_factors)


def kernel_basis(M: IntMatrix) -> list[tuple[int, ...]]:
    """Hermite-canonical Z-basis of ``{v : M v = 0}``.

    Columns of ``V`` past the rank of ``D`` span the kernel and, ``V``
    being unimodular, they span it as a saturated sublattice.
    """
    snf = smith_normal_form(M)
    r = len(snf.invariant_factors)
    raw = [snf.V.column(j) for j in range(r, M.cols)]
    return hermite_normal_form(raw, M.cols)


def is_primitive(v: Sequence[int]) -> bool:
    if not any(v):
        raise ValueError("primitivity is undefined for the zero vector")
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(int(x) // g for x in v)


@dataclass(frozen=True)
class QuotientLattice:
    """``Z^ambient_rank`` modulo the span of ``relations``.

    Cosets are represented by the vector reduced against the Hermite basis
    of the relation lattice, which is a complete invariant.  The Smith data
    gives the abstract structure ``Z^free_rank x prod Z/torsion``.
    """

    ambient_rank: int
    relations: IntMatrix
    snf: SNFResult = field(repr=False)
    hermite: tuple[tuple[int, ...], ...] = field(repr=False)
    torsion: tuple[int, ...]
    free_rank: int

    def normal_form(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ambient_rank:
            raise ValueError(f"expected a vector of length {self.ambient_rank}")
        w = [int(x) for x in v]
        for h in self.hermite:
            c = next(i for i, x in enumerate(h) if x)
            q = w[c] // h[c]
            if q:
                w = [a - q * b for a, b in zip(w, h)]
        return tuple(w)

    def contains(self, v: Sequence[int]) -> bool:
        """Whether ``v`` lies in the relation sublattice."""
        return not any(self.normal_form(v))

    def invariants(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates in ``Z^free_rank x prod Z/d_i`` (torsion part first)."""
        y = self.snf.U @ tuple(v)
        factors = self.snf.invariant_factors
        tors = tuple(y[i] % d for i, d in enumerate(factors) if d > 1)
        return tors + tuple(y[len(factors):])


def quotient_lattice(ambient_rank: int, relations: Sequence[Sequence[int]]) -> QuotientLattice:
    rels = [tuple(int(x) for x in r) for r in relations]
    for r in rels:
        if len(r) != ambient_rank:
            raise ValueError(f"relation {r} does not have length {ambient_rank}")
    R = IntMatrix.from_columns(rels, ambient_rank)
    snf = smith_normal_form(R)
    factors = snf.invariant_factors
    return QuotientLattice(
        ambient_rank=ambient_rank,
        relations=R,
        snf=snf,
        hermite=tuple(hermite_normal_form(rels, ambient_rank)),
        torsion=tuple(d for d in factors if d > 1),
        free_rank=ambient_rank - len(factors),
    )


def normal_form(Q: QuotientLattice, v: Sequence[int]) -> tuple[int, ...]:
    return Q.normal_form(v)


def rational_solve(A: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int]) -> list[Fraction] | None:
    """Solve a square system exactly; ``None`` if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]
