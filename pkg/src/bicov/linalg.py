"""Exact linear algebra over the scalar fields.

Sparse vectors are dicts ``column -> scalar``.  :class:`Echelon` keeps a
fully reduced row echelon form incrementally, choosing as pivot the entry of
smallest size in each incoming row (lowest degree first), which keeps
rational-function entries small.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence

__all__ = ["Matrix", "Echelon", "nullspace", "solve_affine", "canonical_basis", "SingularMatrix"]


class SingularMatrix(ValueError):
    pass


def _axpy(acc: dict, row: dict, coef):
    """acc -= coef * row (in place)."""
    for k, v in row.items():
        t = acc.get(k)
        d = coef * v
        if t is None:
            acc[k] = -d
        else:
            t = t - d
            if t:
                acc[k] = t
            else:
                del acc[k]


class Echelon:
    """Incremental reduced row echelon form of sparse vectors."""

    def __init__(self, field, smallest_pivot: bool = True):
        self.field = field
        self.rows: Dict[int, dict] = {}  # pivot column -> row with 1 at pivot
        self.smallest_pivot = smallest_pivot

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if c}
        for p in [p for p in v if p in self.rows]:
            c = v.get(p)
            if c:
                _axpy(v, self.rows[p], c)
        return v

    def add(self, vec: dict) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        if self.smallest_pivot:
            p = min(v, key=lambda k: (v[k].size(), k))
        else:
            p = min(v)
        inv = v[p].inverse()
        row = {k: c * inv for k, c in v.items()}
        row[p] = self.field.one
        for other in self.rows.values():
            c = other.get(p)
            if c:
                _axpy(other, row, c)
        self.rows[p] = row
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def free_columns(self, ncols: int) -> List[int]:
        return [c for c in range(ncols) if c not in self.rows]

    def kernel(self, ncols: int) -> List[dict]:
        """Basis of {x : row . x = 0 for every stored row}."""
        one = self.field.one
        basis = []
        for f in self.free_columns(ncols):
            v = {f: one}
            for p, row in self.rows.items():
                c = row.get(f)
                if c:
                    v[p] = -c
            basis.append(v)
        return canonical_basis(self.field, basis)


def canonical_basis(field, vectors: Iterable[dict]) -> List[dict]:
    """Reduced echelon basis of the span: first nonzero coordinate of each vector is 1."""
    ech = Echelon(field, smallest_pivot=False)
    for v in vectors:
        ech.add(v)
    return [ech.rows[p] for p in sorted(ech.rows)]


def nullspace(field, rows: Iterable[dict], ncols: int) -> List[dict]:
    ech = Echelon(field)
    for r in rows:
        ech.add(r)
    return ech.kernel(ncols)


def solve_affine(field, rows: Iterable[dict], rhs: Iterable, ncols: int) -> Optional[dict]:
    """A particular solution of rows . x = rhs (free variables set to 0), or None."""
    rhs_col = ncols
    ech = Echelon(field)
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[rhs_col] = -field(b) if not hasattr(b, "inverse") else -b
        ech.add(row)
    if rhs_col in ech.rows:
        return None
    sol = {}
    for p, row in ech.rows.items():
        c = row.get(rhs_col)
        if c:
            sol[p] = -c
    return sol


class Matrix:
    """Small dense matrix of scalars."""

    def __init__(self, field, rows: Sequence[Sequence]):
        self.field = field
        self.rows = tuple(tuple(field(x) for x in r) for r in rows)
        if not self.rows or len({len(r) for r in self.rows}) != 1:
            raise ValueError("matrix rows must be non-empty and of equal length")

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def parse(cls, field, rows: Sequence[Sequence[str]]) -> "Matrix":
        return cls(field, [[field(x) if not isinstance(x, str) else field(x) for x in r] for r in rows])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    @property
    def size(self) -> int:
        n, m = self.shape
        if n != m:
            raise ValueError("not square")
        return n

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        zero = self.field.zero
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = zero
                for t in range(k):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(row)
        return Matrix(self.field, out)

    def trace(self):
        acc = self.field.zero
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def _gauss(self):
        n = self.size
        a = [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
             for i, r in enumerate(self.rows)]
        det = self.field.one
        for col in range(n):
            piv = None
            for r in range(col, n):
                if a[r][col] and (piv is None or a[r][col].size() < a[piv][col].size()):
                    piv = r
            if piv is None:
                return self.field.zero, None
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            p = a[col][col]
            det = det * p
            inv = p.inverse()
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det, [row[n:] for row in a]

    def det(self):
        return self._gauss()[0]

    def inverse(self) -> "Matrix":
        det, inv = self._gauss()
        if inv is None:
            raise SingularMatrix("matrix is singular")
        return Matrix(self.field, inv)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def to_strings(self) -> List[List[str]]:
        return [[str(x) for x in r] for r in self.rows]

    def convert(self, field) -> "Matrix":
        return Matrix(field, [[field(x) for x in r] for r in self.rows])

    def __repr__(self):
        return f"Matrix({self.to_strings()})"
