"""Exact integer linear algebra.

Everything here works over Z with Python integers, so there is no overflow
and no rounding.  The central routine is :func:`smith_normal_form`; kernels,
cokernels and subquotients of lattices are read off from it.

>>> A = IntMatrix.from_rows([[2, 4], [6, 8]])
>>> smith_normal_form(A).D.to_rows()
[[2, 0], [0, 4]]
>>> str(cokernel(A))
'Z/2 (+) Z/4'
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import ContainmentViolation, MatrixParseError


@dataclass(frozen=True)
class IntMatrix:
    """Immutable rectangular integer matrix stored in row-major order."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        """Build a ``rows x len(columns)`` matrix from column vectors."""
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValueError("column of wrong length")
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntMatrix":
        n = len(diag)
        return cls.from_rows(
            [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n
        )

    # access -----------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    # arithmetic -------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a = self.to_rows()
        bt = other.transpose().to_rows()
        return IntMatrix.from_rows(
            [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a], cols=other.cols
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + other.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def __pow__(self, e: int) -> "IntMatrix":
        if self.rows != self.cols or e < 0:
            raise ValueError("power needs a square matrix and e >= 0")
        result, base = IntMatrix.identity(self.rows), self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)], cols=self.cols + other.cols
        )

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix.from_rows([self.row(i) for i in idx], cols=self.cols)

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix.from_rows([[self[i, j] for j in idx] for i in range(self.rows)], cols=len(idx))

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        """Kronecker product, block (i, j) equal to ``self[i, j] * other``."""
        rows = []
        for i in range(self.rows):
            for k in range(other.rows):
                rows.append([self[i, j] * other[k, l] for j in range(self.cols) for l in range(other.cols)])
        return IntMatrix.from_rows(rows, cols=self.cols * other.cols)

    def determinant(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1

    # text format ------------------------------------------------------

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.to_rows())

    def __str__(self):
        return self.to_text()


def parse_matrix(text: str, first_line: int = 1) -> IntMatrix:
    """Parse the literal format: one row per line, whitespace separated integers.

    Blank lines and lines starting with ``#`` are ignored.  ``first_line`` is
    used only to report line numbers relative to an enclosing file.

    >>> parse_matrix("1 2\\n3 4").to_rows()
    [[1, 2], [3, 4]]
    """
    rows = []
    width = None
    for offset, line in enumerate(text.splitlines()):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        lineno = first_line + offset
        try:
            row = [int(tok) for tok in stripped.split()]
        except ValueError:
            raise MatrixParseError(f"not an integer row: {line.strip()!r}", lineno) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixParseError(f"expected {width} entries, found {len(row)}", lineno)
        rows.append(row)
    if not rows:
        raise MatrixParseError("empty matrix literal", first_line)
    return IntMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


class _Snf:
    """Working state for the elimination.

    Besides ``U`` and ``V`` we carry their inverses, which the lattice
    routines below need and which are cheap to update alongside.
    """

    def __init__(self, A: IntMatrix):
        m, n = A.rows, A.cols
        self.m, self.n = m, n
        self.a = A.to_rows()
        self.U = [[int(i == j) for j in range(m)] for i in range(m)]
        self.Ui = [[int(i == j) for j in range(m)] for i in range(m)]
        self.V = [[int(i == j) for j in range(n)] for i in range(n)]
        self.Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    # elementary row operations, mirrored on U (rows) and U^-1 (columns)
    def swap_rows(self, i, k):
        a, U, Ui = self.a, self.U, self.Ui
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for r in Ui:
            r[i], r[k] = r[k], r[i]

    def add_row(self, target, source, q):
        """row[target] += q * row[source]"""
        if q == 0:
            return
        a, U, Ui = self.a, self.U, self.Ui
        rs, rt = a[source], a[target]
        for j in range(self.n):
            rt[j] += q * rs[j]
        us, ut = U[source], U[target]
        for j in range(self.m):
            ut[j] += q * us[j]
        for r in Ui:
            r[source] -= q * r[target]

    def negate_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.U[i] = [-x for x in self.U[i]]
        for r in self.Ui:
            r[i] = -r[i]

    # elementary column operations, mirrored on V (columns) and V^-1 (rows)
    def swap_cols(self, j, k):
        for r in self.a:
            r[j], r[k] = r[k], r[j]
        for r in self.V:
            r[j], r[k] = r[k], r[j]
        self.Vi[j], self.Vi[k] = self.Vi[k], self.Vi[j]

    def add_col(self, target, source, q):
        """col[target] += q * col[source]"""
        if q == 0:
            return
        for r in self.a:
            r[target] += q * r[source]
        for r in self.V:
            r[target] += q * r[source]
        vs, vt = self.Vi[source], self.Vi[target]
        for j in range(self.n):
            vs[j] -= q * vt[j]

    def run(self):
        a = self.a
        m, n = self.m, self.n
        for t in range(min(m, n)):
            while True:
                pivot = None
                for i in range(t, m):
                    for j in range(t, n):
                        if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                            pivot = (i, j)
                if pivot is None:
                    return
                if pivot[0] != t:
                    self.swap_rows(t, pivot[0])
                if pivot[1] != t:
                    self.swap_cols(t, pivot[1])
                p = a[t][t]
                dirty = False
                for i in range(t + 1, m):
                    if a[i][t]:
                        self.add_row(i, t, -(a[i][t] // p))
                        dirty = dirty or a[i][t] != 0
                for j in range(t + 1, n):
                    if a[t][j]:
                        self.add_col(j, t, -(a[t][j] // p))
                        dirty = dirty or a[t][j] != 0
                if dirty:
                    continue
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if a[t][t] < 0:
                self.negate_row(t)


def _snf_full(A: IntMatrix) -> _Snf:
    state = _Snf(A)
    state.run()
    return state


def smith_normal_form(A: IntMatrix) -> SnfResult:
    """Smith normal form with transformation matrices.

    Pivots on a nonzero entry of least absolute value, so coefficients stay
    small for the matrix sizes used here.
    """
    s = _snf_full(A)
    return SnfResult(
        D=IntMatrix.from_rows(s.a, cols=A.cols),
        U=IntMatrix.from_rows(s.U, cols=A.rows),
        V=IntMatrix.from_rows(s.V, cols=A.cols),
    )


# ---------------------------------------------------------------------------
# Finite(ly generated) abelian groups


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group ``Z^free_rank (+) Z/d1 (+) ... (+) Z/dk``.

    ``invariant_factors`` is kept canonical (each factor >= 2 and dividing the
    next), so equality of groups is plain field equality.

    >>> FinAbGroup.from_orders([6, 2]) == FinAbGroup((2, 6))
    True
    >>> str(FinAbGroup.from_orders([4, 2, 0]))
    'Z (+) Z/2 (+) Z/4'
    """

    invariant_factors: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        if any(x < 2 for x in f) or any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"not a canonical invariant factor list: {f}")
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        object.__setattr__(self, "invariant_factors", f)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FinAbGroup":
        """Group ``(+) Z/n`` over ``orders``; ``0`` stands for a copy of ``Z``."""
        orders = [abs(int(x)) for x in orders]
        free = sum(1 for x in orders if x == 0)
        finite = [x for x in orders if x > 1]
        if not finite:
            return cls((), free)
        D = smith_normal_form(IntMatrix.diagonal(finite)).diagonal
        return cls(tuple(d for d in D if d > 1), free)

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls((), 0)

    def order(self):
        """Order as an int, or ``float('inf')`` when the free rank is positive."""
        if self.free_rank:
            return float("inf")
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def __add__(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_orders(
            list(self.invariant_factors) + list(other.invariant_factors) + [0] * (self.free_rank + other.free_rank)
        )

    def torsion(self, n: int) -> "FinAbGroup":
        """The subgroup ``G[n]`` of elements killed by ``n``."""
        return FinAbGroup.from_orders(gcd(d, n) for d in self.invariant_factors)

    def mod(self, n: int) -> "FinAbGroup":
        """The quotient ``G/nG``."""
        return FinAbGroup.from_orders(
            [gcd(d, n) for d in self.invariant_factors] + [n] * self.free_rank
        )

    def primary_part(self, p: int) -> "FinAbGroup":
        """The ``p``-primary torsion subgroup."""
        parts = []
        for d in self.invariant_factors:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            parts.append(q)
        return FinAbGroup.from_orders(parts)

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " (+) ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}


# ---------------------------------------------------------------------------
# Lattice operations


def cokernel(A: IntMatrix) -> FinAbGroup:
    """Structure of ``Z^rows / image(A)``."""
    diag = smith_normal_form(A).diagonal
    rank = sum(1 for d in diag if d)
    return FinAbGroup(tuple(d for d in diag if d > 1), A.rows - rank)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Basis of ``{x : A x = 0}`` as the columns of the returned matrix.

    These are the trailing columns of ``V``; since ``V`` is unimodular they
    span a direct summand, so the basis is saturated.
    """
    res = smith_normal_form(A)
    r = res.rank
    return res.V.select_columns(range(r, A.cols))


def _as_columns(M: IntMatrix | Sequence[Sequence[int]], rows: int) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    return IntMatrix.from_columns(M, rows)


def _span_coordinates(basis: IntMatrix, vectors: IntMatrix):
    """Coordinates of ``vectors`` in a basis of ``span(basis)`` read off the SNF.

    Returns ``(state, rank, coords)`` where ``coords`` is ``rank x k``.  The
    implicit basis is ``d_i`` times column ``i`` of ``U^-1``.
    """
    if basis.rows != vectors.rows:
        raise ValueError("ambient dimensions differ")
    s = _snf_full(basis)
    d = [s.a[i][i] for i in range(min(s.m, s.n))]
    r = sum(1 for x in d if x)
    coords = []
    for v in vectors.columns():
        w = [sum(s.U[i][k] * v[k] for k in range(s.m)) for i in range(s.m)]
        if any(w[i] for i in range(r, s.m)):
            raise ContainmentViolation(f"vector {v} lies outside the lattice")
        col = []
        for i in range(r):
            q, rem = divmod(w[i], d[i])
            if rem:
                raise ContainmentViolation(f"vector {v} lies outside the lattice")
            col.append(q)
        coords.append(col)
    return s, r, coords


def lattice_coordinates(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Integer solution ``C`` of ``basis @ C == vectors``.

    When the columns of ``basis`` are independent the solution is unique.
    Raises ContainmentViolation when some column of ``vectors`` is outside
    the lattice spanned by ``basis``.

    >>> B = IntMatrix.from_rows([[1, 0], [1, 2]])
    >>> lattice_coordinates(B, IntMatrix.from_rows([[3], [5]])).to_rows()
    [[3], [1]]
    """
    s, r, coords = _span_coordinates(basis, vectors)
    n = basis.cols
    cols = [[sum(s.V[i][j] * y[j] for j in range(r)) for i in range(n)] for y in coords]
    return IntMatrix.from_columns(cols, n) if cols else IntMatrix.zeros(n, 0)


def lattice_quotient(L: IntMatrix, J: IntMatrix) -> FinAbGroup:
    """Structure of ``span(L) / span(J)`` for column lattices ``J`` inside ``L``."""
    _, r, coords = _span_coordinates(L, J)
    C = IntMatrix.from_columns(coords, r) if coords else IntMatrix.zeros(r, 0)
    return cokernel(C)


def subquotient(K: IntMatrix, I: IntMatrix) -> FinAbGroup:
    """Structure of ``ker(K) / im(I)``.

    Raises ContainmentViolation unless ``K @ I == 0``.

    >>> str(subquotient(IntMatrix.from_rows([[1, 1]]), IntMatrix.from_rows([[2], [-2]])))
    'Z/2'
    """
    if K.cols != I.rows:
        raise ValueError("K and I do not compose")
    if I.cols and not (K @ I).is_zero():
        raise ContainmentViolation("image is not contained in the kernel")
    return lattice_quotient(kernel_basis(K), I)


def is_unimodular(M: IntMatrix) -> bool:
    return M.rows == M.cols and abs(M.determinant()) == 1
