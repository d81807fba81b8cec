"""Cohomology of finite cyclic groups.

A module over ``C_n = <s>`` is presented as ``M = Z^k / im(R)`` together with
an integer matrix ``A`` giving the action of ``s`` on ``Z^k``.  The groups
``H^i(C_n, M)`` come from the periodic resolution:

* ``H^0 = M^{C_n}``
* odd ``i``:  ``ker(N) / im(s - 1)``
* even ``i > 0``: ``ker(s - 1) / im(N)``

with ``N = 1 + s + ... + s^(n-1)``.  An independent oracle,
:func:`brute_force_cohomology`, enumerates cocycles of small finite modules
directly and shares no code with the lattice computation.

>>> str(cohomology(tensor_with(builtin_rep("triv"), FinAbGroup((), 1)), 2))
'Z/2'
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContainmentViolation,
    DegreeOutOfRange,
    InvalidModule,
    MatrixParseError,
    ModelMismatch,
    TooLarge,
)
from .intlinalg import (
    FinAbGroup,
    IntMatrix,
    kernel_basis,
    lattice_coordinates,
    lattice_quotient,
    parse_matrix,
)

MAX_DEGREE = 12
BRUTE_FORCE_ORDER_LIMIT = 1 << 16
BRUTE_FORCE_COCHAIN_LIMIT = 1 << 16

REP_NAMES = ("triv", "sgn", "rho", "rho_tilde", "rho_restricted", "rho_tilde_restricted")


@dataclass(frozen=True)
class CyclicModule:
    """``Z^k / im(relations)`` with the generator of ``C_n`` acting by ``action``.

    The constructor checks that the action descends to the quotient and that
    ``action^n`` is the identity there.
    """

    n: int
    relations: IntMatrix
    action: IntMatrix

    def __post_init__(self):
        k = self.action.rows
        if self.n < 1:
            raise InvalidModule("group order must be positive")
        if self.action.cols != k:
            raise InvalidModule("action matrix must be square")
        if self.relations.rows != k:
            raise InvalidModule(
                f"relations have {self.relations.rows} rows but the lattice has rank {k}"
            )
        try:
            lattice_coordinates(self.relations, self.action @ self.relations)
        except ContainmentViolation:
            raise InvalidModule("action does not preserve the relation lattice") from None
        try:
            lattice_coordinates(self.relations, self.action ** self.n - IntMatrix.identity(k))
        except ContainmentViolation:
            raise InvalidModule(f"action^{self.n} is not the identity on the module") from None

    @property
    def rank(self) -> int:
        return self.action.rows

    def underlying_group(self) -> FinAbGroup:
        return lattice_quotient(IntMatrix.identity(self.rank), self.relations)

    def norm(self) -> IntMatrix:
        k = self.rank
        total, power = IntMatrix.zeros(k, k), IntMatrix.identity(k)
        for _ in range(self.n):
            total = total + power
            power = power @ self.action
        return total

    def direct_sum(self, other: "CyclicModule") -> "CyclicModule":
        if self.n != other.n:
            raise InvalidModule("direct sum of modules over different groups")
        return CyclicModule(self.n, _block_diag(self.relations, other.relations), _block_diag(self.action, other.action))


@dataclass(frozen=True)
class S3Representation:
    """An integral representation of S_3 on generators ``sigma = (123)`` and ``tau = (23)``.

    Only the restriction to ``C_2 = <tau>`` is a :class:`CyclicModule`.
    """

    name: str
    sigma: IntMatrix
    tau: IntMatrix
    group: str = "S3"

    def restrict_to_c2(self) -> CyclicModule:
        k = self.tau.rows
        return CyclicModule(2, IntMatrix.zeros(k, 0), self.tau)


def _block_diag(X: IntMatrix, Y: IntMatrix) -> IntMatrix:
    rows = [X.row(i) + [0] * Y.cols for i in range(X.rows)]
    rows += [[0] * X.cols + Y.row(i) for i in range(Y.rows)]
    return IntMatrix.from_rows(rows, cols=X.cols + Y.cols)


def _free(action_rows) -> CyclicModule:
    A = IntMatrix.from_rows(action_rows)
    return CyclicModule(2, IntMatrix.zeros(A.rows, 0), A)


def _induced_action(basis: IntMatrix, action: IntMatrix) -> IntMatrix:
    """Matrix of ``action`` restricted to the sublattice spanned by ``basis``."""
    return lattice_coordinates(basis, action @ basis)


_PERM_SIGMA = IntMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
_PERM_TAU = IntMatrix.from_rows([[1, 0, 0], [0, 0, 1], [0, 1, 0]])


def rho_tilde_basis() -> IntMatrix:
    """Saturated basis (as columns) of ``{(a, b, c) : a + b + c = 0}``."""
    return kernel_basis(IntMatrix.from_rows([[1, 1, 1]]))


def builtin_rep(name: str):
    """Look up one of the built-in representations.

    ``triv``, ``sgn``, ``rho_restricted`` and ``rho_tilde_restricted`` are
    modules over ``C_2``.  ``rho`` and ``rho_tilde`` are S_3 representations,
    returned as :class:`S3Representation`.
    """
    if name == "triv":
        return _free([[1]])
    if name == "sgn":
        return _free([[-1]])
    if name == "rho":
        return S3Representation("rho", _PERM_SIGMA, _PERM_TAU)
    if name == "rho_restricted":
        return CyclicModule(2, IntMatrix.zeros(3, 0), _PERM_TAU)
    if name in ("rho_tilde", "rho_tilde_restricted"):
        B = rho_tilde_basis()
        tau = _induced_action(B, _PERM_TAU)
        if name == "rho_tilde":
            return S3Representation("rho_tilde", _induced_action(B, _PERM_SIGMA), tau)
        return CyclicModule(2, IntMatrix.zeros(2, 0), tau)
    raise KeyError(f"unknown representation {name!r}; expected one of {', '.join(REP_NAMES)}")


def group_presentation(M: FinAbGroup) -> IntMatrix:
    """Square relation matrix presenting ``M`` (free summands get a zero relation)."""
    return IntMatrix.diagonal([0] * M.free_rank + list(M.invariant_factors))


def tensor_with(rep: CyclicModule, M: FinAbGroup) -> CyclicModule:
    """``rep (x) M`` with ``C_n`` acting through ``rep`` only."""
    if not rep.relations.is_zero():
        raise InvalidModule("tensor_with needs a representation on a free lattice")
    R_M = group_presentation(M)
    m = R_M.rows
    r = rep.rank
    relations = IntMatrix.identity(r).kron(R_M)
    action = rep.action.kron(IntMatrix.identity(m))
    return CyclicModule(rep.n, relations, action)


def trivial_module(M: FinAbGroup, n: int = 2) -> CyclicModule:
    R = group_presentation(M)
    return CyclicModule(n, R, IntMatrix.identity(R.rows))


# ---------------------------------------------------------------------------
# periodic resolution


def _kernel_on_module(F: IntMatrix, R: IntMatrix) -> IntMatrix:
    """Lattice ``{x in Z^k : F x in im R}`` as columns."""
    k = F.cols
    K = kernel_basis(F.hstack(R))
    return K.select_rows(range(k))


def _subquotient_on_module(F: IntMatrix, G: IntMatrix, R: IntMatrix) -> FinAbGroup:
    """``ker(F) / im(G)`` computed on ``Z^k / im(R)``."""
    kernel = _kernel_on_module(F, R).hstack(R)
    image = G.hstack(R)
    return lattice_quotient(kernel, image)


def cohomology(mod: CyclicModule, i: int) -> FinAbGroup:
    """``H^i(C_n, M)`` via the periodic resolution, ``0 <= i <= 12``."""
    if not 0 <= i <= MAX_DEGREE:
        raise DegreeOutOfRange(f"degree must lie in 0..{MAX_DEGREE}, got {i}")
    k = mod.rank
    R = mod.relations
    s_minus_1 = mod.action - IntMatrix.identity(k)
    N = mod.norm()
    empty = IntMatrix.zeros(k, 0)
    if i == 0:
        return _subquotient_on_module(s_minus_1, empty, R)
    if i % 2:
        return _subquotient_on_module(N, s_minus_1, R)
    return _subquotient_on_module(s_minus_1, N, R)


# ---------------------------------------------------------------------------
# brute-force oracle
#
# Elements of a finite M = Z^k / L are enumerated through a Hermite basis of L.
# No Smith normal form is used here, so the oracle is independent of the
# lattice path above.


def _hermite_basis(columns, k):
    """Lower-triangular basis ``b_0..b_{k-1}`` of the lattice spanned by ``columns``.

    ``b_i`` has zeros above position ``i`` and a positive diagonal entry.
    Returns None when the lattice does not have full rank.
    """
    vecs = [list(c) for c in columns if any(c)]
    basis = []
    for i in range(k):
        while True:
            live = [v for v in vecs if v[i]]
            if len(live) <= 1:
                break
            piv = min(live, key=lambda v: abs(v[i]))
            for v in live:
                if v is not piv:
                    q = v[i] // piv[i]
                    for j in range(k):
                        v[j] -= q * piv[j]
            vecs = [v for v in vecs if any(v)]
        live = [v for v in vecs if v[i]]
        if not live:
            return None
        b = live[0]
        vecs = [v for v in vecs if v is not b]
        if b[i] < 0:
            b = [-x for x in b]
        basis.append(b)
    for i in reversed(range(k)):
        for j in range(i + 1, k):
            q = basis[i][j] // basis[j][j]
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], basis[j])]
    return basis


class _FiniteModel:
    """Explicit element list of a finite module with vectorised arithmetic."""

    def __init__(self, mod: CyclicModule):
        k = mod.rank
        basis = _hermite_basis(mod.relations.columns(), k) if k else []
        if basis is None:
            raise TooLarge("module is infinite")
        self.k = k
        self.n = mod.n
        self.basis = np.array(basis, dtype=np.int64).reshape(k, k)
        self.h = [basis[i][i] for i in range(k)]
        order = 1
        for x in self.h:
            order *= x
        if order > BRUTE_FORCE_ORDER_LIMIT:
            raise TooLarge(f"module order {order} exceeds {BRUTE_FORCE_ORDER_LIMIT}")
        self.order = order
        self.strides = np.array(
            [int(np.prod(self.h[i + 1:], dtype=np.int64)) for i in range(k)], dtype=np.int64
        )
        # coordinates stay below the order limit, so int16 (or int32) suffices
        self.dtype = np.int16 if max(self.h, default=1) < 1 << 14 else np.int32
        grids = np.indices(self.h, dtype=self.dtype).reshape(k, -1).T if k else np.zeros((1, 0), self.dtype)
        self.elements = grids
        self.action = np.array(mod.action.to_rows(), dtype=np.int64).reshape(k, k)
        self.diagonal = not np.any(self.basis - np.diag(np.diag(self.basis)))
        self.h_array = np.array(self.h, dtype=np.int64)
        self.h_small = self.h_array.astype(self.dtype)
        # signed permutation actions on a diagonal basis are applied by indexing
        self.perm = None
        A = self.action
        if self.diagonal and k and np.all(np.abs(A).sum(axis=1) == 1) and np.all(np.abs(A).max(axis=1) == 1):
            cols = np.abs(A).argmax(axis=1)
            if np.array_equal(self.h_array[cols], self.h_array):
                self.perm = (cols, A[np.arange(k), cols] < 0)

    def reduce(self, X):
        X = X.astype(np.int64)
        if self.diagonal:
            return np.mod(X, self.h_array).astype(self.dtype)
        for i in range(self.k):
            q = np.floor_divide(X[..., i], self.h[i])
            X -= q[..., None] * self.basis[i]
        return X.astype(self.dtype)

    def _wrap(self, X):
        # entries of X lie in (-h, 2h); cheaper than a full reduction
        h = self.h_small
        X = X - h * (X >= h)
        X += h * (X < 0)
        return X

    def encode(self, X):
        return X.astype(np.int64) @ self.strides

    def act(self, X, times=1):
        if X is None:
            return None
        for _ in range(times % self.n):
            if self.perm is not None:
                cols, neg = self.perm
                X = X[..., cols]
                if neg.any():
                    X = self._wrap(np.where(neg, -X, X).astype(self.dtype))
            else:
                X = self.reduce(X.astype(np.int64) @ self.action.T)
        return X

    # None stands for the zero cochain value and skips the arithmetic

    def add(self, X, Y):
        if X is None or Y is None:
            return Y if X is None else X
        return self._wrap(X + Y) if self.diagonal else self.reduce(X + Y)

    def sub(self, X, Y):
        if Y is None:
            return X
        if X is None:
            X = np.zeros_like(Y)
        return self._wrap(X - Y) if self.diagonal else self.reduce(X - Y)

    def scale(self, d, X):
        return self.reduce(d * X.astype(np.int64))


def _invariant_factors_from_counts(order: int, count) -> FinAbGroup:
    """Recover a finite abelian group from its order and ``d -> |G[d]|``."""
    if order == 1:
        return FinAbGroup.trivial()
    elementary = {}
    rest, p = order, 2
    while rest > 1:
        if rest % p == 0:
            total = 0
            while rest % p == 0:
                rest //= p
                total += 1
            exps = []
            prev, k = 0, 1
            while prev < total:
                c, size = 0, count(p ** k)
                while size > 1:
                    size //= p
                    c += 1
                exps.append(c - prev)
                prev, k = c, k + 1
            # exps[k-1] = number of cyclic factors of exponent >= k
            parts = []
            for k in range(len(exps)):
                at_least = exps[k]
                more = exps[k + 1] if k + 1 < len(exps) else 0
                parts += [p ** (k + 1)] * (at_least - more)
            elementary[p] = sorted(parts, reverse=True)
        p += 1
    length = max(len(v) for v in elementary.values())
    factors = []
    for idx in range(length):
        d = 1
        for parts in elementary.values():
            if idx < len(parts):
                d *= parts[idx]
        factors.append(d)
    return FinAbGroup(tuple(sorted(factors)), 0)


def _quotient_structure(model: _FiniteModel, Z, B) -> FinAbGroup:
    """Structure of ``Z / B`` for subgroups given as arrays of cochains.

    Each row of ``Z`` (shape ``(z, c, k)``) is a cochain with ``c`` values.
    """
    Z_codes = _cochain_codes(model, Z)
    B_codes = np.unique(_cochain_codes(model, B))
    order = len(np.unique(Z_codes)) // len(B_codes)

    def count(d):
        multiples = _cochain_codes(model, model.scale(d, Z))
        return int(np.isin(multiples, B_codes).sum()) // len(B_codes)

    return _invariant_factors_from_counts(order, count)


def _cochain_codes(model: _FiniteModel, X):
    codes = model.encode(X)
    out = np.zeros(codes.shape[0], dtype=np.int64)
    for j in range(codes.shape[1]):
        out = out * model.order + codes[:, j]
    return out


def _all_cochains(model: _FiniteModel, slots: int):
    total = model.order ** slots
    if total > BRUTE_FORCE_COCHAIN_LIMIT:
        raise TooLarge(f"{total} cochains to enumerate")
    idx = np.indices((model.order,) * slots, dtype=np.int64).reshape(slots, -1).T
    return model.elements[idx]


def brute_force_cohomology(mod: CyclicModule, i: int) -> FinAbGroup:
    """``H^i(C_n, M)`` for ``i`` in 0..2 by enumerating (co)cycles.

    Only finite modules of order at most 65536 are accepted.
    """
    if i not in (0, 1, 2):
        raise DegreeOutOfRange("the brute-force oracle covers degrees 0, 1 and 2")
    model = _FiniteModel(mod)
    n = model.n
    E = model.elements

    if i == 0:
        Z = E[np.all(model.act(E) == E, axis=1)][:, None, :]
        B = np.zeros((1, 1, model.k), dtype=model.dtype)
        return _quotient_structure(model, Z, B)

    if i == 1:
        # f(s^(j+1)) = f(s) + s f(s^j), with f(s) = m running over M
        values = [None]
        for _ in range(n):
            values.append(model.add(E, model.act(values[-1])))
        ok = np.all(values[n] == 0, axis=1)
        values[0] = np.zeros_like(E)
        for a in range(1, n):
            for b in range(1, n):
                lhs = values[(a + b) % n]
                rhs = model.add(values[a], model.act(values[b], a))
                ok &= np.all(lhs == rhs, axis=1)
        Z = E[ok][:, None, :]
        B = model.sub(model.act(E), E)[:, None, :]
        return _quotient_structure(model, Z, B)

    # normalized 2-cochains: values on pairs (g, h) with g, h != 1
    pairs = [(g, h) for g in range(1, n) for h in range(1, n)]
    slot = {gh: j for j, gh in enumerate(pairs)}
    C = _all_cochains(model, len(pairs))
    def f(g, h):
        if g == 0 or h == 0:
            return None
        return C[:, slot[(g, h)], :]

    # the cocycle identity is automatic for normalized cochains when g, h or l is 1
    ok = np.ones(C.shape[0], dtype=bool)
    for g in range(1, n):
        for h in range(1, n):
            for l in range(1, n):
                lhs = model.add(model.act(f(h, l), g), f(g, (h + l) % n))
                rhs = model.add(f((g + h) % n, l), f(g, h))
                ok &= np.all(lhs == rhs, axis=1)
    Z = C[ok]

    c = _all_cochains(model, n - 1)
    def c_at(g):
        return None if g == 0 else c[:, g - 1, :]

    B = np.stack(
        [
            model.add(model.sub(model.act(c_at(h), g), c_at((g + h) % n)), c_at(g))
            for g, h in pairs
        ],
        axis=1,
    )
    return _quotient_structure(model, Z, B)


# ---------------------------------------------------------------------------
# unit sequence check


@dataclass
class UnitsSequenceReport:
    """Outcome of :func:`units_sequence_check`."""

    units: FinAbGroup
    degrees: dict = field(default_factory=dict)
    h0_surjective: bool = False

    @property
    def passed(self) -> bool:
        return self.h0_surjective and all(a == b for a, b in self.degrees.values())

    def to_json(self) -> dict:
        return {
            "units": str(self.units),
            "h0_surjects_onto_rho_tilde_invariants": self.h0_surjective,
            "degrees": {
                str(p): {"model": str(a), "trivial_module": str(b)}
                for p, (a, b) in sorted(self.degrees.items())
            },
            "passed": self.passed,
        }


def units_sequence_check(units: FinAbGroup) -> UnitsSequenceReport:
    """Compare ``H^p(C_2, -)`` of ``units (+) rho_tilde`` against the trivial module ``units``.

    The model is the equivariantly split extension of ``rho_tilde`` by the
    trivial module ``units``.  For ``p = 1..4`` the two cohomology groups must
    agree, and ``H^0`` of the model must map onto ``H^0(C_2, rho_tilde) = Z``.
    Raises ModelMismatch otherwise.
    """
    base = trivial_module(units)
    rt = builtin_rep("rho_tilde_restricted")
    model = base.direct_sum(rt)
    report = UnitsSequenceReport(units)
    for p in range(1, 5):
        report.degrees[p] = (cohomology(model, p), cohomology(base, p))

    k = model.rank
    invariants = _kernel_on_module(model.action - IntMatrix.identity(k), model.relations)
    projected = invariants.select_rows(range(base.rank, k))
    target = kernel_basis(rt.action - IntMatrix.identity(rt.rank))
    try:
        report.h0_surjective = lattice_quotient(target, projected).is_trivial()
    except ContainmentViolation:
        report.h0_surjective = False
    if not report.passed:
        raise ModelMismatch(f"unit sequence check failed for {units}: {report.to_json()}")
    return report


# ---------------------------------------------------------------------------
# fixtures


def parse_module_fixture(text: str) -> CyclicModule:
    """Parse a module file: group order, relations matrix, action matrix.

    The three blocks are separated by blank lines.  A free module can be
    given with a zero relation column.
    """
    blocks = []
    current, start = [], None
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if content:
            if start is None:
                start = lineno
            current.append(line)
        elif current:
            blocks.append((start, "\n".join(current)))
            current, start = [], None
    if current:
        blocks.append((start, "\n".join(current)))
    if len(blocks) != 3:
        raise MatrixParseError(
            f"expected 3 blocks (order, relations, action), found {len(blocks)}",
            blocks[-1][0] if blocks else 1,
        )
    (l0, b0), (l1, b1), (l2, b2) = blocks
    try:
        n = int(b0.split("#", 1)[0].strip())
    except ValueError:
        raise MatrixParseError(f"group order must be an integer, got {b0.strip()!r}", l0) from None
    R = parse_matrix(b1, l1)
    A = parse_matrix(b2, l2)
    return CyclicModule(n, R, A)


def annihilated_by(G: FinAbGroup, n: int) -> bool:
    return G.free_rank == 0 and all(n % d == 0 for d in G.invariant_factors)


__all__ = [
    "CyclicModule",
    "S3Representation",
    "REP_NAMES",
    "builtin_rep",
    "tensor_with",
    "trivial_module",
    "cohomology",
    "brute_force_cohomology",
    "units_sequence_check",
    "UnitsSequenceReport",
    "parse_module_fixture",
    "annihilated_by",
]
