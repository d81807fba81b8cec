"""Abelian group expressions and evaluators for Br(Y0(2)).

:class:`AbGroupExpr` holds sums of ``Z``, cyclic groups of prime power order,
``Q_p/Z_p`` and named symbolic atoms such as ``Br(Q)``.  The evaluators read
facts about the base (units, Picard group, Brauer group, first cohomology)
from a shipped table in ``data/base_data.json`` and combine them.

>>> str(full_brauer(parse_base("ZP:2")))
'Q_2/Z_2 (+) (Z/2)^4 (+) Z/4'
>>> str(full_brauer(parse_base("algclosed:5")))
'Z/2'
"""

from __future__ import annotations

import json
import re
from math import gcd, prod
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations

from sympy import factorint, isprime

from .cohomology import cohomology, trivial_module, units_sequence_check
from .errors import (
    BadP,
    InfiniteTerm,
    MissingTableEntry,
    SymbolicTerm,
    UnsupportedBase,
    UnsupportedP,
)
from .intlinalg import FinAbGroup
from .padic import quad_hilbert, quaternion_trivial_over_Q

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)
DEFAULT_LEVEL = 16


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# group expressions


def _prime_power_parts(n: int) -> list:
    return [p ** e for p, e in sorted(factorint(n).items())]


@dataclass(frozen=True)
class AbGroupExpr:
    """``atoms (+) Z^free_rank (+) (+) Q_p/Z_p^corank (+) (+) Z/q``.

    Cyclic factors are split into prime powers and sorted, divisible parts are
    merged by prime, atoms are sorted.  After this normalisation equality is
    plain field equality.  Atoms never combine or cancel.

    >>> AbGroupExpr.parse("Z/4 (+) Z/6 (+) Q_2/Z_2") == AbGroupExpr(cyclic=(2, 3, 4), divisible=((2, 1),))
    True
    >>> str(AbGroupExpr.parse("Z/2 (+) Z/2 (+) Z/4 (+) Z/2 (+) Z/2 (+) Q_2/Z_2"))
    'Q_2/Z_2 (+) (Z/2)^4 (+) Z/4'
    """

    free_rank: int = 0
    cyclic: tuple = ()
    divisible: tuple = ()
    atoms: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        cyc = []
        for n in self.cyclic:
            n = int(n)
            if n < 1:
                raise ValueError(f"cyclic factor must be positive, got {n}")
            if n > 1:
                cyc.extend(_prime_power_parts(n))
        merged = {}
        for p, r in self.divisible:
            p, r = int(p), int(r)
            if not isprime(p) or r < 0:
                raise ValueError(f"bad divisible part ({p}, {r})")
            if r:
                merged[p] = merged.get(p, 0) + r
        object.__setattr__(self, "cyclic", tuple(sorted(cyc, key=lambda q: (min(factorint(q)), q))))
        object.__setattr__(self, "divisible", tuple(sorted(merged.items())))
        object.__setattr__(self, "atoms", tuple(sorted(str(a) for a in self.atoms)))

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls) -> "AbGroupExpr":
        return cls()

    @classmethod
    def cyclic_group(cls, n: int) -> "AbGroupExpr":
        return cls(cyclic=(n,))

    @classmethod
    def prufer(cls, p: int, corank: int = 1) -> "AbGroupExpr":
        """``(Q_p/Z_p)^corank``."""
        return cls(divisible=((p, corank),))

    @classmethod
    def atom(cls, name: str) -> "AbGroupExpr":
        return cls(atoms=(name,))

    @classmethod
    def from_fin(cls, G: FinAbGroup) -> "AbGroupExpr":
        return cls(free_rank=G.free_rank, cyclic=G.invariant_factors)

    @classmethod
    def parse(cls, text: str) -> "AbGroupExpr":
        """Inverse of ``str``.  Unrecognised summands become atoms."""
        text = text.strip()
        if text in ("", "0"):
            return cls()
        free, cyc, div, atoms = 0, [], [], []
        for tok in text.split("(+)"):
            tok = tok.strip()
            if not tok:
                raise ValueError(f"empty summand in {text!r}")
            if tok == "0":
                continue
            m = re.fullmatch(r"Z(?:\^(\d+))?", tok)
            if m:
                free += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"\(Z/(\d+)\)\^(\d+)|Z/(\d+)", tok)
            if m:
                n = int(m.group(1) or m.group(3))
                cyc.extend([n] * int(m.group(2) or 1))
                continue
            m = re.fullmatch(r"\(Q_(\d+)/Z_\1\)\^(\d+)|Q_(\d+)/Z_\3", tok)
            if m:
                div.append((int(m.group(1) or m.group(3)), int(m.group(2) or 1)))
                continue
            atoms.append(tok)
        return cls(free, tuple(cyc), tuple(div), tuple(atoms))

    # algebra --------------------------------------------------------------

    def __add__(self, other: "AbGroupExpr") -> "AbGroupExpr":
        if isinstance(other, FinAbGroup):
            other = AbGroupExpr.from_fin(other)
        if not isinstance(other, AbGroupExpr):
            return NotImplemented
        return AbGroupExpr(
            self.free_rank + other.free_rank,
            self.cyclic + other.cyclic,
            self.divisible + other.divisible,
            self.atoms + other.atoms,
        )

    __radd__ = __add__

    def __mul__(self, k: int) -> "AbGroupExpr":
        """Direct sum of ``k`` copies."""
        out = AbGroupExpr()
        for _ in range(k):
            out = out + self
        return out

    def remove(self, other: "AbGroupExpr") -> "AbGroupExpr":
        """Drop the summands of ``other`` from ``self``; they must all be present."""
        if other.free_rank > self.free_rank:
            raise ValueError(f"{other} is not a summand of {self}")
        cyc = list(self.cyclic)
        for q in other.cyclic:
            if q not in cyc:
                raise ValueError(f"{other} is not a summand of {self}")
            cyc.remove(q)
        div = dict(self.divisible)
        for p, r in other.divisible:
            if div.get(p, 0) < r:
                raise ValueError(f"{other} is not a summand of {self}")
            div[p] -= r
        atoms = list(self.atoms)
        for a in other.atoms:
            if a not in atoms:
                raise ValueError(f"{other} is not a summand of {self}")
            atoms.remove(a)
        return AbGroupExpr(self.free_rank - other.free_rank, tuple(cyc), tuple(div.items()), tuple(atoms))

    def is_symbolic(self) -> bool:
        return bool(self.atoms)

    def is_finite(self) -> bool:
        return not (self.free_rank or self.divisible or self.atoms)

    def is_zero(self) -> bool:
        return not (self.free_rank or self.cyclic or self.divisible or self.atoms)

    def _require_concrete(self):
        if self.atoms:
            raise SymbolicTerm(f"symbolic atoms in {self}: {', '.join(self.atoms)}")

    def order(self):
        """Order as an int, ``float('inf')`` for infinite groups."""
        self._require_concrete()
        if self.free_rank or self.divisible:
            return float("inf")
        result = 1
        for q in self.cyclic:
            result *= q
        return result

    def torsion(self, n: int) -> "AbGroupExpr":
        """The subgroup killed by ``n`` (always finite)."""
        self._require_concrete()
        cyc = [gcd(q, n) for q in self.cyclic]
        for p, r in self.divisible:
            cyc.extend([p ** _vp(n, p)] * r)
        return AbGroupExpr(cyclic=tuple(cyc))

    def finite_part(self) -> "AbGroupExpr":
        return AbGroupExpr(cyclic=self.cyclic)

    def primary_part(self, p: int) -> "AbGroupExpr":
        """``p``-primary torsion; symbolic atoms are kept as they are."""
        return AbGroupExpr(
            cyclic=tuple(q for q in self.cyclic if q % p == 0),
            divisible=tuple((l, r) for l, r in self.divisible if l == p),
            atoms=self.atoms,
        )

    def summand_count(self) -> int:
        return self.free_rank + len(self.cyclic) + sum(r for _, r in self.divisible) + len(self.atoms)

    def to_fin(self) -> FinAbGroup:
        if self.divisible or self.atoms:
            raise InfiniteTerm(f"{self} is not finitely generated")
        return FinAbGroup.from_orders(list(self.cyclic) + [0] * self.free_rank)

    # printing -------------------------------------------------------------

    def __str__(self):
        parts = list(self.atoms)
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for p, r in self.divisible:
            parts.append(f"Q_{p}/Z_{p}" if r == 1 else f"(Q_{p}/Z_{p})^{r}")
        i = 0
        while i < len(self.cyclic):
            q = self.cyclic[i]
            j = i
            while j < len(self.cyclic) and self.cyclic[j] == q:
                j += 1
            parts.append(f"Z/{q}" if j - i == 1 else f"(Z/{q})^{j - i}")
            i = j
        return " (+) ".join(parts) if parts else "0"

    def __repr__(self):
        return f"AbGroupExpr({str(self)!r})"


def _expr(value) -> AbGroupExpr:
    if isinstance(value, AbGroupExpr):
        return value
    if isinstance(value, FinAbGroup):
        return AbGroupExpr.from_fin(value)
    return AbGroupExpr.parse(value)


# ---------------------------------------------------------------------------
# base data


def _data_text() -> str:
    return resources.files("brauer_y02").joinpath("data/base_data.json").read_text()


@lru_cache(maxsize=None)
def base_table() -> dict:
    """The shipped base table, loaded once."""
    return json.loads(_data_text())


def _normalise_primes(P) -> tuple:
    if isinstance(P, int):
        P = (P,)
    try:
        P = tuple(sorted({int(p) for p in P}))
    except (TypeError, ValueError):
        raise BadP(f"not a set of primes: {P!r}") from None
    if not P:
        raise BadP("the prime set is empty")
    bad = [p for p in P if not isprime(p)]
    if bad:
        raise BadP(f"not prime: {bad}")
    if 2 not in P:
        raise BadP("2 must be inverted")
    return P


def _check_supported(P: tuple):
    extra = [p for p in P if p not in SUPPORTED_PRIMES]
    if extra:
        raise UnsupportedP(f"primes {extra} are outside {SUPPORTED_PRIMES}")


@dataclass(frozen=True)
class TableEntry:
    value: AbGroupExpr
    citation: str


@dataclass(frozen=True)
class BaseDescriptor:
    """A base ring: ``Z_P = Z[1/P]``, ``Q`` or an algebraically closed field."""

    kind: str
    primes: tuple = ()
    char: int = 0

    @classmethod
    def zp(cls, P) -> "BaseDescriptor":
        return cls("ZP", _normalise_primes(P))

    @classmethod
    def rationals(cls) -> "BaseDescriptor":
        return cls("Q")

    @classmethod
    def alg_closed(cls, char: int = 0) -> "BaseDescriptor":
        if char and not isprime(char):
            raise ValueError(f"characteristic must be 0 or a prime, got {char}")
        return cls("AlgClosed", (), char)

    @property
    def key(self) -> str:
        if self.kind == "ZP":
            return "ZP:" + ",".join(str(p) for p in self.primes)
        if self.kind == "Q":
            return "Q"
        return f"algclosed:{self.char}"

    def __str__(self):
        if self.kind == "ZP":
            return f"Z[1/{prod(self.primes)}]"
        if self.kind == "Q":
            return "Q"
        return f"algebraically closed field of characteristic {self.char}"

    def _table_key(self) -> str:
        if self.kind == "AlgClosed":
            return "algclosed"
        return self.key

    def entry(self, name: str, p: int | None = None) -> TableEntry:
        """Table entry ``name`` (for odd-prime entries, at the prime ``p``)."""
        if self.kind == "ZP":
            _check_supported(self.primes)
        if self.kind == "AlgClosed" and self.char == 2:
            raise UnsupportedBase("characteristic 2 is not covered")
        rows = base_table()["bases"]
        row = rows.get(self._table_key())
        if row is None:
            raise MissingTableEntry(f"no table row for {self.key}")
        if p is not None:
            row = row.get(name, {})
            name = str(p)
        if name not in row:
            raise MissingTableEntry(f"{self.key} has no entry {name!r}")
        raw = row[name]
        return TableEntry(AbGroupExpr.parse(raw["value"]), raw["citation"])

    def value(self, name: str, p: int | None = None) -> AbGroupExpr:
        return self.entry(name, p).value


def parse_base(text: str) -> BaseDescriptor:
    """``ZP:2,3``, ``Q`` or ``algclosed:<char>``.

    >>> parse_base("ZP:3,2").key
    'ZP:2,3'
    """
    text = text.strip()
    head, _, tail = text.partition(":")
    head = head.lower()
    if head == "zp":
        try:
            P = [int(x) for x in tail.split(",") if x.strip()]
        except ValueError:
            raise BadP(f"cannot parse prime list {tail!r}") from None
        return BaseDescriptor.zp(P)
    if head == "q" and not tail:
        return BaseDescriptor.rationals()
    if head == "algclosed":
        try:
            char = int(tail or 0)
        except ValueError:
            raise ValueError(f"bad characteristic {tail!r}") from None
        return BaseDescriptor.alg_closed(char)
    raise ValueError(f"unknown base {text!r}; expected ZP:<primes>, Q or algclosed:<char>")


# class field recipe for Z_P, used to derive and audit the table rows


def class_field_entries(P) -> dict:
    """Table values for ``Z_P`` derived from ``pi_1^ab = prod_{l in P} Z_l^x``.

    * ``Hom(Z_2^x, Q_2/Z_2) = Z/2 (+) Q_2/Z_2``; an odd ``l`` contributes
      ``Z/2^v_2(l-1)``.
    * ``H^1(Z_P, Q_p/Z_p)`` for odd ``p`` in ``P``: ``Q_p/Z_p`` from ``Z_p^x``
      plus ``Z/p^v_p(l-1)`` for the other ``l``.
    * ``Br(Z_P)`` is the kernel of the sum of local invariants at ``P`` and the
      real place, so its 2-part is ``Z/2 (+) (Q_2/Z_2)^(|P|-1)`` and its odd
      ``p``-part ``(Q_p/Z_p)^(|P|-1)``.
    """
    P = _normalise_primes(P)
    k = len(P)
    h1_2 = AbGroupExpr(cyclic=(2,), divisible=((2, 1),))
    for l in P:
        if l != 2:
            h1_2 = h1_2 + AbGroupExpr.cyclic_group(2 ** _vp(l - 1, 2))
    out = {
        "units": AbGroupExpr(free_rank=k, cyclic=(2,)),
        "pic": AbGroupExpr(),
        "mu2": AbGroupExpr.cyclic_group(2),
        "br_2": AbGroupExpr(cyclic=(2,), divisible=((2, k - 1),)),
        "h1_2": h1_2,
        "br_odd": {},
        "h1_odd": {},
    }
    for p in P:
        if p == 2:
            continue
        h1 = AbGroupExpr.prufer(p)
        for l in P:
            if l != p:
                h1 = h1 + AbGroupExpr.cyclic_group(p ** _vp(l - 1, p))
        out["h1_odd"][p] = h1
        out["br_odd"][p] = AbGroupExpr.prufer(p, k - 1)
    return out


def supported_prime_sets() -> list:
    odd = [p for p in SUPPORTED_PRIMES if p != 2]
    sets = []
    for r in range(len(odd) + 1):
        for c in combinations(odd, r):
            sets.append((2,) + c)
    return sets


def audit_table() -> list:
    """Compare every shipped ``Z_P`` row against :func:`class_field_entries`.

    Returns a list of mismatch descriptions (empty when the table agrees).
    """
    problems = []
    for P in supported_prime_sets():
        base = BaseDescriptor.zp(P)
        derived = class_field_entries(P)
        for name in ("units", "pic", "mu2", "br_2", "h1_2"):
            try:
                got = base.value(name)
            except MissingTableEntry as exc:
                problems.append(str(exc))
                continue
            if got != derived[name]:
                problems.append(f"{base.key} {name}: table {got}, recipe {derived[name]}")
        for name in ("br_odd", "h1_odd"):
            for p, want in derived[name].items():
                try:
                    got = base.value(name, p)
                except MissingTableEntry as exc:
                    problems.append(str(exc))
                    continue
                if got != want:
                    problems.append(f"{base.key} {name}[{p}]: table {got}, recipe {want}")
    return problems


# ---------------------------------------------------------------------------
# G and G'


@dataclass
class GroupWithGenerators:
    """An F_2-vector space with an explicit basis."""

    group: AbGroupExpr
    generators: list

    def to_json(self) -> dict:
        return {"group": str(self.group), "generators": [str(g) for g in self.generators]}


def _f2_rank(vectors: list) -> int:
    rows = [int("".join(map(str, v)), 2) for v in vectors if any(v)]
    rank = 0
    while rows:
        pivot = max(rows)
        if not pivot:
            break
        rows.remove(pivot)
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if r >> top & 1 else r for r in rows]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def _product(us, bits) -> int:
    x = 1
    for u, b in zip(us, bits):
        if b:
            x *= u
    return x


def compute_G_and_Gprime(P) -> tuple:
    """``G`` and ``G'`` inside ``Z_P^x / squares`` (and ``(+) {+-1}`` for ``G'``).

    ``G`` is the set of square classes ``u`` with ``(-1, u)`` split over Q.
    ``G'`` is the set of pairs ``(u, e)``, ``e = +-1``, with
    ``(-1, u) = (-1, e)`` in ``Br(Q)``.

    >>> G, Gp = compute_G_and_Gprime([2])
    >>> str(G.group), G.generators, str(Gp.group)
    ('Z/2', [2], '(Z/2)^2')
    """
    P = _normalise_primes(P)
    _check_supported(P)
    basis = [-1] + list(P)
    n = len(basis)
    members = []
    for code in range(1, 2 ** n):
        bits = [(code >> i) & 1 for i in range(n)]
        u = _product(basis, bits)
        if quaternion_trivial_over_Q(-1, u):
            members.append(bits)
    # pick a basis of G greedily in code order
    G_gens, G_vecs = [], []
    for bits in members:
        if _f2_rank(G_vecs + [bits]) > len(G_vecs):
            G_vecs.append(bits)
            G_gens.append(_product(basis, bits))
    rank = len(G_vecs)
    if 2 ** rank != len(members) + 1:
        raise ArithmeticError("the split square classes do not form a subgroup")
    G = GroupWithGenerators(AbGroupExpr(cyclic=(2,) * rank), G_gens)

    # G': pairs (u, e); G sits inside as (u, +1) and (-1, -1) gives a section
    section = (-1, -1)
    if quaternion_trivial_over_Q(-1, -1) != quaternion_trivial_over_Q(-1, section[1]):
        raise ArithmeticError("(-1, -1) does not lie in G'")
    Gp = GroupWithGenerators(
        AbGroupExpr(cyclic=(2,) * (rank + 1)),
        [(g, 1) for g in G_gens] + [section],
    )
    return G, Gp


def gprime_order_by_enumeration(P) -> int:
    """``|G'|`` by testing every pair ``(u, e)`` against local symbols place by place."""
    P = _normalise_primes(P)
    basis = [-1] + list(P)
    places = ["real"] + list(P)
    count = 0
    for code in range(2 ** len(basis)):
        u = _product(basis, [(code >> i) & 1 for i in range(len(basis))])
        for e in (1, -1):
            if all(quad_hilbert(-1, u, v) == quad_hilbert(-1, e, v) for v in places):
                count += 1
    return count


# ---------------------------------------------------------------------------
# spectral sequence bookkeeping


@dataclass
class E2Page:
    base: BaseDescriptor
    entries: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    differentials: list = field(default_factory=list)

    def __getitem__(self, ij) -> AbGroupExpr:
        return self.entries[ij]

    def to_json(self) -> dict:
        return {
            "base": self.base.key,
            "entries": {f"{i},{j}": str(v) for (i, j), v in sorted(self.entries.items())},
            "notes": {f"{i},{j}": v for (i, j), v in sorted(self.notes.items())},
            "differentials": list(self.differentials),
        }


def _cohomology_of_trivial(M: AbGroupExpr, i: int) -> AbGroupExpr:
    return AbGroupExpr.from_fin(cohomology(trivial_module(M.to_fin()), i))


def _two_local(M: AbGroupExpr) -> AbGroupExpr:
    """Localisation at 2: odd torsion is dropped, free and 2-parts stay."""
    return AbGroupExpr(
        M.free_rank,
        tuple(q for q in M.cyclic if q % 2 == 0),
        tuple((p, r) for p, r in M.divisible if p == 2),
        M.atoms,
    )


def gprime(base: BaseDescriptor) -> AbGroupExpr:
    if base.kind == "ZP":
        return compute_G_and_Gprime(base.primes)[1].group
    return base.value("gprime")


def e2_page(base: BaseDescriptor) -> E2Page:
    """The part of the 2-local E_2 page with ``i <= 3`` and ``j <= 2``.

    Rows 0 and 1 are computed as cohomology of ``C_2`` with trivial action
    (for ``Z_P`` bases through the model ``G_m(S) (+) rho_tilde`` of the
    units of the Legendre cover).  Entry ``(0, 2)`` is
    ``2Br(S) (+) 2H^1(S, Q/Z) (+) G'(S)``.
    """
    page = E2Page(base)
    mu2 = base.value("mu2")
    pic = base.value("pic")
    if base.kind == "ZP":
        units = base.value("units")
        report = units_sequence_check(units.to_fin())
        page.notes[(0, 0)] = "localised at 2; H^0 of the unit model"
        if not report.passed:
            raise ArithmeticError("unit model disagrees with the trivial module")
        page.entries[(0, 0)] = _two_local(units + AbGroupExpr(free_rank=1))
        for i in (1, 2, 3):
            page.entries[(i, 0)] = _cohomology_of_trivial(units, i)
    else:
        page.entries[(0, 0)] = base.value("units_2local") + AbGroupExpr(free_rank=1)
        page.notes[(0, 0)] = "localised at 2"
        page.entries[(1, 0)] = mu2
        page.entries[(2, 0)] = base.value("units_mod_2")
        page.entries[(3, 0)] = mu2
    if pic.is_finite():
        coeff = pic + mu2
        page.entries[(0, 1)] = _two_local(coeff)
        for i in (1, 2, 3):
            page.entries[(i, 1)] = _cohomology_of_trivial(coeff, i)
    else:
        raise MissingTableEntry(f"Picard group of {base.key} is not tabulated as a finite group")
    page.entries[(0, 2)] = base.value("br_2") + base.value("h1_2") + gprime(base)
    page.notes[(0, 2)] = "2Br(S) (+) 2H^1(S, Q/Z) (+) G'(S)"
    page.differentials = [
        "d2^{0,1} = 0",
        "d2^{1,1} surjective onto E2^{3,0}",
        "d2^{0,2} = 0 when Pic(S)/2 = 0",
    ]
    return page


@dataclass
class EInfinity:
    """Graded pieces of ``H^2`` on the diagonal ``i + j = 2``."""

    base: BaseDescriptor
    pieces: dict

    def associated_graded(self) -> AbGroupExpr:
        out = AbGroupExpr()
        for ij in sorted(self.pieces):
            out = out + self.pieces[ij]
        return out

    def to_json(self) -> dict:
        return {
            "base": self.base.key,
            "pieces": {f"{i},{j}": str(v) for (i, j), v in sorted(self.pieces.items())},
            "associated_graded": str(self.associated_graded()),
        }


def apply_differentials(page: E2Page) -> EInfinity:
    """Run the known differentials; only bases with ``Pic(S) = 0`` are covered.

    With ``Pic = 0`` the incoming and outgoing differentials at ``(2, 0)``
    vanish, ``d2^{1,1}`` kills ``(1, 1)`` and ``d2^{0,2} = 0``.
    """
    if not page.base.value("pic").is_zero():
        raise UnsupportedBase(f"differentials are only pinned when Pic(S) = 0, not for {page.base.key}")
    pieces = {
        (2, 0): page[(2, 0)],
        (1, 1): AbGroupExpr(),
        (0, 2): page[(0, 2)],
    }
    return EInfinity(page.base, pieces)


# ---------------------------------------------------------------------------
# evaluators


def local_sums(P) -> AbGroupExpr:
    """``(+)_{p in P u {-1}, p = 3 mod 4} Z/2  (+)  (+)_{p in P, p != 3 mod 4} Z/4``."""
    cyc = []
    for p in (-1,) + tuple(P):
        if p % 4 == 3:
            cyc.append(2)
        elif p != -1:
            cyc.append(4)
    return AbGroupExpr(cyclic=tuple(cyc))


def two_primary_breakdown(P) -> dict:
    P = _normalise_primes(P)
    base = BaseDescriptor.zp(P)
    return {
        "2H1(S, Q/Z)": base.value("h1_2"),
        "Z/2": AbGroupExpr.cyclic_group(2),
        "2Br(S)": base.value("br_2"),
        "local sums": local_sums(P),
    }


def two_primary_brauer(P) -> AbGroupExpr:
    """``2Br(Y0(2)_{Z_P})``.

    >>> str(two_primary_brauer([2, 3]))
    '(Q_2/Z_2)^2 (+) (Z/2)^6 (+) Z/4'
    """
    out = AbGroupExpr()
    for part in two_primary_breakdown(P).values():
        out = out + part
    return out


@dataclass
class WitnessHypothesis:
    p: int
    t: str
    symbol_exponent: int
    verified: bool


@lru_cache(maxsize=None)
def _nonzero_witness(p: int) -> WitnessHypothesis:
    from .witness import find_t_nonzero, verify_certificate

    cert = find_t_nonzero(p, bound=None)
    report = verify_certificate(cert)
    return WitnessHypothesis(p, cert.t, cert.symbol_exponent, report.passed)


def p_primary_brauer(base: BaseDescriptor, p: int) -> AbGroupExpr:
    """``pBr(Y0(2)_S)`` for an odd prime ``p`` invertible on ``S``.

    For ``Z_P`` with ``p in P`` this is ``pBr(S) (+) H^1(S, Q_p/Z_p)``.  Over
    ``Z[1/2]`` with ``p`` not inverted the answer is 0, conditional on a
    verified witness with nontrivial symbol at ``p``.
    """
    if p == 2 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if base.kind == "AlgClosed":
        if base.char == 2:
            raise UnsupportedBase("characteristic 2 is not covered")
        if base.char == p:
            raise UnsupportedBase(f"p = {p} is the characteristic")
        return AbGroupExpr()
    if base.kind == "Q":
        return AbGroupExpr(atoms=(f"{p}Br(Q)", f"H1(Q, Q_{p}/Z_{p})"))
    if p in base.primes:
        return base.value("br_odd", p) + base.value("h1_odd", p)
    if base.primes == (2,):
        w = _nonzero_witness(p)
        if not w.verified:
            raise UnsupportedBase(f"no verified witness at p = {p}")
        return AbGroupExpr()
    raise UnsupportedBase(f"p = {p} is not invertible on {base.key} and no vanishing result covers it")


def full_brauer(base: BaseDescriptor) -> AbGroupExpr:
    """``Br(Y0(2)_S)`` for ``S = Z[1/2]``, ``Q`` or an algebraically closed field."""
    if base.kind == "ZP":
        if base.primes != (2,):
            raise UnsupportedBase(f"the full Brauer group over {base.key} is not covered")
        return two_primary_brauer((2,))
    if base.kind == "AlgClosed":
        if base.char == 2:
            raise UnsupportedBase("characteristic 2 is not covered")
        return base.value("br_2") + base.value("h1_2") + AbGroupExpr.cyclic_group(2)
    return (
        AbGroupExpr(atoms=("Br(Q)", "H1(Q, Q/Z)"))
        + AbGroupExpr.cyclic_group(2)
        + local_sums((2,))
        + AbGroupExpr(atoms=(Q_SUM_3MOD4, Q_SUM_1MOD4))
    )


Q_SUM_3MOD4 = "sum_{p = 3 mod 4} Z/2"
Q_SUM_1MOD4 = "sum_{p = 1 mod 4} Z/4"


def picard_group(base: BaseDescriptor) -> AbGroupExpr:
    """``Z/4 (+) Pic(S)``; the ``Z/4`` is generated by the Hodge bundle."""
    return AbGroupExpr.cyclic_group(4) + base.value("pic")


BRAUER_UPPER_BOUND_ALG_CLOSED = AbGroupExpr(cyclic=(2, 2))


# ---------------------------------------------------------------------------
# exact sequences


@dataclass
class SequenceReport:
    level: int
    segments: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s["ok"] for s in self.segments)

    def to_json(self) -> dict:
        return {"level": self.level, "passed": self.passed, "segments": list(self.segments)}


def exact_sequence_order_check(segments, level: int = DEFAULT_LEVEL) -> SequenceReport:
    """Check ``|B| = |A| |C|`` for each short exact segment ``0 -> A -> B -> C -> 0``.

    Divisible summands are replaced by their ``level``-torsion first; free
    summands and symbolic atoms raise InfiniteTerm.

    >>> exact_sequence_order_check([("Z/4", "Z/2 (+) Z/4", "Z/2")]).passed
    True
    """
    report = SequenceReport(level)
    for seg in segments:
        terms = [_expr(t) for t in seg]
        if len(terms) != 3:
            raise ValueError("each segment needs exactly three terms")
        orders = []
        for t in terms:
            if t.atoms:
                raise InfiniteTerm(f"symbolic term {t}")
            if t.free_rank:
                raise InfiniteTerm(f"term {t} has a free part")
            orders.append(t.torsion(level).order() if t.divisible else t.order())
        a, b, c = orders
        report.segments.append(
            {
                "terms": [str(t) for t in terms],
                "orders": orders,
                "ok": b == a * c,
            }
        )
    return report


def kummer_segments_alg_closed(n: int) -> list:
    """``0 -> Pic/2^n -> H^2(mu_{2^n}) -> Br[2^n] -> 0`` over an algebraically closed field.

    The middle term is read from the table (it is constant for ``n >= 2``).
    """
    base = BaseDescriptor.alg_closed(0)
    pic = picard_group(base)
    q = 2 ** n
    pic_mod = AbGroupExpr(cyclic=tuple(gcd(c, q) for c in pic.cyclic))
    br_tors = full_brauer(base).torsion(q)
    h2 = base.value("h2_mu2n", min(n, 2))
    return [(pic_mod, h2, br_tors)]


# ---------------------------------------------------------------------------
# cross checks


def brauer_report(base: BaseDescriptor) -> dict:
    """Evaluated groups plus every cross-check that applies to ``base``."""
    out = {"base": base.key}
    checks = {}
    if base.kind == "ZP":
        out["two_primary"] = str(two_primary_brauer(base.primes))
        out["two_primary_breakdown"] = {k: str(v) for k, v in two_primary_breakdown(base.primes).items()}
        out["odd_primary"] = {str(p): str(p_primary_brauer(base, p)) for p in base.primes if p != 2}
        try:
            out["full"] = str(full_brauer(base))
        except UnsupportedBase as exc:
            out["full"] = None
            out["full_unsupported"] = str(exc)
        G, Gp = compute_G_and_Gprime(base.primes)
        out["G"] = G.to_json()
        out["G_prime"] = Gp.to_json()
        checks["G_prime_splits"] = Gp.group == G.group + AbGroupExpr.cyclic_group(2)
        checks["G_prime_order_by_enumeration"] = gprime_order_by_enumeration(base.primes) == Gp.group.order()
        page = e2_page(base)
        einf = apply_differentials(page)
        out["e2_page"] = page.to_json()
        out["e_infinity"] = einf.to_json()
        graded = einf.associated_graded()
        two = two_primary_brauer(base.primes)
        checks["graded_matches_formula"] = (
            graded.divisible == two.divisible and graded.finite_part().order() == two.finite_part().order()
        )
        coker = page[(0, 2)].remove(base.value("br_2")).remove(G.group)
        checks["cokernel_identity"] = coker == base.value("h1_2") + AbGroupExpr.cyclic_group(2)
        checks["table_matches_recipe"] = not [m for m in audit_table() if m.startswith(base.key + " ")]
    elif base.kind == "AlgClosed":
        full = full_brauer(base)
        out["full"] = str(full)
        page = e2_page(base)
        einf = apply_differentials(page)
        out["e2_page"] = page.to_json()
        out["e_infinity"] = einf.to_json()
        checks["e_infinity_matches"] = einf.associated_graded() == full
        kummer = exact_sequence_order_check(
            [seg for n in range(1, 5) for seg in kummer_segments_alg_closed(n)]
        )
        out["kummer"] = kummer.to_json()
        checks["kummer_orders"] = kummer.passed
        checks["within_upper_bound_Z2+Z2"] = full.order() <= BRAUER_UPPER_BOUND_ALG_CLOSED.order()
    else:
        full = full_brauer(base)
        out["full"] = str(full)
        out["odd_primary_example"] = {"3": str(p_primary_brauer(base, 3))}
        page = e2_page(base)
        out["e2_page"] = page.to_json()
        out["e_infinity"] = apply_differentials(page).to_json()
    pic = picard_group(base)
    out["picard"] = str(pic)
    checks["picard_has_Z4"] = 4 in pic.cyclic
    out["checks"] = dict(sorted(checks.items()))
    out["passed"] = all(checks.values())
    return out
