"""The Legendre family and its quotient by t -> 1/t.

Coordinates: ``t`` on the Legendre line, ``s = t/(t-1)^2`` on its quotient,
and the j-invariant.  Functions accept any supported ring element: ``int`` or
``Fraction`` (treated as rationals), :class:`~brauer_y02.fields.FFElement`,
:class:`~brauer_y02.fields.ZmodElement` or
:class:`~brauer_y02.padic.CycloElement`.

>>> s_of_t(-1), j_of_t(-1), j_of_s(Fraction(-1, 4))
(Fraction(-1, 4), Fraction(1728, 1), Fraction(1728, 1))
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import (
    BadCharacteristic,
    MatrixParseError,
    NonUnit,
    NotASquare,
    NotTwoTorsion,
    SingularCurve,
)
from .fields import FFElement, FiniteField
from .padic import CycloElement, sqrt_hensel


def _lift(x):
    if isinstance(x, int):
        return Fraction(x)
    return x


def is_unit(x) -> bool:
    """Unit test dispatched on the ring of ``x``."""
    if isinstance(x, (int, Fraction)):
        return x != 0
    return x.is_unit()


def _require_units(**named):
    for name, value in named.items():
        if not is_unit(value):
            raise NonUnit(f"{name} is not a unit")


def s_of_t(t):
    """``s = t / (t - 1)^2``."""
    t = _lift(t)
    _require_units(t=t, t_minus_1=t - 1)
    return t / (t - 1) ** 2


def j_of_t(t):
    """``j = 256 (t^2 - t + 1)^3 / (t^2 (t - 1)^2)``."""
    t = _lift(t)
    _require_units(t=t, t_minus_1=t - 1)
    return 256 * (t * t - t + 1) ** 3 / (t * t * (t - 1) ** 2)


def j_of_s(s):
    """``j = 256 (s + 1)^3 / s^2``; ``s = 0`` is excluded."""
    s = _lift(s)
    _require_units(s=s)
    return 256 * (s + 1) ** 3 / (s * s)


def s3_orbit(t) -> list:
    """Distinct elements of the orbit of ``t`` under ``t -> 1/t`` and ``t -> (t-1)/t``.

    >>> sorted(s3_orbit(2))
    [Fraction(-1, 1), Fraction(1, 2), Fraction(2, 1)]
    """
    t = _lift(t)
    _require_units(t=t, t_minus_1=t - 1)
    orbit = [t]
    frontier = [t]
    while frontier:
        x = frontier.pop()
        for y in (1 / x, (x - 1) / x):
            if not any(y == z for z in orbit):
                orbit.append(y)
                frontier.append(y)
    return orbit


def legendre_discriminant(t):
    """``16 t^2 (t - 1)^2``, the discriminant of ``y^2 = x(x-1)(x-t)``."""
    t = _lift(t)
    return 16 * t * t * (t - 1) ** 2


def is_legendre(t) -> bool:
    """True when ``y^2 = x(x-1)(x-t)`` has good reduction (discriminant and 2 units)."""
    t = _lift(t)
    return is_unit(legendre_discriminant(t)) and is_unit(t * 0 + 2)


@dataclass(frozen=True)
class WeierstrassCurve:
    """``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`` with an optional marked point."""

    a1: Any
    a2: Any
    a3: Any
    a4: Any
    a6: Any
    point: tuple | None = None

    @property
    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self):
        return curve_discriminant(self)

    def is_elliptic(self) -> bool:
        return is_unit(self.discriminant())

    def contains(self, pt) -> bool:
        x, y = pt
        a1, a2, a3, a4, a6 = self.coefficients
        return y * y + a1 * x * y + a3 * y == x ** 3 + a2 * x * x + a4 * x + a6

    def with_point(self, pt) -> "WeierstrassCurve":
        return WeierstrassCurve(*self.coefficients, point=tuple(pt))


def curve_discriminant(E: WeierstrassCurve):
    """``-b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6``.

    >>> curve_discriminant(WeierstrassCurve(0, 0, 0, -11, -14))
    512
    """
    b2, b4, b6, b8 = E.b_invariants()
    return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def legendre_curve(t) -> WeierstrassCurve:
    """``y^2 = x(x-1)(x-t)`` with the point ``(0, 0)`` marked."""
    t = _lift(t)
    zero = t * 0
    return WeierstrassCurve(zero, -(t + 1), zero, t, zero, point=(zero, zero))


def taut_family_at(s) -> WeierstrassCurve:
    """``y^2 = x(x^2 - (8s+2) x + 4s(1+4s))`` with the point ``(0, 0)`` marked."""
    s = _lift(s)
    _require_units(s=s, one_plus_4s=1 + 4 * s, two=s * 0 + 2)
    zero = s * 0
    return WeierstrassCurve(zero, -(8 * s + 2), zero, 4 * s * (1 + 4 * s), zero, point=(zero, zero))


def taut_discriminant_formula(s):
    s = _lift(s)
    return 1024 * s * s * (1 + 4 * s) ** 3


# ---------------------------------------------------------------------------
# solving for t over Z_p[zeta_p]


def solve_t_from_c(c: CycloElement):
    """Both roots ``t = (2c + 1 +- sqrt(4c + 1)) / (2c)`` of ``t/(t-1)^2 = c``."""
    _require_units(c=c)
    r = sqrt_hensel(4 * c + 1)
    num = 2 * c + 1
    den = 2 * c
    return ((num + r) / den, (num - r) / den)


def unit_roots(roots) -> list:
    """Roots ``t`` with ``t`` and ``t - 1`` units, ordered by coefficient vector."""
    good = [t for t in roots if is_unit(t) and is_unit(t - 1)]
    return sorted(good, key=lambda t: t.coeffs)


# ---------------------------------------------------------------------------
# finite field checks


@dataclass
class ChangeOfVariablesReport:
    t: Any
    s: Any
    u: Any
    a2_match: bool
    a4_match: bool
    a6_match: bool
    point_match: bool

    @property
    def matched(self) -> bool:
        return self.a2_match and self.a4_match and self.a6_match and self.point_match


def legendre_to_s_form_check(t: FFElement) -> ChangeOfVariablesReport:
    """Check that ``(x, y) -> (u^2 x, u^3 y)``, ``u = sqrt(2t+2)/(t-1)``,
    carries the Legendre curve at ``t`` onto the family member at ``s(t)``.
    """
    F = t.field
    if F.p == 2:
        raise BadCharacteristic("characteristic 2 is not supported")
    _require_units(t=t, t_minus_1=t - 1, t_plus_1=t + 1)
    w = 2 * t + 2
    if not w.is_square():
        raise NotASquare(f"2t + 2 = {w} is not a square in {F}")
    u = w.sqrt() / (t - 1)
    s = s_of_t(t)
    L = legendre_curve(t)
    T = taut_family_at(s)
    u2 = u * u
    u4 = u2 * u2
    # pulling T back along x = u^2 X, y = u^3 Y divides a2 by u^2, a4 by u^4, a6 by u^6
    a2 = T.a2 / u2
    a4 = T.a4 / u4
    a6 = T.a6 / (u4 * u2)
    x0, y0 = L.point
    image = (u2 * x0, u * u2 * y0)
    return ChangeOfVariablesReport(
        t=t,
        s=s,
        u=u,
        a2_match=a2 == L.a2,
        a4_match=a4 == L.a4,
        a6_match=a6 == L.a6,
        point_match=image == T.point,
    )


def _field_of(E: WeierstrassCurve) -> FiniteField:
    for c in E.coefficients:
        if isinstance(c, FFElement):
            return c.field
    raise TypeError("curve coefficients are not finite field elements")


def _check_odd_model(E: WeierstrassCurve, F: FiniteField):
    if F.p == 2:
        raise BadCharacteristic("even characteristic is not supported")
    if E.a1 != 0 or E.a3 != 0:
        raise ValueError("only models with a1 = a3 = 0 are supported")
    if not E.is_elliptic():
        raise SingularCurve("discriminant vanishes")


def _preserving_substitutions(E: WeierstrassCurve, F: FiniteField, fixed_x=None):
    a2, a4, a6 = F(E.a2), F(E.a4), F(E.a6)
    count = 0
    for u in F.units():
        u2 = u * u
        u4 = u2 * u2
        u6 = u4 * u2
        if fixed_x is not None:
            rs = [fixed_x - u2 * fixed_x]
        else:
            rs = F.elements()
        for r in rs:
            if (
                (a2 + 3 * r) == a2 * u2
                and (a4 + 2 * r * a2 + 3 * r * r) == a4 * u4
                and (a6 + r * a4 + r * r * a2 + r * r * r) == a6 * u6
            ):
                count += 1
    return count


def automorphism_count(E: WeierstrassCurve) -> int:
    """Number of substitutions ``(u^2 x + r, u^3 y)`` preserving the model."""
    F = _field_of(E)
    _check_odd_model(E, F)
    return _preserving_substitutions(E, F)


def aut_fixing_point(E: WeierstrassCurve, P=None) -> int:
    """Automorphisms ``(x, y) -> (u^2 x + r, u^3 y)`` preserving ``E`` and fixing ``P``.

    ``P`` defaults to the curve's marked point and must be a nonzero
    2-torsion point.  Every ``r`` is tried, including characteristic 3 where
    nonzero translations can occur.
    """
    F = _field_of(E)
    _check_odd_model(E, F)
    P = E.point if P is None else P
    if P is None:
        raise NotTwoTorsion("no point given")
    x0, y0 = F(P[0]), F(P[1])
    if y0 != 0 or not E.contains((x0, y0)):
        raise NotTwoTorsion(f"({x0}, {y0}) is not a nonzero 2-torsion point")
    return _preserving_substitutions(E, F, fixed_x=x0)


def two_torsion_points(E: WeierstrassCurve) -> list:
    F = _field_of(E)
    return [(x, F.zero()) for x in F.elements() if E.contains((x, F.zero()))]


# ---------------------------------------------------------------------------
# curve fixtures


def _parse_scalar(tok: str, ring):
    tok = tok.strip()
    if ring is None:
        return Fraction(tok)
    return ring(int(tok))


def parse_curve_fixture(text: str) -> list:
    """Parse ``ring,a1,a2,a3,a4,a6[,x,y]`` records, one per line.

    ``ring`` is ``Q`` or ``F<q>``.  Lines starting with ``#`` are skipped.
    """
    records = []
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        if not row or not "".join(row).strip() or row[0].strip().startswith("#"):
            continue
        tag = row[0].strip()
        if len(row) not in (6, 8):
            raise MatrixParseError(f"expected 6 or 8 fields, found {len(row)}", lineno)
        try:
            if tag == "Q":
                ring = None
            elif tag.startswith("F"):
                ring = FiniteField.get(int(tag[1:]))
            else:
                raise ValueError(f"unknown ring tag {tag!r}")
            coeffs = [_parse_scalar(x, ring) for x in row[1:6]]
            point = tuple(_parse_scalar(x, ring) for x in row[6:8]) if len(row) == 8 else None
        except (ValueError, ZeroDivisionError) as exc:
            raise MatrixParseError(str(exc), lineno) from None
        records.append((tag, WeierstrassCurve(*coeffs, point=point)))
    return records


# ---------------------------------------------------------------------------
# identity suites over finite fields


def valid_legendre_parameters(F: FiniteField) -> list:
    """All ``t`` in ``F`` with ``t`` and ``t - 1`` units."""
    return [t for t in F.elements() if t != 0 and t != 1]


def check_j_identities(F: FiniteField) -> dict:
    """``j(t) = j(s(t))`` and ``j`` constant on S3 orbits, for every valid ``t``."""
    failures = []
    ts = valid_legendre_parameters(F)
    for t in ts:
        j = j_of_t(t)
        if j_of_s(s_of_t(t)) != j:
            failures.append(f"j(s({t})) != j({t})")
        for x in s3_orbit(t):
            if j_of_t(x) != j:
                failures.append(f"j({x}) != j({t})")
    return {"field": str(F), "checked": len(ts), "failures": failures}


def check_taut_discriminant(F: FiniteField, samples: int, rng) -> dict:
    """Discriminant of the ``s``-family against ``1024 s^2 (1 + 4s)^3`` at random ``s``.

    Degenerate ``s`` are included; the identity is polynomial.
    """
    failures = []
    for _ in range(samples):
        s = F.from_code(rng.randrange(F.q))
        E = WeierstrassCurve(F.zero(), -(8 * s + 2), F.zero(), 4 * s * (1 + 4 * s), F.zero())
        if curve_discriminant(E) != taut_discriminant_formula(s):
            failures.append(str(s))
    return {"field": str(F), "checked": samples, "failures": failures}


def check_change_of_variables(F: FiniteField) -> dict:
    """:func:`legendre_to_s_form_check` at every ``t`` where ``2t + 2`` is a nonzero square."""
    failures, checked = [], 0
    for t in valid_legendre_parameters(F):
        if t + 1 == 0 or not (2 * t + 2).is_square():
            continue
        checked += 1
        if not legendre_to_s_form_check(t).matched:
            failures.append(str(t))
    return {"field": str(F), "checked": checked, "failures": failures}


def marked_two_torsion_curves(F: FiniteField) -> list:
    """``y^2 = x^3 + a x^2 + b x`` with ``(0, 0)`` marked, over all elliptic ``(a, b)``.

    Every curve with a marked 2-torsion point is isomorphic to one of these.
    """
    zero = F.zero()
    out = []
    for a in F.elements():
        for b in F.units():
            if a * a - 4 * b != 0:
                out.append(WeierstrassCurve(zero, a, zero, b, zero, point=(zero, zero)))
    return out


def aut_survey(F: FiniteField) -> dict:
    """Histogram of :func:`aut_fixing_point` over :func:`marked_two_torsion_curves`."""
    counts = {}
    for E in marked_two_torsion_curves(F):
        n = aut_fixing_point(E)
        counts[n] = counts.get(n, 0) + 1
    return {"field": str(F), "counts": dict(sorted(counts.items()))}
