"""Witness values ``t`` in ``Z_p[zeta_p]`` for the local symbol of ``t/(t-1)^2``.

For an odd prime ``p`` we look for ``t`` such that ``t`` and ``t - 1`` are units
(so the Legendre curve at ``t`` has good reduction) and the symbol
``(zeta_p, t/(t-1)^2)`` is either nontrivial or trivial.  Both are obtained by
prescribing ``c = t/(t-1)^2`` and solving the quadratic ``c (t-1)^2 = t``:

* nontrivial: ``c = m^p + a p`` with ``a = 1`` and ``4c + 1`` a square (for
  ``p > 3`` this means ``4m + 1`` is a nonzero square mod ``p``; for ``p = 3``
  the choice ``m = -1`` gives ``4c + 1 = 9``).  The symbol exponent is then
  ``-a / m`` mod ``p``.
* trivial: ``c = m^p``, a p-th power.  For ``p = 3`` the explicit value
  ``t = 2 + 2 pi`` is used instead.

Certificates record everything needed to replay the computation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from sympy import isprime

from .errors import BrauerY02Error, PrecisionExhausted
from .moduli import legendre_discriminant, s_of_t, solve_t_from_c, unit_roots
from .padic import AtLeast, CycloRing, symbol_zeta

DEFAULT_PRIME_BOUND = 97

IMPLICATIONS = {
    "nonzero": [
        "the class of the ring of integers of Q_p(zeta_p) does not extend over the stack",
        "no nonzero p-primary class from the base extends, so _pBr'(Y0(2)) = 0 over Z[1/2]",
    ],
    "zero": [
        "the symbol of t/(t-1)^2 can also vanish at a point of good reduction",
    ],
}


def _check_prime(p: int, bound: int | None):
    if p == 2:
        raise ValueError("p must be odd")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if bound is not None and p > bound:
        raise ValueError(f"p = {p} exceeds the configured bound {bound}")


def default_m(p: int) -> int:
    """``m = 3/4`` mod ``p`` (so ``4m + 1 = 4``); ``-1`` for ``p = 3``."""
    if p == 3:
        return -1
    return 3 * pow(4, -1, p) % p


@dataclass
class WitnessCertificate:
    p: int
    kind: str
    parameters: dict
    t: str
    s: str
    discriminant_valuation: int
    symbol_exponent: int
    precision: int
    guard: int = 2
    implications: list = field(default_factory=list)

    def to_json(self) -> dict:
        """Serialisable form with every number written as a decimal string."""
        return {
            "p": str(self.p),
            "kind": self.kind,
            "parameters": {k: str(v) for k, v in sorted(self.parameters.items())},
            "t": self.t,
            "s": self.s,
            "discriminant_valuation": str(self.discriminant_valuation),
            "symbol_exponent": str(self.symbol_exponent),
            "precision": str(self.precision),
            "guard": str(self.guard),
            "implications": list(self.implications),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "WitnessCertificate":
        params = {}
        for k, v in data.get("parameters", {}).items():
            try:
                params[k] = int(v)
            except ValueError:
                params[k] = v
        return cls(
            p=int(data["p"]),
            kind=data["kind"],
            parameters=params,
            t=data["t"],
            s=data["s"],
            discriminant_valuation=int(data["discriminant_valuation"]),
            symbol_exponent=int(data["symbol_exponent"]),
            precision=int(data["precision"]),
            guard=int(data.get("guard", 2)),
            implications=list(data.get("implications", [])),
        )


def _certificate(p, kind, params, t, prec, guard):
    s = s_of_t(t)
    dv = legendre_discriminant(t).pi_valuation()
    e = symbol_zeta(s)
    return WitnessCertificate(
        p=p,
        kind=kind,
        parameters=params,
        t=t.to_literal(),
        s=s.to_literal(),
        discriminant_valuation=int(dv) if not isinstance(dv, AtLeast) else -1,
        symbol_exponent=e.value,
        precision=prec,
        guard=guard,
        implications=list(IMPLICATIONS[kind]),
    )


def _t_from_c(c):
    roots = unit_roots(solve_t_from_c(c))
    if not roots:
        raise BrauerY02Error("neither root of the quadratic is a unit")
    return roots[0]


def find_t_nonzero(p: int, prec: int | None = None, m: int | None = None, a: int = 1,
                   bound: int | None = DEFAULT_PRIME_BOUND, guard: int = 2) -> WitnessCertificate:
    """Witness with nontrivial symbol, built from ``c = m^p + a p``.

    >>> find_t_nonzero(3).t, find_t_nonzero(3).symbol_exponent
    ('2', 1)
    """
    _check_prime(p, bound)
    ring = CycloRing(p, prec, guard)
    m = default_m(p) if m is None else m
    if a % p == 0 or m % p == 0:
        raise ValueError("a and m must be prime to p")
    c = ring.from_int(m ** p + a * p)
    t = _t_from_c(c)
    params = {"a": a, "m": m, "c": m ** p + a * p}
    cert = _certificate(p, "nonzero", params, t, ring.prec, guard)
    if cert.symbol_exponent == 0:
        raise PrecisionExhausted("symbol came out trivial; precision too low?")
    return cert


def find_t_zero(p: int, prec: int | None = None, m: int | None = None,
                bound: int | None = DEFAULT_PRIME_BOUND, guard: int = 2) -> WitnessCertificate:
    """Witness with trivial symbol: ``c = m^p`` or, for ``p = 3``, ``t = 2 + 2 pi``."""
    _check_prime(p, bound)
    ring = CycloRing(p, prec, guard)
    if p == 3 and m is None:
        t = ring.parse("2 + 2*(1 - z)")
        params = {"t": "2 + 2*(1 - z)"}
    else:
        m = default_m(p) if m is None else m
        c = ring.from_int(m ** p)
        t = _t_from_c(c)
        params = {"m": m, "c": m ** p}
    return _certificate(p, "zero", params, t, ring.prec, guard)


@dataclass
class VerificationReport:
    p: int
    kind: str
    checks: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and all(ok for ok, _ in self.checks.values())

    def failures(self) -> list:
        return sorted(k for k, (ok, _) in self.checks.items() if not ok) + list(self.errors)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "kind": self.kind,
            "passed": self.passed,
            "checks": {k: {"ok": ok, "detail": d} for k, (ok, d) in sorted(self.checks.items())},
            "errors": list(self.errors),
        }


def _replay(cert: WitnessCertificate, prec: int, window: int, report: VerificationReport, tag: str):
    ring = CycloRing(cert.p, prec, cert.guard)
    t = ring.parse(cert.t).reduced(window)
    s_cert = ring.parse(cert.s)
    s = s_of_t(t)
    report.checks[f"s@{tag}"] = (s.agrees_with(s_cert, window), s.to_literal())
    dv = legendre_discriminant(t).pi_valuation()
    report.checks[f"discriminant_valuation@{tag}"] = (
        not isinstance(dv, AtLeast) and dv == cert.discriminant_valuation == 0,
        str(dv),
    )
    e = symbol_zeta(s).value
    report.checks[f"symbol_exponent@{tag}"] = (e == cert.symbol_exponent, str(e))


def verify_certificate(cert: WitnessCertificate) -> VerificationReport:
    """Recompute ``s``, the discriminant valuation and the symbol from ``t``.

    Runs at the certificate's precision and again at twice that precision.
    Never raises; problems are collected in the report.
    """
    report = VerificationReport(getattr(cert, "p", -1), getattr(cert, "kind", "?"))
    try:
        if cert.kind not in ("nonzero", "zero"):
            report.errors.append(f"unknown kind {cert.kind!r}")
            return report
        report.checks["kind_matches_symbol"] = (
            (cert.symbol_exponent != 0) == (cert.kind == "nonzero"),
            str(cert.symbol_exponent),
        )
        for tag, prec in (("stated", cert.precision), ("doubled", 2 * cert.precision)):
            try:
                _replay(cert, prec, cert.precision, report, tag)
            except Exception as exc:  # the report must capture every failure
                report.errors.append(f"{tag}: {type(exc).__name__}: {exc}")
        if cert.kind == "nonzero" and {"a", "m"} <= set(cert.parameters):
            a, m = int(cert.parameters["a"]), int(cert.parameters["m"])
            closed = (-a * pow(m, -1, cert.p)) % cert.p
            report.checks["closed_form"] = (closed == cert.symbol_exponent, str(closed))
    except Exception as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
    return report
