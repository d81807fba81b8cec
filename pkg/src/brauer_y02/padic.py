"""Arithmetic in Z_p[zeta_p] and local Hilbert symbols.

Elements of ``Z_p[zeta]`` are stored in the power basis ``1, z, ..., z^(p-2)``
with coefficients modulo ``p^m``.  Precision is measured in powers of the
uniformiser ``pi = 1 - z``; since ``p = unit * pi^(p-1)``, one p-adic digit is
worth ``p - 1`` pi-adic digits.

>>> R = CycloRing(3)
>>> pi = R.pi()
>>> pi.pi_valuation(), R.from_int(9).pi_valuation()
(1, 4)
>>> symbol_zeta(R.from_int(2) + pi).value
1
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint, isprime

from .errors import (
    LiteralParseError,
    NonUnit,
    NotASquareResidue,
    NotOneUnit,
    PrecisionExhausted,
    UnsupportedValuation,
    ZeroArgument,
)


class AtLeast(int):
    """Lower bound for a valuation: the element vanishes at tracked precision."""

    def __repr__(self):
        return f"AtLeast({int(self)})"

    __str__ = __repr__


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class CycloRing:
    """``Z_p[zeta_p]`` truncated to ``prec`` pi-adic digits plus guard p-digits.

    Coefficients are stored modulo ``p^m`` with ``m = ceil(prec/(p-1)) + guard``.
    """

    p: int
    prec: int | None = None
    guard: int = 2
    m: int = field(init=False)
    modulus: int = field(init=False)

    def __post_init__(self):
        p = self.p
        if p < 3 or not isprime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        prec = 4 * (p - 1) if self.prec is None else int(self.prec)
        if prec < 1:
            raise ValueError("precision must be positive")
        if self.guard < 2:
            raise ValueError("at least two guard digits are required")
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "m", -(-prec // (p - 1)) + self.guard)
        object.__setattr__(self, "modulus", p ** self.m)

    @property
    def degree(self) -> int:
        return self.p - 1

    @property
    def capacity(self) -> int:
        """Largest pi-adic precision representable with the stored modulus."""
        return (self.p - 1) * self.m

    def element(self, coeffs, known_prec: int | None = None) -> "CycloElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            coeffs = _reduce_poly(coeffs, self.p, self.modulus)
        coeffs = coeffs + [0] * (self.degree - len(coeffs))
        prec = self.capacity if known_prec is None else min(known_prec, self.capacity)
        return CycloElement(self, tuple(c % self.modulus for c in coeffs), prec)

    def from_int(self, n: int) -> "CycloElement":
        return self.element([n])

    def from_fraction(self, q) -> "CycloElement":
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise NonUnit(f"{q} is not p-integral for p = {self.p}")
        return self.element([q.numerator * pow(q.denominator, -1, self.modulus)])

    def zero(self) -> "CycloElement":
        return self.element([0])

    def one(self) -> "CycloElement":
        return self.element([1])

    def zeta(self) -> "CycloElement":
        return self.element([0, 1])

    def pi(self) -> "CycloElement":
        return self.element([1, -1])

    def coerce(self, x) -> "CycloElement":
        if isinstance(x, CycloElement):
            if x.ring != self:
                raise ValueError("elements of different rings")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def parse(self, literal: str) -> "CycloElement":
        return parse_literal(literal, self)

    def __str__(self):
        return f"Z_{self.p}[z] mod pi^{self.prec}"


def _reduce_poly(c, p, mod):
    """Reduce a coefficient list modulo ``1 + z + ... + z^(p-1)`` and ``mod``."""
    folded = [0] * p
    for i, x in enumerate(c):
        folded[i % p] += x
    top = folded[p - 1]
    return [(x - top) % mod for x in folded[: p - 1]]


def _polymul(a, b, p, mod):
    """Product in ``(Z/mod)[z] / Phi_p``."""
    n = p - 1
    if not any(a[1:]):
        s = a[0]
        return [(s * x) % mod for x in b]
    if not any(b[1:]):
        s = b[0]
        return [(s * x) % mod for x in a]
    # Kronecker substitution
    width = (n * mod * mod).bit_length() + 1
    A = 0
    for x in reversed(a):
        A = (A << width) | x
    B = 0
    for x in reversed(b):
        B = (B << width) | x
    C = A * B
    mask = (1 << width) - 1
    prod = []
    for _ in range(2 * n - 1):
        prod.append(C & mask)
        C >>= width
    return _reduce_poly(prod, p, mod)


def _poly_to_pi_basis(a, p, mod):
    """Coefficients with respect to ``1, pi, ..., pi^(p-2)``, ``pi = 1 - z``."""
    n = p - 1
    out = []
    for k in range(n):
        s = 0
        for i in range(k, n):
            if a[i]:
                s += a[i] * math.comb(i, k)
        out.append((-s if k % 2 else s) % mod)
    return out


class CycloElement:
    """Element of ``Z_p[zeta_p]`` known modulo ``pi^known_prec``."""

    __slots__ = ("ring", "coeffs", "known_prec")

    def __init__(self, ring: CycloRing, coeffs: tuple, known_prec: int):
        self.ring = ring
        self.coeffs = coeffs
        self.known_prec = known_prec

    # helpers ----------------------------------------------------------

    def _new(self, coeffs, prec) -> "CycloElement":
        if prec <= 0:
            raise PrecisionExhausted("no pi-adic precision left")
        return CycloElement(self.ring, tuple(coeffs), min(prec, self.ring.capacity))

    @property
    def p(self) -> int:
        return self.ring.p

    def residue(self) -> int:
        """Image in the residue field F_p (``z`` maps to 1)."""
        return sum(self.coeffs) % self.p

    def is_scalar(self) -> bool:
        return not any(self.coeffs[1:])

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            other = self.ring.coerce(other)
        except TypeError:
            return NotImplemented
        mod = self.ring.modulus
        return self._new(
            [(x + y) % mod for x, y in zip(self.coeffs, other.coeffs)],
            min(self.known_prec, other.known_prec),
        )

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.modulus
        return self._new([(-x) % mod for x in self.coeffs], self.known_prec)

    def __sub__(self, other):
        try:
            other = self.ring.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self.ring.coerce(other)
        except TypeError:
            return NotImplemented
        coeffs = _polymul(list(self.coeffs), list(other.coeffs), self.p, self.ring.modulus)
        return self._new(coeffs, min(self.known_prec, other.known_prec))

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.known_prec >= 1 and self.residue() != 0

    def inverse(self) -> "CycloElement":
        """Multiplicative inverse by Newton iteration ``x <- x (2 - y x)``."""
        if not self.is_unit():
            raise NonUnit("element is not a unit")
        p, mod = self.p, self.ring.modulus
        a = list(self.coeffs)
        x = [pow(self.residue(), -1, p)] + [0] * (p - 2)
        good = 1
        while good < self.ring.capacity:
            yx = _polymul(a, x, p, mod)
            two_minus = [(-v) % mod for v in yx]
            two_minus[0] = (two_minus[0] + 2) % mod
            x = _polymul(x, two_minus, p, mod)
            good *= 2
        return self._new(x, self.known_prec)

    def __truediv__(self, other):
        try:
            other = self.ring.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.ring.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        result = result._new(result.coeffs, self.known_prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def mul_p_power(self, k: int) -> "CycloElement":
        """Multiply by ``p^k``; gains ``k (p-1)`` digits of precision."""
        mod = self.ring.modulus
        f = self.p ** k
        return self._new([(x * f) % mod for x in self.coeffs], self.known_prec + k * (self.p - 1))

    def div_p_power(self, k: int) -> "CycloElement":
        """Exact division by ``p^k``; loses ``k (p-1)`` digits of precision."""
        f = self.p ** k
        if any(x % f for x in self.coeffs):
            raise UnsupportedValuation(f"element is not divisible by p^{k}")
        return self._new([x // f for x in self.coeffs], self.known_prec - k * (self.p - 1))

    # valuation and comparison ------------------------------------------

    def pi_coefficients(self) -> list:
        return _poly_to_pi_basis(list(self.coeffs), self.p, self.ring.modulus)

    def pi_valuation(self):
        """``v_pi(x)``, or ``AtLeast(known_prec)`` when x vanishes at tracked precision."""
        p = self.p
        best = None
        for k, c in enumerate(self.pi_coefficients()):
            if c:
                v = k + (p - 1) * _vp(c, p)
                if best is None or v < best:
                    best = v
        if best is None or best >= self.known_prec:
            return AtLeast(self.known_prec)
        return best

    def agrees_with(self, other, prec: int | None = None) -> bool:
        """True when ``self`` and ``other`` are congruent modulo ``pi^prec``.

        ``prec`` defaults to the smaller of the two known precisions.
        """
        other = self.ring.coerce(other)
        limit = min(self.known_prec, other.known_prec)
        prec = limit if prec is None else min(prec, limit)
        diff = CycloElement(
            self.ring,
            tuple((x - y) % self.ring.modulus for x, y in zip(self.coeffs, other.coeffs)),
            self.ring.capacity,
        )
        return diff.pi_valuation() >= prec

    def __eq__(self, other):
        try:
            return self.agrees_with(other)
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def reduced(self, prec: int) -> "CycloElement":
        """Same value with precision lowered to ``prec``."""
        return self._new(self.coeffs, min(prec, self.known_prec))

    def balanced_coeffs(self) -> list:
        mod = self.ring.modulus
        return [x - mod if x > mod // 2 else x for x in self.coeffs]

    def to_literal(self) -> str:
        """Polynomial in ``z`` with balanced integer coefficients.

        >>> CycloRing(3).parse("2 + 2*(1 - z)").to_literal()
        '4 - 2*z'
        """
        terms = []
        for i, c in enumerate(self.balanced_coeffs()):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"CycloElement(p={self.p}, {self.to_literal()!r}, prec={self.known_prec})"


# ---------------------------------------------------------------------------
# literals


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_literal(text: str, ring: CycloRing) -> CycloElement:
    """Evaluate a polynomial in ``z`` with integer coefficients.

    ``^`` and ``**`` both denote powers; ``/`` is allowed for unit divisors.

    >>> parse_literal("2 + 2*(1 - z)", CycloRing(3)).coeffs == (4, 3 ** 6 - 2)
    True
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise LiteralParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return ring.from_int(node.value)
        if isinstance(node, ast.Name) and node.id in ("z", "zeta"):
            return ring.zeta()
        if isinstance(node, ast.Name) and node.id == "pi":
            return ring.pi()
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise LiteralParseError("exponents must be integer constants")
                return left ** node.right.value
            right = ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        raise LiteralParseError(f"unsupported syntax in {text!r}: {ast.dump(node)[:40]}")

    return ev(tree)


# ---------------------------------------------------------------------------
# Teichmuller, square roots, logarithm, trace


def teichmuller(c: int, ring: CycloRing) -> CycloElement:
    """Root of unity of order dividing ``p - 1`` congruent to ``c`` mod p."""
    p, mod = ring.p, ring.modulus
    c %= p
    if c == 0:
        raise NonUnit("0 has no Teichmuller lift")
    x = c
    for _ in range(ring.m):
        x = pow(x, p, mod)
    return ring.from_int(x)


def _residue_root(r: int, p: int) -> int:
    for x in range(1, (p - 1) // 2 + 1):
        if (x * x - r) % p == 0:
            return x
    raise NotASquareResidue(f"{r} is not a square mod {p}")


def sqrt_hensel(y: CycloElement) -> CycloElement:
    """Square root of ``y = p^(2j) * u`` with ``u`` a unit whose residue is a square.

    The root is normalised so its leading residue lies in ``1..(p-1)/2``.
    """
    p = y.p
    v = y.pi_valuation()
    if isinstance(v, AtLeast) or v % (2 * (p - 1)):
        raise UnsupportedValuation(f"pi-valuation {v} is not a multiple of {2 * (p - 1)}")
    j = v // (2 * (p - 1))
    u = y.div_p_power(2 * j) if j else y
    r0 = u.residue()
    if r0 == 0:
        raise UnsupportedValuation("element is not p^(2j) times a unit")
    root = _residue_root(r0, p)
    # inverse square root by Newton: w <- w (3 - u w^2) / 2
    ring = y.ring
    half = ring.from_fraction(Fraction(1, 2))
    w = ring.from_int(pow(root, -1, p))
    good = 1
    while good < ring.capacity:
        w = w * (3 - u * w * w) * half
        good *= 2
    r = (u * w).reduced(u.known_prec)
    if j:
        r = r.mul_p_power(j)
    if not (r * r).agrees_with(y):
        raise ArithmeticError("Hensel iteration failed to converge")
    return r


def log_truncation(p: int, target: int) -> int:
    """Smallest ``T`` with ``n - (p-1) floor(log_p n) >= target`` for every ``n > T``."""
    bound = lambda n: n - (p - 1) * (len(_digits(n, p)) - 1)
    last = 0
    n = 1
    # n - (p-1) log_p n is increasing past small n, so a generous scan suffices
    limit = target + (p - 1) * (math.ceil(math.log(target + 2, p)) + 2) + p
    while n <= limit:
        if bound(n) < target:
            last = n
        n += 1
    return last


def _digits(n, p):
    out = []
    while n:
        out.append(n % p)
        n //= p
    return out


def log_one_unit(a: CycloElement) -> CycloElement:
    """p-adic logarithm of a 1-unit, ``log(1 + y) = sum (-1)^(n+1) y^n / n``.

    The series is summed to the ring's nominal precision; terms are computed
    with extra p-adic digits so that the divisions by ``n`` are exact.
    """
    if a.known_prec < 1 or a.residue() != 1:
        raise NotOneUnit("logarithm needs an element congruent to 1 mod pi")
    ring = a.ring
    p, mod = ring.p, ring.modulus
    target = min(a.known_prec, ring.prec)
    T = log_truncation(p, target)
    extra = max((_vp(n, p) for n in range(1, T + 1)), default=0)
    wide = mod * p ** extra
    y = list(a.coeffs)
    y[0] = (y[0] - 1) % mod
    if not any(y):
        return ring.zero()._new(ring.zero().coeffs, target)
    total = [0] * (p - 1)
    power = [1] + [0] * (p - 2)
    for n in range(1, T + 1):
        power = _polymul(power, y, p, wide)
        v = _vp(n, p)
        f = p ** v
        inv = pow(n // f, -1, mod)
        sign = 1 if n % 2 else -1
        for i in range(p - 1):
            total[i] = (total[i] + sign * (power[i] // f) * inv) % mod
    return CycloElement(ring, tuple(total), target)


@dataclass(frozen=True)
class PAdicInteger:
    """Element of Z_p known modulo ``p^digits``."""

    value: int
    p: int
    digits: int

    def valuation(self):
        if self.value % (self.p ** self.digits) == 0:
            return AtLeast(self.digits)
        return _vp(self.value, self.p)


def trace(x: CycloElement) -> PAdicInteger:
    """``Tr(sum a_i z^i) = (p-1) a_0 - sum_{i>=1} a_i``."""
    p = x.p
    value = ((p - 1) * x.coeffs[0] - sum(x.coeffs[1:])) % x.ring.modulus
    digits = min(x.ring.m, (x.known_prec + p - 2) // (p - 1))
    return PAdicInteger(value % p ** digits, p, digits)


@dataclass(frozen=True)
class SymbolExponent:
    """Exponent ``e`` in ``(zeta_p, b) = zeta_p^e``."""

    p: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    @property
    def trivial(self) -> bool:
        return self.value == 0


def symbol_zeta(b: CycloElement) -> SymbolExponent:
    """Exponent of the norm-residue symbol ``(zeta_p, b)`` for a unit ``b``.

    Write ``b = omega * u`` with ``omega`` a Teichmuller lift and ``u`` a
    1-unit; the exponent is ``Tr(log u) / p`` modulo ``p``.
    """
    if not b.is_unit():
        raise NonUnit("symbol_zeta needs a pi-adic unit")
    ring, p = b.ring, b.p
    u = b * teichmuller(pow(b.residue(), -1, p), ring)
    L = log_one_unit(u)
    if L.known_prec < 2 * (p - 1):
        raise PrecisionExhausted(
            f"only {L.known_prec} pi-digits of log u are known, {2 * (p - 1)} are needed"
        )
    t = trace(L)
    if t.value % p:
        raise ArithmeticError("trace of a logarithm should be divisible by p")
    return SymbolExponent(p, t.value // p)


# ---------------------------------------------------------------------------
# quadratic Hilbert symbols over Q


def _split(q: Fraction, p: int):
    """``q = p^k * u`` with ``u`` a p-adic unit; returns ``(k, u)``."""
    num, den = q.numerator, q.denominator
    k = 0
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k, Fraction(num, den)


def _mod8(u: Fraction) -> int:
    return (u.numerator * pow(u.denominator, -1, 8)) % 8


def _legendre(a: int, p: int) -> int:
    """Legendre symbol of a unit ``a`` mod an odd prime, by Euler's criterion."""
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def quad_hilbert(a, b, place) -> int:
    """Quadratic Hilbert symbol ``(a, b)_v`` over Q.

    ``place`` is ``"real"`` (or ``"inf"``), ``2``, or an odd prime.

    >>> quad_hilbert(-1, -1, "real"), quad_hilbert(-1, -1, 2), quad_hilbert(-1, 2, 2)
    (-1, -1, 1)
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroArgument("Hilbert symbol of zero")
    if place in ("real", "inf", "R", "oo"):
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        u8, v8 = _mod8(u), _mod8(v)
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8)
        return -1 if e % 2 else 1
    if not isprime(p):
        raise ValueError(f"place must be 'real', 2 or an odd prime, got {place!r}")
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    lu = _legendre(u.numerator * u.denominator, p)
    lv = _legendre(v.numerator * v.denominator, p)
    return sign * lu ** (beta % 2) * lv ** (alpha % 2)


def relevant_places(a, b) -> list:
    """The real place, 2, and odd primes dividing a numerator or denominator."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroArgument("Hilbert symbol of zero")
    primes = set()
    for x in (a.numerator, a.denominator, b.numerator, b.denominator):
        primes.update(q for q in factorint(abs(x)) if q != 2)
    return ["real", 2] + sorted(primes)


def quaternion_trivial_over_Q(a, b) -> bool:
    """True when the quaternion algebra ``(a, b)`` splits over Q.

    >>> quaternion_trivial_over_Q(-1, -1), quaternion_trivial_over_Q(-1, 2)
    (False, True)
    """
    return all(quad_hilbert(a, b, v) == 1 for v in relevant_places(a, b))
