"""Small finite fields ``F_q`` (q odd) and residue rings ``Z/p^m``.

Field elements are encoded as integers ``0..q-1`` whose base-p digits are the
coefficients of a polynomial in the generator ``a``.  Multiplication goes
through discrete-log tables, which is plenty for ``q`` below a few thousand.

>>> F = FiniteField.get(9)
>>> a = F.gen()
>>> a * a == -2 * a - 2      # Conway polynomial x^2 + 2x + 2
True
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import factorint, isprime

from .errors import NonUnit, NotASquare

# Conway polynomials, coefficients listed from the constant term upwards.
CONWAY = {
    (3, 2): (2, 2, 1),
    (5, 2): (2, 4, 1),
    (3, 3): (1, 2, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 3): (3, 3, 0, 1),
}


def prime_power(q: int):
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


class FiniteField:
    """The field ``F_p[x]/(f)`` for a fixed primitive polynomial ``f``."""

    def __init__(self, p: int, k: int, poly=None):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p, self.k = p, k
        self.q = p ** k
        if poly is None:
            poly = CONWAY.get((p, k), (0, 1) if k == 1 else None)
        if k == 1:
            poly = (0, 1)
        if poly is None:
            raise ValueError(f"no shipped polynomial for F_{p}^{k}")
        self.poly = tuple(poly)
        q = self.q
        self._add = [[self._digit_add(x, y) for y in range(q)] for x in range(q)]
        self._neg = [self._digit_neg(x) for x in range(q)]
        self.generator_code = self._find_generator()
        self._exp = [0] * (q - 1)
        self._log = [None] * q
        x = 1
        for e in range(q - 1):
            self._exp[e] = x
            self._log[x] = e
            x = self._slow_mul(x, self.generator_code)

    @staticmethod
    @lru_cache(maxsize=None)
    def get(q: int) -> "FiniteField":
        p, k = prime_power(q)
        return FiniteField(p, k)

    # digit level helpers -----------------------------------------------

    def _digits(self, x):
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _undigits(self, d):
        x = 0
        for c in reversed(d):
            x = x * self.p + c % self.p
        return x

    def _digit_add(self, x, y):
        return self._undigits([a + b for a, b in zip(self._digits(x), self._digits(y))])

    def _digit_neg(self, x):
        return self._undigits([-a for a in self._digits(x)])

    def _slow_mul(self, x, y):
        if self.k == 1:
            return (x * y) % self.p
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * self.k - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                prod[i + j] += u * v
        f = self.poly
        for i in range(len(prod) - 1, self.k - 1, -1):
            c = prod[i] % self.p
            if c:
                for j in range(self.k + 1):
                    prod[i - self.k + j] -= c * f[j]
        return self._undigits(prod[: self.k])

    def _order(self, g):
        x, n = g, 1
        while x != 1:
            x = self._slow_mul(x, g)
            n += 1
        return n

    def _find_generator(self):
        # for prime fields choose the least primitive root; otherwise prefer x
        if self.k > 1 and self._order(self.p) == self.q - 1:
            return self.p
        for g in range(2 if self.k == 1 else 1, self.q):
            if self._order(g) == self.q - 1:
                return g
        raise ValueError("field has no generator (polynomial not irreducible?)")

    def is_polynomial_primitive(self) -> bool:
        """True when the class of ``x`` generates the multiplicative group."""
        if self.k == 1:
            return True
        return self._order(self.p) == self.q - 1

    # public API ---------------------------------------------------------

    def __call__(self, value) -> "FFElement":
        if isinstance(value, FFElement):
            if value.field is not self:
                raise ValueError("element of a different field")
            return value
        return FFElement(self, int(value) % self.p)

    def from_code(self, code: int) -> "FFElement":
        return FFElement(self, code)

    def gen(self) -> "FFElement":
        """The class of ``x`` (for prime fields: the least primitive root)."""
        return FFElement(self, self.p if self.k > 1 else self.generator_code)

    def primitive_element(self) -> "FFElement":
        return FFElement(self, self.generator_code)

    def elements(self):
        return [FFElement(self, c) for c in range(self.q)]

    def units(self):
        return [FFElement(self, c) for c in range(1, self.q)]

    def zero(self):
        return FFElement(self, 0)

    def one(self):
        return FFElement(self, 1)

    def __repr__(self):
        return f"F{self.q}"

    __str__ = __repr__


class FFElement:
    """Element of a :class:`FiniteField`."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    def _other(self, other):
        if isinstance(other, FFElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return int(other) % self.field.p
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._add[self.code][o])

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, self.field._neg[self.code])

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._add[self.code][self.field._neg[o]])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.code == 0 or o == 0:
            return FFElement(self.field, 0)
        F = self.field
        return FFElement(F, F._exp[(F._log[self.code] + F._log[o]) % (F.q - 1)])

    __rmul__ = __mul__

    def inverse(self):
        if self.code == 0:
            raise NonUnit("0 is not invertible")
        F = self.field
        return FFElement(F, F._exp[(-F._log[self.code]) % (F.q - 1)])

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * FFElement(self.field, o).inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, e: int):
        if self.code == 0:
            if e < 0:
                raise NonUnit("0 is not invertible")
            return FFElement(self.field, 1 if e == 0 else 0)
        F = self.field
        return FFElement(F, F._exp[(F._log[self.code] * e) % (F.q - 1)])

    def is_unit(self) -> bool:
        return self.code != 0

    def is_square(self) -> bool:
        return self.code == 0 or self.field._log[self.code] % 2 == 0

    def sqrt(self) -> "FFElement":
        """A square root; for squares ``g^(2k)`` returns ``g^k``."""
        if self.code == 0:
            return self
        if not self.is_square():
            raise NotASquare(f"{self} is not a square in {self.field}")
        F = self.field
        return FFElement(F, F._exp[F._log[self.code] // 2])

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.code == o

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __bool__(self):
        return self.code != 0

    def __str__(self):
        F = self.field
        if F.k == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(F._digits(self.code)):
            if c:
                mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
                terms.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return "+".join(reversed(terms)) if terms else "0"

    def __repr__(self):
        return f"{self.field}({self})"


class ResidueRing:
    """``Z/n`` for ``n = p^m``."""

    def __init__(self, p: int, m: int):
        self.p, self.m = p, m
        self.n = p ** m

    def __call__(self, value) -> "ZmodElement":
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise NonUnit(f"{value} is not p-integral")
            return ZmodElement(self, value.numerator * pow(value.denominator, -1, self.n))
        return ZmodElement(self, int(value))

    def __repr__(self):
        return f"Z/{self.p}^{self.m}"

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))


class ZmodElement:
    __slots__ = ("ring", "value")

    def __init__(self, ring: ResidueRing, value: int):
        self.ring = ring
        self.value = value % ring.n

    def _other(self, other):
        if isinstance(other, ZmodElement):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else ZmodElement(self.ring, self.value + o)

    __radd__ = __add__

    def __neg__(self):
        return ZmodElement(self.ring, -self.value)

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else ZmodElement(self.ring, self.value - o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else ZmodElement(self.ring, self.value * o)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.value % self.ring.p != 0

    def inverse(self):
        if not self.is_unit():
            raise NonUnit(f"{self} is not a unit")
        return ZmodElement(self.ring, pow(self.value, -1, self.ring.n))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * ZmodElement(self.ring, o).inverse()

    def __rtruediv__(self, other):
        return ZmodElement(self.ring, other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ZmodElement(self.ring, pow(self.value, e, self.ring.n))

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self.value - o) % self.ring.n == 0

    def __hash__(self):
        return hash((self.ring.n, self.value))

    def __repr__(self):
        return f"{self.value} mod {self.ring.n}"
