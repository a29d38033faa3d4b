"""Rational functions in one formal perturbation parameter over exact rationals.

``EpsPoly`` is a dense univariate polynomial in the perturbation symbol
``e`` with Fraction coefficients; ``EpsRational`` is a quotient of two such
polynomials kept in canonical form:

  * num and den share no polynomial factor (gcd-reduced), and
  * the lowest-order nonzero coefficient of den is 1.

That normalization makes structural equality agree with equality of the
underlying rational functions, which is what the confinement engine needs.

Canonical-form degrees are capped by a configurable bound (default 64).
Exceeding it raises ``DegreeOverflowError``: blowup of the perturbation
degree is how a non-confining orbit announces itself, and it must stay
distinguishable from an ordinary pole at e = 0.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction

from .errors import DegreeOverflowError, DivisionByZeroError, PoleAtZeroError
from .padic import PLUS_INFINITY

DEFAULT_DEGREE_BOUND = 64

_degree_bound: ContextVar[int | None] = ContextVar("eps_degree_bound",
                                                   default=DEFAULT_DEGREE_BOUND)


@contextmanager
def degree_limit(bound: int | None):
    """Temporarily override the canonical-form degree bound (None = off)."""
    token = _degree_bound.set(bound)
    try:
        yield
    finally:
        _degree_bound.reset(token)


def _strip(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class EpsPoly:
    """Polynomial in the perturbation symbol; index i holds the e**i coefficient.

    Trailing zeros are stripped, so the zero polynomial is the empty tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, EpsPoly):
            self.coeffs = coeffs.coeffs
            return
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        self.coeffs = _strip([Fraction(c) for c in coeffs])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial conventionally at -1."""
        return len(self.coeffs) - 1

    def ord(self):
        """Index of the lowest nonzero coefficient; PLUS_INFINITY for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return PLUS_INFINITY

    def trailing(self) -> Fraction:
        for c in self.coeffs:
            if c:
                return c
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = EpsPoly(other)
        if not isinstance(other, EpsPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    def __neg__(self):
        return EpsPoly([-c for c in self.coeffs])

    def __add__(self, other):
        other = EpsPoly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return EpsPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-EpsPoly(other))

    def __rsub__(self, other):
        return EpsPoly(other) + (-self)

    def __mul__(self, other):
        other = EpsPoly(other)
        if self.is_zero or other.is_zero:
            return EpsPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return EpsPoly(out)

    __rmul__ = __mul__

    def scale(self, c: Fraction) -> "EpsPoly":
        return EpsPoly([a * c for a in self.coeffs])

    def shift(self, k: int) -> "EpsPoly":
        """Multiply by e**k."""
        if self.is_zero:
            return self
        return EpsPoly((Fraction(0),) * k + self.coeffs)

    def divmod(self, other: "EpsPoly"):
        other = EpsPoly(other)
        if other.is_zero:
            raise DivisionByZeroError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return EpsPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for i in range(dq, -1, -1):
            c = rem[i + len(other.coeffs) - 1] / lead
            if c:
                quo[i] = c
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return EpsPoly(quo), EpsPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "EpsPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.coeffs[-1])

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*e")
            else:
                parts.append(f"{c}*e^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"EpsPoly({list(self.coeffs)!r})"


ZERO = EpsPoly()
ONE = EpsPoly(1)
EPS_POLY = EpsPoly((0, 1))


def poly_gcd(a: EpsPoly, b: EpsPoly) -> EpsPoly:
    """Monic gcd by the Euclidean algorithm over Q.

    Remainders are made monic each round to keep coefficient growth in
    check; any exact method would do, the contract is canonical equality.
    """
    a, b = EpsPoly(a), EpsPoly(b)
    while not b.is_zero:
        a, b = b, (a % b).monic()
    return a.monic()


def _exact_div(a: EpsPoly, b: EpsPoly) -> EpsPoly:
    q, r = a.divmod(b)
    assert r.is_zero, "internal: division expected to be exact"
    return q


class EpsRational:
    """Canonical quotient of two EpsPoly, a field element of Q(e)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        num = EpsPoly(num)
        den = ONE if den is None else EpsPoly(den)
        if den.is_zero:
            raise DivisionByZeroError("zero denominator in perturbation function")
        if num.is_zero:
            num, den = ZERO, ONE
        elif not _reduced:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = _exact_div(num, g)
                den = _exact_div(den, g)
        t = den.trailing()
        if t != 1:
            num = num.scale(1 / t)
            den = den.scale(1 / t)
        self.num = num
        self.den = den
        bound = _degree_bound.get()
        if bound is not None and max(num.degree, den.degree) > bound:
            raise DegreeOverflowError(
                f"perturbation degree {max(num.degree, den.degree)} exceeds "
                f"bound {bound}")

    @classmethod
    def from_const(cls, c) -> "EpsRational":
        return cls(EpsPoly(Fraction(c)))

    @classmethod
    def eps(cls) -> "EpsRational":
        return cls(EPS_POLY)

    @staticmethod
    def _coerce(other):
        if isinstance(other, EpsRational):
            return other
        if isinstance(other, (int, Fraction, EpsPoly)):
            return EpsRational(EpsPoly(other))
        return None

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero

    def __neg__(self):
        return EpsRational(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        t = poly_gcd(b, d)
        if t.degree <= 0:
            return EpsRational(a * d + c * b, b * d, _reduced=True)
        b1, d1 = _exact_div(b, t), _exact_div(d, t)
        r = a * d1 + c * b1
        g2 = poly_gcd(r, t)
        if g2.degree > 0:
            r = _exact_div(r, g2)
            t = _exact_div(t, g2)
        return EpsRational(r, b1 * d1 * t, _reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return EpsRational(ZERO)
        a, b, c, d = self.num, self.den, o.num, o.den
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if g1.degree > 0:
            a, d = _exact_div(a, g1), _exact_div(d, g1)
        if g2.degree > 0:
            c, b = _exact_div(c, g2), _exact_div(b, g2)
        return EpsRational(a * c, b * d, _reduced=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise DivisionByZeroError("division by the zero perturbation function")
        return self * EpsRational(o.den, o.num, _reduced=True)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = EpsRational(ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    def ord0(self):
        """Order of vanishing at e = 0; negative means a pole, zero gives
        a finite nonzero limit, PLUS_INFINITY is the zero function."""
        if self.is_zero:
            return PLUS_INFINITY
        return self.num.ord() - self.den.ord()

    def eval0(self) -> Fraction:
        """The limit value at e = 0; requires ord0 >= 0."""
        o = self.ord0()
        if o is PLUS_INFINITY:
            return Fraction(0)
        if o < 0:
            raise PoleAtZeroError(f"pole of order {-o} at e = 0")
        if o > 0:
            return Fraction(0)
        return self.num.trailing() / self.den.trailing()

    def __str__(self):
        if self.den == ONE:
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"EpsRational({self.num!r}, {self.den!r})"


def ord0(f: EpsRational):
    return f.ord0()


def eval0(f: EpsRational) -> Fraction:
    return f.eval0()
