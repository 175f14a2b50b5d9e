"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Every scalar in the library is a ``QNum``: a value a + b*sqrt(d) with
rational a, b and a fixed square-free d >= 2.  All comparisons are decided
by exact integer sign determination, never by floating point, so
commensurability questions have certificates rather than estimates.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering

from .errors import DivisionByZeroError, FieldMismatchError, ParseError, PreconditionError

__all__ = ["QNum", "qnum", "sqrt_of", "ratio_is_rational"]


def _is_square_free(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


_ZERO = Fraction(0)

_checked_d: set[int] = set()


def _check_d(d: int) -> int:
    if d not in _checked_d:
        if not isinstance(d, int) or not _is_square_free(d):
            raise PreconditionError(f"d must be a square-free integer >= 2, got {d!r}")
        _checked_d.add(d)
    return d


@total_ordering
class QNum:
    """An element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).

    Immutable; equality is equality of the (a, b) coefficient pairs.
    Rational values (b = 0) mix freely with any d; two numbers with
    nonzero sqrt coefficients must share d or arithmetic raises
    ``FieldMismatchError``.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a=0, b=0, d: int = 2) -> None:
        self._a = a if type(a) is Fraction else Fraction(a)
        self._b = b if type(b) is Fraction else Fraction(b)
        self._d = _check_d(d)

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, d: int) -> "QNum":
        # Internal fast path: components are known Fractions, d is already
        # validated.
        self = object.__new__(cls)
        self._a = a
        self._b = b
        self._d = d
        return self

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    def is_rational(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        return self._b == 0 and self._a.denominator == 1

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "QNum":
        if isinstance(other, QNum):
            if other._b != 0 and self._b != 0 and other._d != self._d:
                raise FieldMismatchError(
                    f"mixed fields: sqrt({self._d}) vs sqrt({other._d})"
                )
            return other
        if isinstance(other, int):
            return QNum._make(Fraction(other), _ZERO, self._d)
        if isinstance(other, Fraction):
            return QNum._make(other, _ZERO, self._d)
        return NotImplemented

    def _same_d(self, other: "QNum") -> int:
        # _coerce rejects two distinct nonrational fields, so the result
        # lives in whichever operand's field is nonrational (self's if both
        # are rational, where d is immaterial).
        return other._d if self._b == 0 and other._b != 0 else self._d

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QNum._make(self._a + other._a, self._b + other._b, self._same_d(other))

    __radd__ = __add__

    def __neg__(self) -> "QNum":
        return QNum._make(-self._a, -self._b, self._d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QNum._make(self._a - other._a, self._b - other._b, self._same_d(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._same_d(other)
        if self._b == 0:
            if other._b == 0:
                return QNum._make(self._a * other._a, _ZERO, d)
            return QNum._make(self._a * other._a, self._a * other._b, d)
        if other._b == 0:
            return QNum._make(self._a * other._a, self._b * other._a, d)
        return QNum._make(
            self._a * other._a + self._b * other._b * d,
            self._a * other._b + self._b * other._a,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QNum":
        if self._a == 0 and self._b == 0:
            raise DivisionByZeroError("inverse of zero")
        # 1/(a + b*sqrt(d)) = (a - b*sqrt(d)) / (a^2 - b^2 d); the norm is
        # nonzero because d is not a perfect square.
        norm = self._a * self._a - self._b * self._b * self._d
        return QNum._make(self._a / norm, -self._b / norm, self._d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "QNum":
        if n < 0:
            return self.inverse() ** (-n)
        result = QNum(1, 0, self._d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QNum":
        return QNum._make(self._a, -self._b, self._d)

    # -- ordering ---------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d) by integer case analysis."""
        a, b = self._a, self._b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Opposite signs: compare a^2 with b^2 d.
        lhs, rhs = a * a, b * b * self._d
        if a > 0:  # b < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._b != other._b:
            return False
        if self._b != 0 and self._d != other._d:
            return False
        return self._a == other._a

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __abs__(self) -> "QNum":
        return -self if self.sign() < 0 else self

    # -- conversion -------------------------------------------------------

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def approx(self, bits: int = 128) -> Fraction:
        """Rational approximation accurate to 2^-bits."""
        scale = 1 << bits
        root = Fraction(math.isqrt(self._d * scale * scale), scale)
        return self._a + self._b * root

    def floor(self) -> int:
        if self._b == 0:
            return math.floor(self._a)
        n = math.floor(self.approx(64))
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def as_fraction(self) -> Fraction:
        if self._b != 0:
            raise PreconditionError(f"{self} is irrational")
        return self._a

    # -- canonical text form ----------------------------------------------

    def __str__(self) -> str:
        if self._b == 0:
            return _fmt_rat(self._a)
        sign = "+" if self._b > 0 else "-"
        return f"{_fmt_rat(self._a)}{sign}{_fmt_rat(abs(self._b))}*sqrt({self._d})"

    def __repr__(self) -> str:
        return f"QNum({self._a!r}, {self._b!r}, {self._d})"

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "QNum":
        """Parse the canonical grammar ``rat | rat SIGN rat*sqrt(uint)``."""
        m = _QNUM_RE.fullmatch(text.strip())
        if m is None:
            raise ParseError(f"not a valid number: {text!r}")
        a = Fraction(m.group(1))
        if m.group(2) is None:
            return cls(a, 0, d if d is not None else 2)
        b = Fraction(m.group(3))
        if m.group(2) == "-":
            b = -b
        dd = int(m.group(4))
        if d is not None and dd != d and b != 0:
            raise FieldMismatchError(f"expected sqrt({d}), got sqrt({dd})")
        return cls(a, b, dd)


_RAT = r"-?\d+(?:/\d+)?"
_QNUM_RE = re.compile(rf"({_RAT})(?:\s*([+-])\s*(\d+(?:/\d+)?)\*sqrt\((\d+)\))?")


def _fmt_rat(fr: Fraction) -> str:
    if fr.denominator == 1:
        return str(fr.numerator)
    return f"{fr.numerator}/{fr.denominator}"


def qnum(a=0, b=0, d: int = 2) -> QNum:
    """Shorthand constructor."""
    return QNum(a, b, d)


def sqrt_of(d: int) -> QNum:
    """The element sqrt(d) itself."""
    return QNum(0, 1, d)


def as_qnum(value, d: int = 2) -> QNum:
    if isinstance(value, QNum):
        return value
    if isinstance(value, (int, Fraction)):
        return QNum(value, 0, d)
    if isinstance(value, str):
        return QNum.parse(value, d)
    raise ParseError(f"cannot interpret {value!r} as an exact number")


def ratio_is_rational(x: QNum, y: QNum) -> tuple[bool, QNum]:
    """Decide whether x/y is rational; the exact quotient is the witness."""
    if not y:
        raise DivisionByZeroError("ratio_is_rational: y = 0")
    q = x / y
    return q.is_rational(), q
