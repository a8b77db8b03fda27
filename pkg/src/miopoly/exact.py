"""Exact rational scalars and the combinatorial primitives built on them.

Every number handled by this package is an exact rational (arbitrary
precision).  Backed by gmpy2.mpq when available, otherwise by
fractions.Fraction; both store lowest terms with positive denominator and
raise ZeroDivisionError on division by zero.

The canonical text encoding is "p/q" with the "/q" omitted when the
denominator is 1 ("3/4", "-3/4", "5").  str() of either backend already
produces it; from_str/to_str round-trip losslessly.
"""

try:
    from gmpy2 import mpq as _rational
    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _rational
    BACKEND = "fractions"


def S(value, den=None):
    """Build a Scalar from an int, a "p/q" string, or another exact rational."""
    if den is not None:
        return _rational(value, den)
    return _rational(value)


Scalar = _rational
ZERO = S(0)
ONE = S(1)


def to_str(value) -> str:
    return str(_rational(value))


def from_str(text: str):
    return _rational(text.strip())


def is_integer(value) -> bool:
    return _rational(value).denominator == 1


def pochhammer(a, n: int):
    """Shifted factorial (a)_n = prod_{j=0}^{n-1} (a+j); empty product is 1.

    Works over any commutative ring element supporting +, * with ints
    (Scalar, Dual), which is what the first-order expansion tests rely on.
    """
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    r = a * 0 + 1  # multiplicative identity in a's ring
    for j in range(n):
        r = r * (a + j)
    return r


def q_pochhammer(a, q, n: int):
    """(a;q)_n = prod_{j=0}^{n-1} (1 - a q^j); empty product is 1."""
    if n < 0:
        raise ValueError("q_pochhammer needs n >= 0")
    r = a * 0 + 1  # multiplicative identity in a's ring
    aq = a
    for _ in range(n):
        r = r * (1 - aq)
        aq = aq * q
    return r


def factorial(n: int):
    return pochhammer(1, n)


def binomial(N: int, n: int):
    """Binomial coefficient via (-1)^n (-N)_n / (1)_n, valid for any integer N."""
    if n < 0:
        raise ValueError("binomial needs n >= 0")
    return S((-1) ** n) * pochhammer(S(-N), n) / pochhammer(ONE, n)


def q_binomial(N: int, n: int, q):
    """q-binomial via (-1)^n (q^{-N};q)_n / (q;q)_n * q^{Nn - n(n-1)/2}."""
    if n < 0:
        raise ValueError("q_binomial needs n >= 0")
    qq = S(q)
    return (
        S((-1) ** n)
        * q_pochhammer(qq ** (-N), qq, n)
        / q_pochhammer(qq, qq, n)
        * qq ** (N * n - n * (n - 1) // 2)
    )


class Dual:
    """First-order jet a + b*u with u^2 = 0.

    The infinitesimal unit u is kept implicit; in the expansion tests it
    stands for either a plain parameter shift or 1 - q^shift.  Only the
    ring operations needed by the polynomial evaluators are provided.
    """

    __slots__ = ("re", "d1")

    def __init__(self, re, d1=0):
        self.re = S(re)
        self.d1 = S(d1)

    def __repr__(self):
        return f"Dual({self.re}, {self.d1})"

    def __eq__(self, other):
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.d1 == other.d1

    def __add__(self, other):
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return Dual(self.re + other.re, self.d1 + other.d1)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.re, -self.d1)

    def __sub__(self, other):
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return Dual(self.re - other.re, self.d1 - other.d1)

    def __rsub__(self, other):
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return Dual(self.re * other.re, self.re * other.d1 + self.d1 * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        re = self.re / other.re
        return Dual(re, (self.d1 - re * other.d1) / other.re)

    def __rtruediv__(self, other):
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("Dual powers must be integers")
        if n < 0:
            return 1 / (self ** (-n))
        r = Dual(1)
        for _ in range(n):
            r = r * self
        return r


def _as_dual(v):
    if isinstance(v, Dual):
        return v
    if isinstance(v, (int, Scalar)):
        return Dual(v)
    return NotImplemented
