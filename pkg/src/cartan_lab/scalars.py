"""Exact scalars for the supported local fields.

Rationals are plain :class:`fractions.Fraction` values.  Laurent polynomials
over a prime field F_p are :class:`LaurentPoly` instances.  A *domain* object
(:data:`RATIONAL`, :class:`LaurentDomain`, :data:`FLOAT`) bundles the
arithmetic constants, parsing, formatting and valuation helpers that the
matrix code needs without caring which coefficient ring it works over.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ._backend import poly_mul_mod
from .errors import (
    CoefficientRangeError,
    DomainMismatchError,
    NotInvertibleError,
    ScalarParseError,
)

INF = math.inf


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """Which local field matrix entries are viewed in: ``real``, ``padic`` or ``laurent``."""

    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("real", "padic", "laurent"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "real":
            if self.p is not None:
                raise ValueError("the real field takes no prime")
        elif self.p is None or not is_prime(self.p):
            raise ValueError(f"{self.kind} field needs a prime p, got {self.p!r}")

    @classmethod
    def real(cls):
        return cls("real")

    @classmethod
    def padic(cls, p):
        return cls("padic", p)

    @classmethod
    def laurent(cls, p):
        return cls("laurent", p)

    @classmethod
    def parse(cls, text: str) -> "FieldDescriptor":
        """Parse the CLI form ``real``, ``padic:<p>`` or ``laurent:<p>``."""
        kind, _, p = text.strip().partition(":")
        if kind == "real":
            if p:
                raise ValueError("the real field takes no prime")
            return cls.real()
        if not p.isdigit():
            raise ValueError(f"field {text!r} needs a prime, e.g. {kind}:3")
        return cls(kind, int(p))

    @property
    def archimedean(self) -> bool:
        return self.kind == "real"

    def default_domain(self):
        return LaurentDomain(self.p) if self.kind == "laurent" else RATIONAL

    def accepts(self, domain) -> bool:
        if self.kind == "real":
            return domain is RATIONAL or domain is FLOAT
        if self.kind == "padic":
            return domain is RATIONAL
        return isinstance(domain, LaurentDomain) and domain.p == self.p

    def __str__(self):
        return self.kind if self.p is None else f"{self.kind}:{self.p}"


class LaurentPoly:
    """Element of F_p[t, 1/t], stored densely as ``(low, coeffs)``.

    ``coeffs[i]`` is the coefficient of ``t**(low + i)``; both ends are
    nonzero, and zero is the empty tuple.
    """

    __slots__ = ("p", "low", "coeffs", "_hash")

    def __init__(self, p: int, low: int = 0, coeffs=()):
        coeffs = tuple(c % p for c in coeffs)
        start = 0
        end = len(coeffs)
        while start < end and coeffs[start] == 0:
            start += 1
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        self.p = p
        if start == end:
            self.low = 0
            self.coeffs = ()
        else:
            self.low = low + start
            self.coeffs = coeffs[start:end]
        self._hash = None

    @classmethod
    def _raw(cls, p, low, coeffs):
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj.p = p
        obj.low = low
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_dict(cls, p: int, terms: dict) -> "LaurentPoly":
        terms = {k: v % p for k, v in terms.items() if v % p}
        if not terms:
            return cls(p)
        low = min(terms)
        dense = [0] * (max(terms) - low + 1)
        for k, v in terms.items():
            dense[k - low] = v
        return cls(p, low, dense)

    @classmethod
    def monomial(cls, p: int, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls(p, exponent, (coeff,))

    def to_dict(self) -> dict:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self):
        return INF if not self.coeffs else self.low

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def shift(self, k: int) -> "LaurentPoly":
        if not self.coeffs:
            return self
        return LaurentPoly._raw(self.p, self.low + k, self.coeffs)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.p != self.p:
                raise DomainMismatchError(f"F_{self.p} and F_{other.p} Laurent polynomials do not mix")
            return other
        if isinstance(other, int):
            return LaurentPoly(self.p, 0, (other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        dense = [0] * (high - low + 1)
        off = self.low - low
        for i, c in enumerate(self.coeffs):
            dense[off + i] = c
        off = other.low - low
        for i, c in enumerate(other.coeffs):
            dense[off + i] += c
        return LaurentPoly(self.p, low, dense)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return LaurentPoly._raw(p, self.low, tuple(-c % p for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return LaurentPoly._raw(self.p, 0, ())
        if len(other.coeffs) == 1 and other.coeffs[0] == 1:
            return self.shift(other.low)
        if len(self.coeffs) == 1 and self.coeffs[0] == 1:
            return other.shift(self.low)
        # F_p has no zero divisors, so the end coefficients stay nonzero
        return LaurentPoly._raw(self.p, self.low + other.low, poly_mul_mod(self.coeffs, other.coeffs, self.p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.coeffs:
            raise NotInvertibleError("division by zero Laurent polynomial")
        if len(other.coeffs) != 1:
            raise NotInvertibleError(f"{other} is not a monomial, so not invertible in F_{self.p}[t, 1/t]")
        inv = pow(other.coeffs[0], -1, self.p)
        return LaurentPoly(self.p, self.low - other.low, tuple(c * inv for c in self.coeffs))

    def __pow__(self, m: int):
        if m < 0:
            return LaurentPoly(self.p, 0, (1,)) / self ** (-m)
        result = LaurentPoly(self.p, 0, (1,))
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.p == other.p and self.low == other.low and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == LaurentPoly(self.p, 0, (other,))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.low, self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __reduce__(self):
        return (LaurentPoly._raw, (self.p, self.low, self.coeffs))

    def __repr__(self):
        return f"LaurentPoly({self.p}, {self})"

    def __str__(self):
        return format_laurent(self)


def format_laurent(x: LaurentPoly) -> str:
    if not x.coeffs:
        return "0"
    terms = []
    for i, c in enumerate(x.coeffs):
        if not c:
            continue
        k = x.low + i
        if k == 0:
            terms.append(str(c))
            continue
        mono = "t" if k == 1 else f"t^{k}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms)


_TERM = re.compile(r"(\d+)?(?:(\*)?t(?:\^(-?\d+))?)?")


def parse_laurent(text: str, p: int) -> LaurentPoly:
    # strip whitespace, remembering where each kept character came from
    kept = [(i, ch) for i, ch in enumerate(text) if not ch.isspace()]
    s = "".join(ch for _, ch in kept)

    def origin(j):
        return kept[j][0] if j < len(kept) else len(text)

    if not s:
        raise ScalarParseError("empty scalar", text, 0)
    terms: dict = {}
    j = 0
    first = True
    while j < len(s):
        sign = 1
        if s[j] in "+-":
            sign = -1 if s[j] == "-" else 1
            j += 1
        elif not first:
            raise ScalarParseError("expected '+' or '-'", text, origin(j))
        m = _TERM.match(s, j)
        digits, star, exp = m.group(1), m.group(2), m.group(3)
        has_t = m.group(0).endswith("t") or exp is not None
        if not m.group(0) or (star and (not has_t or digits is None)):
            raise ScalarParseError("expected a term like c, t, t^k or c*t^k", text, origin(j))
        if digits is not None and has_t and not star:
            raise ScalarParseError("missing '*' between coefficient and t", text, origin(j))
        coeff = 1
        if digits is not None:
            coeff = int(digits)
            if coeff >= p:
                raise CoefficientRangeError(f"coefficient {coeff} not in [0, {p})", text, origin(j))
        k = 0
        if has_t:
            k = int(exp) if exp is not None else 1
        terms[k] = terms.get(k, 0) + sign * coeff
        j = m.end()
        first = False
    return LaurentPoly.from_dict(p, terms)


_RATIONAL = re.compile(r"-?\d+(?:/\d+)?")


def parse_rational(text: str) -> Fraction:
    kept = [(i, ch) for i, ch in enumerate(text) if not ch.isspace()]
    s = "".join(ch for _, ch in kept)
    m = _RATIONAL.match(s)
    if not s or m is None or m.end() != len(s):
        pos = m.end() if m else 0
        raise ScalarParseError("malformed rational", text, kept[pos][0] if pos < len(kept) else len(text))
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise ScalarParseError("zero denominator", text, kept[s.index("/")][0])
    return Fraction(int(num), int(den) if den else 1)


def padic_valuation_int(n: int, p: int):
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    # square the divisor while it keeps dividing to stay fast on huge powers
    while n % p == 0:
        q = p
        k = 1
        while n % (q * q) == 0:
            q *= q
            k *= 2
        n //= q
        v += k
    return v


class _RationalDomain:
    name = "rational"
    tag = "Q"
    exact = True

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise DomainMismatchError(f"{x!r} is not a rational")

    def parse(self, text):
        return parse_rational(text)

    def format(self, x):
        return str(x)

    def valuation(self, x, p):
        if not x:
            return INF
        return padic_valuation_int(x.numerator, p) - padic_valuation_int(x.denominator, p)

    def uniformizer_power(self, k, p):
        return Fraction(p) ** k

    def bit_size(self, x):
        return x.numerator.bit_length() + x.denominator.bit_length()

    def __repr__(self):
        return "RATIONAL"

    def __reduce__(self):
        return "RATIONAL"


class _FloatDomain:
    name = "float"
    tag = "R"
    exact = False

    def __init__(self):
        self.zero = 0.0
        self.one = 1.0

    def coerce(self, x):
        return float(x)

    def parse(self, text):
        return float(parse_rational(text))

    def format(self, x):
        return repr(float(x))

    def __repr__(self):
        return "FLOAT"

    def __reduce__(self):
        return "FLOAT"


class LaurentDomain:
    name = "laurent"
    exact = True
    _cache: dict = {}

    def __new__(cls, p: int):
        inst = cls._cache.get(p)
        if inst is None:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            inst = super().__new__(cls)
            inst.p = p
            inst.tag = f"L{p}"
            inst.zero = LaurentPoly(p)
            inst.one = LaurentPoly(p, 0, (1,))
            cls._cache[p] = inst
        return inst

    def __getnewargs__(self):
        return (self.p,)

    def coerce(self, x):
        if isinstance(x, LaurentPoly):
            if x.p != self.p:
                raise DomainMismatchError(f"expected F_{self.p} coefficients, got F_{x.p}")
            return x
        if isinstance(x, int):
            return LaurentPoly(self.p, 0, (x,))
        raise DomainMismatchError(f"{x!r} is not a Laurent polynomial")

    def parse(self, text):
        return parse_laurent(text, self.p)

    def format(self, x):
        return format_laurent(x)

    def valuation(self, x, p=None):
        return x.valuation()

    def uniformizer_power(self, k, p=None):
        return LaurentPoly(self.p, k, (1,))

    def bit_size(self, x):
        return len(x.coeffs) * self.p.bit_length()

    def __repr__(self):
        return f"LaurentDomain({self.p})"


RATIONAL = _RationalDomain()
FLOAT = _FloatDomain()

ExactScalar = Union[Fraction, LaurentPoly]


def domain_of(x):
    if isinstance(x, LaurentPoly):
        return LaurentDomain(x.p)
    if isinstance(x, (Fraction, int)):
        return RATIONAL
    if isinstance(x, float):
        return FLOAT
    raise DomainMismatchError(f"{x!r} is not a supported scalar")


def valuation(x, field: FieldDescriptor):
    """Additive valuation of ``x``; ``INF`` for zero."""
    if field.kind == "padic":
        if not isinstance(x, (Fraction, int)) or isinstance(x, bool):
            raise DomainMismatchError(f"p-adic valuation needs a rational, got {type(x).__name__}")
        return RATIONAL.valuation(Fraction(x), field.p)
    if field.kind == "laurent":
        if not isinstance(x, LaurentPoly) or x.p != field.p:
            raise DomainMismatchError(f"laurent:{field.p} valuation needs an F_{field.p} Laurent polynomial")
        return x.valuation()
    raise DomainMismatchError("the real field has no discrete valuation")


def domain_arithmetic(a, b, op: str):
    """Exact ``a <op> b`` with both operands from the same domain."""
    da, db = domain_of(a), domain_of(b)
    if da is not db:
        raise DomainMismatchError(f"cannot combine {da!r} with {db!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise NotInvertibleError("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def parse_scalar(text: str, domain):
    return domain.parse(text)


def format_scalar(x, domain=None) -> str:
    return (domain or domain_of(x)).format(x)
