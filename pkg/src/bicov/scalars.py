"""Exact coefficient fields.

Two backends share one element interface:

* ``SymbolicField`` -- rational functions in ``s`` with integer coefficients,
  where the deformation parameter is ``q = s**2``.  Elements are kept as
  reduced fractions of ``flint.fmpz_poly`` values.
* ``QuadraticField(tau)`` -- the field ``Q(q)`` with ``q**2 = -tau*q - 1`` for a
  rational trace ``tau``.  Elements are pairs ``(x0, x1)`` of ``gmpy2.mpq``
  standing for ``x0 + x1*q``.

Elements support ``+ - * /``, ``==`` and hashing, and mix freely with Python
ints and ``fractions.Fraction``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2
from flint import fmpz_poly

__all__ = [
    "FieldConfig",
    "SymbolicField",
    "QuadraticField",
    "make_field",
    "SymbolicScalar",
    "QuadraticScalar",
    "ScalarSyntaxError",
    "HalfPowerUnsupported",
    "RootOfUnity",
    "FieldMismatch",
    "q_int",
    "q_factorial",
    "q_binomial",
    "parse_scalar",
    "ROOT_OF_UNITY_TRACES",
]

# Rational traces tau for which a root of q^2 + tau q + 1 is a root of unity.
ROOT_OF_UNITY_TRACES = frozenset(Fraction(t) for t in (-2, -1, 0, 1, 2))

_POLY_ONE = fmpz_poly([1])
_POLY_ZERO = fmpz_poly([])


class ScalarSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class HalfPowerUnsupported(ValueError):
    """A half-integer power of q was requested in a field without s = q^(1/2)."""


class RootOfUnity(ValueError):
    """The trace forces q to be a root of unity."""


class FieldMismatch(TypeError):
    pass


@dataclass(frozen=True)
class FieldConfig:
    mode: str  # "symbolic" | "quadratic"
    trace: Optional[Fraction] = None

    def __post_init__(self):
        if self.mode not in ("symbolic", "quadratic"):
            raise ValueError(f"unknown field mode {self.mode!r}")
        if self.mode == "quadratic":
            if self.trace is None:
                raise ValueError("quadratic mode needs a trace")
            tau = Fraction(self.trace)
            if tau in ROOT_OF_UNITY_TRACES:
                raise RootOfUnity(f"trace {tau} makes q a root of unity")
            object.__setattr__(self, "trace", tau)

    def to_json(self) -> dict:
        if self.mode == "symbolic":
            return {"mode": "symbolic"}
        return {"mode": "quadratic", "trace": _fmt_rational(self.trace)}


def make_field(config: FieldConfig):
    if config.mode == "symbolic":
        return SymbolicField()
    return QuadraticField(config.trace)


def _fmt_rational(x) -> str:
    x = Fraction(int(x.numerator), int(x.denominator))
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _as_fraction(x) -> Optional[Fraction]:
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if type(x) is type(gmpy2.mpq()) or type(x) is type(gmpy2.mpz()):
        return Fraction(int(x.numerator), int(x.denominator))
    return None


# ---------------------------------------------------------------------------
# Symbolic backend: Q(s)
# ---------------------------------------------------------------------------


def _normalize(num: fmpz_poly, den: fmpz_poly):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return _POLY_ZERO, _POLY_ONE
    if den.is_one():
        return num, den
    g = num.gcd(den)
    if not g.is_one():
        num = num // g
        den = den // g
    if den.leading_coefficient() < 0:
        num = -num
        den = -den
    return num, den


class SymbolicScalar:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: fmpz_poly, den: fmpz_poly = _POLY_ONE, _reduced: bool = False):
        if not _reduced:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    field = None  # set below, SymbolicField singleton

    def _coerce(self, other):
        if isinstance(other, SymbolicScalar):
            return other
        f = _as_fraction(other)
        if f is not None:
            return SymbolicScalar(fmpz_poly([f.numerator]), fmpz_poly([f.denominator]), True)
        if isinstance(other, QuadraticScalar):
            raise FieldMismatch("cannot mix symbolic and quadratic scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return SymbolicScalar(self.num + o.num, self.den)
        return SymbolicScalar(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicScalar(-self.num, self.den, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return SymbolicScalar(self.num - o.num, self.den)
        return SymbolicScalar(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return SymbolicScalar(self.num * o.num, _POLY_ONE, True)
        return SymbolicScalar(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return SymbolicScalar(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return SymbolicScalar(self.num ** k, self.den ** k, True)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash((tuple(int(c) for c in self.num.coeffs()),
                                   tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    def is_rational(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        n = 0 if self.num.is_zero() else int(self.num[0])
        return Fraction(n, int(self.den[0]))

    def size(self) -> tuple:
        """Pivot heuristic: total degree first, then coefficient height."""
        return (self.num.degree() + self.den.degree(),
                self.num.height_bits() + self.den.height_bits())

    def __repr__(self):
        return f"SymbolicScalar({self})"

    def __str__(self):
        return SymbolicField.format(self)


# ---------------------------------------------------------------------------
# Quadratic backend: Q(q), q^2 = -tau q - 1
# ---------------------------------------------------------------------------

_MPQ = gmpy2.mpq
_MPQ0 = _MPQ(0)


class QuadraticScalar:
    __slots__ = ("x0", "x1", "field")

    def __init__(self, field: "QuadraticField", x0, x1=_MPQ0):
        self.field = field
        self.x0 = x0
        self.x1 = x1

    def _coerce(self, other):
        if isinstance(other, QuadraticScalar):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("quadratic scalars over different traces")
            return other
        f = _as_fraction(other)
        if f is not None:
            return QuadraticScalar(self.field, _MPQ(f.numerator, f.denominator))
        if isinstance(other, SymbolicScalar):
            raise FieldMismatch("cannot mix symbolic and quadratic scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticScalar(self.field, self.x0 + o.x0, self.x1 + o.x1)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(self.field, -self.x0, -self.x1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticScalar(self.field, self.x0 - o.x0, self.x1 - o.x1)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a0, a1, b0, b1 = self.x0, self.x1, o.x0, o.x1
        if not a1 and not b1:
            return QuadraticScalar(self.field, a0 * b0)
        t = a1 * b1
        return QuadraticScalar(self.field, a0 * b0 - t, a0 * b1 + a1 * b0 - self.field._tau * t)

    __rmul__ = __mul__

    def inverse(self):
        a0, a1 = self.x0, self.x1
        if not a1:
            if not a0:
                raise ZeroDivisionError("inverse of zero")
            return QuadraticScalar(self.field, 1 / a0)
        tau = self.field._tau
        norm = a0 * a0 - tau * a0 * a1 + a1 * a1
        # conjugate q -> -tau - q
        return QuadraticScalar(self.field, (a0 - tau * a1) / norm, -a1 / norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.x0) or bool(self.x1)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.x0 == o.x0 and self.x1 == o.x1

    def __hash__(self):
        if not self.x1:
            return hash(Fraction(int(self.x0.numerator), int(self.x0.denominator)))
        return hash((self.x0, self.x1))

    def is_rational(self) -> bool:
        return not self.x1

    def to_fraction(self) -> Fraction:
        if self.x1:
            raise ValueError(f"{self} is not rational")
        return Fraction(int(self.x0.numerator), int(self.x0.denominator))

    def size(self) -> tuple:
        bits = 0
        for x in (self.x0, self.x1):
            if x:
                bits += x.numerator.bit_length() + x.denominator.bit_length()
        return ((1 if self.x0 else 0) + (1 if self.x1 else 0), bits)

    def __repr__(self):
        return f"QuadraticScalar({self})"

    def __str__(self):
        return self.field.format(self)


# ---------------------------------------------------------------------------
# Field objects
# ---------------------------------------------------------------------------


class SymbolicField:
    """Q(s) with q = s^2; generic (transcendental) q."""

    mode = "symbolic"
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            inst = super().__new__(cls)
            inst.zero = SymbolicScalar(_POLY_ZERO, _POLY_ONE, True)
            inst.one = SymbolicScalar(_POLY_ONE, _POLY_ONE, True)
            inst.s = SymbolicScalar(fmpz_poly([0, 1]), _POLY_ONE, True)
            inst.q = SymbolicScalar(fmpz_poly([0, 0, 1]), _POLY_ONE, True)
            cls._instance = inst
        return cls._instance

    @property
    def config(self) -> FieldConfig:
        return FieldConfig("symbolic")

    def __repr__(self):
        return "SymbolicField()"

    def __call__(self, x) -> SymbolicScalar:
        if isinstance(x, SymbolicScalar):
            return x
        if isinstance(x, str):
            return parse_scalar(x, self)
        f = _as_fraction(x)
        if f is None:
            raise TypeError(f"cannot coerce {x!r} into {self}")
        return SymbolicScalar(fmpz_poly([f.numerator]), fmpz_poly([f.denominator]), True)

    def s_pow(self, k: int) -> SymbolicScalar:
        if k >= 0:
            return SymbolicScalar(fmpz_poly([0] * k + [1]), _POLY_ONE, True)
        return SymbolicScalar(_POLY_ONE, fmpz_poly([0] * (-k) + [1]), True)

    def q_pow(self, k: int) -> SymbolicScalar:
        return self.s_pow(2 * k)

    def q_half_pow(self, k: int) -> SymbolicScalar:
        """q^(k/2)."""
        return self.s_pow(k)

    def minimal_polynomial_check(self) -> bool:
        return True

    def describe(self) -> str:
        return "q = s^2, s transcendental over Q"

    @staticmethod
    def format(x: SymbolicScalar) -> str:
        num, den = x.num, x.den
        if num.is_zero():
            return "0"
        dcoeffs = [int(c) for c in den.coeffs()]
        nz = [i for i, c in enumerate(dcoeffs) if c]
        if len(nz) == 1:
            shift = nz[0]
            c0 = dcoeffs[shift]
            terms = [(i - shift, Fraction(int(c), c0))
                     for i, c in enumerate(num.coeffs()) if c]
            return _format_laurent(terms)
        nterms = [(i, Fraction(int(c))) for i, c in enumerate(num.coeffs()) if c]
        dterms = [(i, Fraction(c)) for i, c in enumerate(dcoeffs) if c]
        return f"({_format_laurent(nterms, force_s=True)})/({_format_laurent(dterms, force_s=True)})"


def _format_laurent(terms, force_s: bool = False) -> str:
    """terms: list of (exponent of s, Fraction coefficient)."""
    use_q = not force_s and all(e % 2 == 0 for e, _ in terms)
    parts = []
    for e, c in sorted(terms, key=lambda t: -t[0]):
        var, exp = ("q", e // 2) if use_q else ("s", e)
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if exp == 0:
            body = _fmt_rational(mag)
        else:
            mono = var if exp == 1 else f"{var}^{exp}"
            body = mono if mag == 1 else f"{_fmt_rational(mag)}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class QuadraticField:
    """Q(q) with q^2 + tau*q + 1 = 0.

    When tau^2 - 4 is a rational square the polynomial splits; q is then the
    rational root of larger absolute value and every element is stored with
    ``x1 == 0``.
    """

    mode = "quadratic"

    def __init__(self, tau):
        tau = Fraction(tau)
        if tau in ROOT_OF_UNITY_TRACES:
            raise RootOfUnity(f"trace {tau} makes q a root of unity")
        self.tau = tau
        self._tau = _MPQ(tau.numerator, tau.denominator)
        self.zero = QuadraticScalar(self, _MPQ0)
        self.one = QuadraticScalar(self, _MPQ(1))
        disc = self._tau * self._tau - 4
        self.rational_q = None
        if gmpy2.is_square(disc.numerator) and gmpy2.is_square(disc.denominator):
            root = _MPQ(gmpy2.isqrt(disc.numerator), gmpy2.isqrt(disc.denominator))
            self.rational_q = (-self._tau + root) / 2 if self._tau < 0 else (-self._tau - root) / 2
            self.q = QuadraticScalar(self, self.rational_q)
        else:
            self.q = QuadraticScalar(self, _MPQ0, _MPQ(1))

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.tau == self.tau

    def __hash__(self):
        return hash(("quadratic", self.tau))

    def __repr__(self):
        return f"QuadraticField({_fmt_rational(self.tau)})"

    @property
    def config(self) -> FieldConfig:
        return FieldConfig("quadratic", self.tau)

    def __call__(self, x) -> QuadraticScalar:
        if isinstance(x, QuadraticScalar):
            if x.field != self:
                raise FieldMismatch("quadratic scalars over different traces")
            return x
        if isinstance(x, str):
            return parse_scalar(x, self)
        if isinstance(x, SymbolicScalar):
            if not x.is_rational():
                raise FieldMismatch(f"{x} is not a rational constant")
            x = x.to_fraction()
        f = _as_fraction(x)
        if f is None:
            raise TypeError(f"cannot coerce {x!r} into {self}")
        return QuadraticScalar(self, _MPQ(f.numerator, f.denominator))

    def q_pow(self, k: int) -> QuadraticScalar:
        return self.q ** k

    def s_pow(self, k: int) -> QuadraticScalar:
        if k % 2:
            raise HalfPowerUnsupported(f"s^{k} needs a square root of q")
        return self.q ** (k // 2)

    q_half_pow = s_pow

    def minimal_polynomial_check(self) -> bool:
        return not (self.q * self.q + self.tau * self.q + 1)

    def describe(self) -> str:
        return f"q^2 + {_fmt_rational(self.tau)}*q + 1 = 0"

    def format(self, x: QuadraticScalar) -> str:
        terms = []
        if x.x1:
            terms.append((2, Fraction(int(x.x1.numerator), int(x.x1.denominator))))
        if x.x0:
            terms.append((0, Fraction(int(x.x0.numerator), int(x.x0.denominator))))
        if not terms:
            return "0"
        return _format_laurent(terms)


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------


def q_int(field, k: int):
    """The balanced q-integer [k]_q = (q^k - q^-k)/(q - q^-1)."""
    if k < 0:
        raise ValueError("q_int needs k >= 0")
    total = field.zero
    for e in range(k - 1, -k, -2):
        total = total + field.q_pow(e)
    return total


def q_factorial(field, k: int):
    out = field.one
    for i in range(1, k + 1):
        out = out * q_int(field, i)
    return out


def q_binomial(field, n: int, k: int):
    """q^2-binomial coefficient q^{k(n-k)} [n]! / ([n-k]! [k]!); zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return field.zero
    return field.q_pow(k * (n - k)) * q_factorial(field, n) / (
        q_factorial(field, n - k) * q_factorial(field, k))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(1) if m.group(1) is not None else m.start(2)
        tok = m.group(1) if m.group(1) is not None else m.group(2)
        if m.group(2) is not None and tok not in "sq+-*/^()":
            raise ScalarSyntaxError(f"unexpected character {tok!r}", start)
        tokens.append((tok, start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, field):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ScalarSyntaxError(f"expected {expected!r}, found {tok or 'end of input'!r}", pos)
        self.i += 1
        return tok

    def parse(self):
        if self.peek() == "":
            raise ScalarSyntaxError("empty expression", 0)
        value = self.expr()
        if self.peek() != "":
            raise ScalarSyntaxError(f"unexpected {self.peek()!r}", self.pos())
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                value = value * self.factor()
            elif tok == "/":
                self.take()
                pos = self.pos()
                rhs = self.factor()
                if not rhs:
                    raise ScalarSyntaxError("division by zero", pos)
                value = value / rhs
            elif tok == "(" or tok in ("s", "q") or tok.isdigit():
                value = value * self.factor()
            else:
                return value

    def integer(self):
        neg = False
        if self.peek() == "-":
            self.take()
            neg = True
        tok = self.peek()
        if not tok.isdigit():
            raise ScalarSyntaxError("expected integer", self.pos())
        self.take()
        return -int(tok) if neg else int(tok)

    def exponent(self):
        if self.peek() == "^":
            self.take()
            return self.integer()
        return 1

    def factor(self):
        tok = self.peek()
        if tok == "-":
            self.take()
            return -self.factor()
        if tok.isdigit():
            self.take()
            return self.field(int(tok))
        if tok == "s":
            pos = self.pos()
            self.take()
            k = self.exponent()
            if self.field.mode == "quadratic":
                raise HalfPowerUnsupported(f"'s' is not available in quadratic mode (position {pos})")
            return self.field.s_pow(k)
        if tok == "q":
            self.take()
            return self.field.q_pow(self.exponent())
        if tok == "(":
            self.take()
            value = self.expr()
            self.take(")")
            if self.peek() == "^":
                value = value ** self.exponent()
            return value
        raise ScalarSyntaxError(f"unexpected {tok or 'end of input'!r}", self.pos())


def parse_scalar(text: str, field=None):
    """Parse a scalar expression; ``field`` defaults to the symbolic field."""
    if field is None:
        field = SymbolicField()
    return _Parser(text, field).parse()


SymbolicScalar.field = SymbolicField()
