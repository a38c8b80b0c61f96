"""Exact coefficient fields: the rationals and prime fields F_p.

Rationals are plain :class:`fractions.Fraction` values.  Elements of F_p are
:class:`GFElem` instances that support the usual arithmetic operators (and
mix freely with Python ints), so generic code can be written once with
``+ - * /`` and ``field.zero`` / ``field.one``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import random

from .errors import ValidationError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class GFElem:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, GFElem):
            if other.p != self.p:
                raise TypeError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction) and other.denominator == 1:
            return other.numerator
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElem(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "GFElem":
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return GFElem(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        o %= self.p
        if o == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return GFElem(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(o, self.p) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return GFElem(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"GFElem({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class RationalField:
    """The field Q, elements are ``Fraction``."""

    characteristic = 0
    name = "q"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, GFElem):
            raise TypeError("cannot coerce an F_p element into Q")
        return Fraction(x)

    def parse(self, s) -> Fraction:
        if isinstance(s, bool):
            raise ValidationError(f"not a rational number: {s!r}")
        if isinstance(s, int):
            return Fraction(s)
        try:
            return Fraction(str(s).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational number: {s!r}") from exc

    def format(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction)) and not isinstance(x, bool)

    def random_element(self, rng: random.Random, lo: int = -5, hi: int = 5) -> Fraction:
        return Fraction(rng.randint(lo, hi))

    def random_nonzero(self, rng: random.Random, lo: int = -5, hi: int = 5) -> Fraction:
        while True:
            x = rng.randint(lo, hi)
            if x:
                return Fraction(x)

    def elements(self):
        raise ValidationError("Q is infinite")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p.  Obtain instances through :func:`GF` so they are shared."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"fp:{p}"

    @property
    def zero(self) -> GFElem:
        return GFElem(0, self.p)

    @property
    def one(self) -> GFElem:
        return GFElem(1, self.p)

    def __call__(self, x) -> GFElem:
        if isinstance(x, GFElem):
            if x.p != self.p:
                raise TypeError(f"cannot coerce F_{x.p} element into F_{self.p}")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return GFElem(x.numerator, self.p) / x.denominator
        return GFElem(int(x), self.p)

    def parse(self, s) -> GFElem:
        if isinstance(s, bool):
            raise ValidationError(f"not an element of F_{self.p}: {s!r}")
        if isinstance(s, int):
            return GFElem(s, self.p)
        text = str(s).strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                num, den = int(num), int(den)
                if den % self.p == 0:
                    raise ValidationError(f"division by the characteristic in {text!r}")
                return GFElem(num, self.p) / den
            return GFElem(int(text), self.p)
        except ValueError as exc:
            raise ValidationError(f"not an element of F_{self.p}: {s!r}") from exc

    def format(self, x) -> str:
        return str(self(x).v)

    def contains(self, x) -> bool:
        return isinstance(x, GFElem) and x.p == self.p

    def random_element(self, rng: random.Random, lo: int = 0, hi: int | None = None) -> GFElem:
        return GFElem(rng.randrange(self.p), self.p)

    def random_nonzero(self, rng: random.Random, lo: int = 0, hi: int | None = None) -> GFElem:
        return GFElem(rng.randrange(1, self.p), self.p)

    def elements(self):
        return [GFElem(v, self.p) for v in range(self.p)]

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: str):
    """``"q"`` -> QQ, ``"fp:7"`` -> GF(7)."""
    text = spec.strip().lower()
    if text in ("q", "qq", "rationals"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError as exc:
            raise ValidationError(f"bad field spec {spec!r}") from exc
        return GF(p)
    raise ValidationError(f"bad field spec {spec!r}; use 'q' or 'fp:<prime>'")


def field_of(x):
    if isinstance(x, GFElem):
        return GF(x.p)
    return QQ
