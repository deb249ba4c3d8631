"""Exact arithmetic in K = Q(sqrt d) and its unramified odd places."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from sympy import factorint, isprime

from .errors import DenominatorNotUnit, RamifiedOrEvenPlace
from .padic import PadicContext, PadicElement, is_square_mod


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt d) for squarefree d; d = 1 stands for Q itself."""

    d: int = 1

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("d must be nonzero")
        if self.d != 1 and any(e > 1 for e in factorint(abs(self.d)).values()):
            raise ValueError(f"d = {self.d} is not squarefree")

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def degree(self) -> int:
        return 1 if self.d == 1 else 2

    def __call__(self, a=0, b=0) -> "QuadraticFieldElement":
        return QuadraticFieldElement(a, b, self)

    def sqrt_d(self) -> "QuadraticFieldElement":
        return QuadraticFieldElement(0, 1, self)

    def __str__(self):
        return "Q" if self.d == 1 else f"Q(sqrt({self.d}))"


class QuadraticFieldElement:
    """a + b*sqrt(d) with rational a, b."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a=0, b=0, field: QuadField = QuadField(1)):
        self.field = field
        a, b = Fraction(a), Fraction(b)
        if field.d == 1:
            # sqrt(1) = 1, keep a single coordinate
            a, b = a + b, Fraction(0)
        self.a, self.b = a, b

    def _coerce(self, other) -> "QuadraticFieldElement":
        if isinstance(other, QuadraticFieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticFieldElement(other, 0, self.field)
        raise TypeError

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticFieldElement(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticFieldElement(-self.a, -self.b, self.field)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticFieldElement(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self.field.d
        return QuadraticFieldElement(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, self.field)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def inverse(self) -> "QuadraticFieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return QuadraticFieldElement(self.a / n, -self.b / n, self.field)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def conjugate(self) -> "QuadraticFieldElement":
        return QuadraticFieldElement(self.a, -self.b, self.field)

    def is_rational(self) -> bool:
        return self.b == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.field.d))

    def __repr__(self):
        return f"QuadraticFieldElement({self.a}, {self.b}, d={self.field.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        s = f"{self.b}*sqrt({self.field.d})"
        return s if self.a == 0 else f"{self.a} + {s}" if self.b > 0 else f"{self.a} - {-self.b}*sqrt({self.field.d})"


def galois_conjugate(x: QuadraticFieldElement) -> QuadraticFieldElement:
    return x.conjugate()


@dataclass(frozen=True, order=True)
class Place:
    p: int
    residue_degree: int
    kind: Literal["split", "inert"]

    def __str__(self):
        return f"{self.p}({self.kind})"


def classify_place(field: QuadField, p: int) -> Place:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2 or field.d % p == 0:
        raise RamifiedOrEvenPlace(f"p = {p} is even or ramified in {field}")
    if field.d == 1 or is_square_mod(field.d, p):
        return Place(p, 1, "split")
    return Place(p, 2, "inert")


def place_context(field: QuadField, place: Place, m: int) -> PadicContext:
    """The p-adic context used for K_v; coherent across all embeddings at v."""
    return PadicContext(place.p, place.residue_degree, m, None if field.d == 1 else field.d)


def embed(x: QuadraticFieldElement, place: Place, context: PadicContext) -> PadicElement:
    """Image of x in O_{K_v} = W(k_v)."""
    if context.p != place.p or context.n != place.residue_degree:
        raise ValueError("context does not match the place")
    for c in (x.a, x.b):
        if c.denominator % place.p == 0:
            raise DenominatorNotUnit(f"{x} has a denominator divisible by {place.p}")
    a = context.from_rational(x.a)
    if x.b == 0:
        return a
    if context.d != x.field.d:
        raise ValueError("context was not built for this field")
    return a + context.from_rational(x.b) * context.sqrt_d
