"""Truncated arithmetic in W(k)/p^m for k = F_p or F_{p^2}.

W(F_{p^2}) is modelled as Z_p[s]/(s^2 - d) with d a quadratic non-residue
mod p, so an element is a pair (c0, c1) meaning c0 + c1*s.  Every element
carries the number of p-adic digits it is known to; operations propagate
that bound and never claim more than they can justify.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from sympy import isprime
from sympy.ntheory import sqrt_mod

from .errors import DenominatorNotUnit, NotAUnit, PrecisionExhausted
from .linalg import rational_reconstruct

INF = math.inf


def vp(x: int, p: int) -> float:
    """p-adic valuation of an integer (inf for 0)."""
    if x == 0:
        return INF
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def is_square_mod(d: int, p: int) -> bool:
    d %= p
    return d == 0 or pow(d, (p - 1) // 2, p) == 1


@dataclass(frozen=True)
class PadicContext:
    """The ring W(F_{p^n}) truncated at p^m.

    For ``n == 2`` the extension is Z_p[s]/(s^2 - d) with ``d`` a non-residue.
    For ``n == 1`` an optional ``d`` that is a square mod p records which
    square root of d the context uses (see :attr:`sqrt_d`).
    """

    p: int
    n: int = 1
    m: int = 64
    d: int | None = None

    def __post_init__(self):
        if self.p == 2 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.n not in (1, 2):
            raise ValueError("residue degree must be 1 or 2")
        if self.m < 4:
            raise ValueError("working precision must be at least 4 digits")
        if self.n == 2:
            if self.d is None or self.d % self.p == 0 or is_square_mod(self.d, self.p):
                raise ValueError(f"n = 2 needs a quadratic non-residue mod {self.p}, got {self.d}")

    @cached_property
    def modulus(self) -> int:
        return self.p ** self.m

    @cached_property
    def sigma_generator(self) -> tuple[int, int]:
        """Image of s under Frobenius, found by Newton iteration on x^2 - d."""
        if self.n == 1:
            return (0, 1)
        mod = self.modulus
        p, d = self.p, self.d
        # s^p = d^((p-1)/2) * s, reduced mod p; Hensel-lift that root of x^2 - d.
        x = (0, pow(d, (p - 1) // 2, p) % p)
        for _ in range(self.m.bit_length() + 2):
            # x <- x - (x^2 - d) / (2x)
            x0, x1 = x
            sq = ((x0 * x0 + d * x1 * x1 - d) % mod, (2 * x0 * x1) % mod)
            t0, t1 = 2 * x0, 2 * x1
            norm = (t0 * t0 - d * t1 * t1) % mod
            ninv = pow(norm, -1, mod)
            inv = (t0 * ninv % mod, -t1 * ninv % mod)
            q0 = (sq[0] * inv[0] + d * sq[1] * inv[1]) % mod
            q1 = (sq[0] * inv[1] + sq[1] * inv[0]) % mod
            x = ((x0 - q0) % mod, (x1 - q1) % mod)
        assert x == (0, (-1) % mod), "Frobenius lift of s did not converge to -s"
        return x

    @cached_property
    def sqrt_d(self) -> "PadicElement":
        """The chosen square root of d.

        For n = 2 it is the generator s.  For n = 1 it is the Hensel lift of
        the smallest nonnegative square root of d mod p.
        """
        if self.n == 2:
            return PadicElement(self, 0, 1)
        if self.d is None or not is_square_mod(self.d, self.p) or self.d % self.p == 0:
            raise ValueError(f"{self.d} has no unit square root in Z_{self.p}")
        r = min(sqrt_mod(self.d, self.p, all_roots=True))
        mod = self.modulus
        for _ in range(self.m.bit_length() + 2):
            r = (r - (r * r - self.d) * pow(2 * r, -1, mod)) % mod
        return PadicElement(self, r, 0)

    def element(self, c0: int = 0, c1: int = 0, prec: int | None = None) -> "PadicElement":
        return PadicElement(self, c0, c1, prec)

    def zero(self) -> "PadicElement":
        return PadicElement(self, 0, 0)

    def one(self) -> "PadicElement":
        return PadicElement(self, 1, 0)

    def from_rational(self, q) -> "PadicElement":
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise DenominatorNotUnit(f"{q} is not {self.p}-integral")
        return PadicElement(self, q.numerator * pow(q.denominator, -1, self.modulus), 0)

    def fraction(self, q) -> "PadicFraction":
        """Any rational as an element of K_v = W(k)[1/p]."""
        q = Fraction(q)
        if q == 0:
            return PadicFraction(self.zero(), 0)
        v = int(vp(q.numerator, self.p) - vp(q.denominator, self.p))
        unit = q / Fraction(self.p) ** v
        return PadicFraction(self.from_rational(unit), v)

    def coerce(self, x) -> "PadicElement":
        if isinstance(x, PadicElement):
            if x.ctx != self:
                raise ValueError("mixing elements of different p-adic contexts")
            return x
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")


class PadicElement:
    """An element c0 + c1*s of W(k), known modulo p^prec."""

    __slots__ = ("ctx", "c0", "c1", "prec")

    def __init__(self, ctx: PadicContext, c0: int, c1: int = 0, prec: int | None = None):
        prec = ctx.m if prec is None else max(0, min(prec, ctx.m))
        mod = ctx.p ** prec
        self.ctx = ctx
        self.prec = prec
        self.c0 = c0 % mod
        self.c1 = c1 % mod if ctx.n == 2 else 0

    # -- inspection --------------------------------------------------------
    def valuation(self) -> float:
        """Largest e <= prec with p^e | x, or inf if x vanishes at its precision."""
        v = min(vp(self.c0, self.ctx.p), vp(self.c1, self.ctx.p))
        return INF if v >= self.prec else v

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def residue(self) -> tuple[int, int]:
        p = self.ctx.p
        return (self.c0 % p, self.c1 % p)

    def coords(self) -> tuple[int, int]:
        return (self.c0, self.c1)

    def with_precision(self, prec: int) -> "PadicElement":
        return PadicElement(self.ctx, self.c0, self.c1, min(prec, self.prec))

    def to_rational(self, bound: int | None = None) -> Fraction:
        """Rational reconstruction of an element of Z_p (c1 must vanish)."""
        from .errors import ReconstructionFailed

        if self.c1 != 0:
            raise ReconstructionFailed("element does not lie in Z_p")
        q = rational_reconstruct(self.c0, self.ctx.p ** self.prec, bound)
        if q is None:
            raise ReconstructionFailed(f"no rational of height <= {bound} matches {self.c0} mod {self.ctx.p}^{self.prec}")
        return q

    # -- arithmetic --------------------------------------------------------
    def _other(self, other) -> "PadicElement":
        return self.ctx.coerce(other)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return PadicElement(self.ctx, self.c0 + o.c0, self.c1 + o.c1, min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return PadicElement(self.ctx, -self.c0, -self.c1, self.prec)

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return PadicElement(self.ctx, self.c0 - o.c0, self.c1 - o.c1, min(self.prec, o.prec))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        va = min(self.valuation(), self.prec)
        vb = min(o.valuation(), o.prec)
        prec = min(self.prec + vb, o.prec + va, self.ctx.m)
        d = self.ctx.d if self.ctx.n == 2 else 0
        return PadicElement(
            self.ctx,
            self.c0 * o.c0 + d * self.c1 * o.c1,
            self.c0 * o.c1 + self.c1 * o.c0,
            int(prec),
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        return self * invert(self._other(other))

    def shift(self, k: int) -> "PadicElement":
        """Multiply by p^k (k >= 0) or divide exactly by p^-k (k < 0)."""
        p = self.ctx.p
        if k >= 0:
            return PadicElement(self.ctx, self.c0 * p**k, self.c1 * p**k, self.prec + k)
        k = -k
        if self.valuation() < k:
            raise NotAUnit(f"element is not divisible by {p}^{k}")
        if self.prec <= k:
            return PadicElement(self.ctx, 0, 0, 0)
        return PadicElement(self.ctx, self.c0 // p**k, self.c1 // p**k, self.prec - k)

    def frobenius(self) -> "PadicElement":
        if self.ctx.n == 1:
            return self
        g0, g1 = self.ctx.sigma_generator
        return PadicElement(self.ctx, self.c0 + self.c1 * g0, self.c1 * g1, self.prec)

    def __eq__(self, other):
        try:
            o = self._other(other)
        except (TypeError, DenominatorNotUnit):
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.ctx.n == 1:
            return f"PadicElement({self.c0} + O({self.ctx.p}^{self.prec}))"
        return f"PadicElement({self.c0} + {self.c1}*s + O({self.ctx.p}^{self.prec}))"

    def digits(self, count: int | None = None) -> str:
        """Base-p digits, least significant first, e.g. '1 0 4 ...'."""
        p = self.ctx.p
        count = self.prec if count is None else min(count, self.prec)

        def dig(c):
            out = []
            for _ in range(count):
                c, r = divmod(c, p)
                out.append(str(r))
            return " ".join(out)

        if self.ctx.n == 1:
            return dig(self.c0)
        return f"[{dig(self.c0)}] + [{dig(self.c1)}]*s"


def frobenius(x: PadicElement) -> PadicElement:
    """The canonical Frobenius lift σ, an automorphism of order n."""
    return x.frobenius()


def valuation(x: PadicElement) -> float:
    return x.valuation()


def invert(x: PadicElement) -> PadicElement:
    if x.valuation() != 0:
        raise NotAUnit(f"{x!r} is not a unit")
    ctx = x.ctx
    mod = ctx.p ** x.prec
    if ctx.n == 1:
        return PadicElement(ctx, pow(x.c0, -1, mod), 0, x.prec)
    norm = (x.c0 * x.c0 - ctx.d * x.c1 * x.c1) % mod
    ninv = pow(norm, -1, mod)
    return PadicElement(ctx, x.c0 * ninv, -x.c1 * ninv, x.prec)


class PadicFraction:
    """p^valuation * unit_part, an element of K_v = W(k)[1/p]."""

    __slots__ = ("unit_part", "valuation")

    def __init__(self, x: PadicElement, shift: int = 0):
        v = x.valuation()
        if v == INF:
            # zero: keep the absolute precision in the exponent
            self.unit_part = PadicElement(x.ctx, 0, 0, 0)
            self.valuation = shift + x.prec
            return
        self.unit_part = x.shift(-int(v))
        self.valuation = shift + int(v)

    @property
    def ctx(self) -> PadicContext:
        return self.unit_part.ctx

    def is_zero(self) -> bool:
        return self.unit_part.is_zero()

    @property
    def absolute_precision(self) -> int:
        return self.valuation + self.unit_part.prec

    def as_element(self) -> PadicElement:
        """Back to W(k); raises if the valuation is negative."""
        if self.is_zero():
            return PadicElement(self.ctx, 0, 0, max(0, self.valuation))
        if self.valuation < 0:
            raise DenominatorNotUnit("fraction has a pole at p")
        return self.unit_part.shift(self.valuation)

    def scaled(self, k: int) -> "PadicFraction":
        """Multiply by p^k."""
        out = object.__new__(PadicFraction)
        out.unit_part = self.unit_part
        out.valuation = self.valuation + k
        return out

    def __mul__(self, other):
        if not isinstance(other, PadicFraction):
            other = self.ctx.fraction(other) if isinstance(other, (int, Fraction)) else PadicFraction(other)
        if self.is_zero() or other.is_zero():
            v = min(self.absolute_precision + max(other.valuation, 0) if not other.is_zero() else INF,
                    other.absolute_precision + max(self.valuation, 0) if not self.is_zero() else INF,
                    self.valuation + other.valuation + self.ctx.m)
            out = object.__new__(PadicFraction)
            out.unit_part = PadicElement(self.ctx, 0, 0, 0)
            out.valuation = int(v) if v != INF else self.valuation + other.valuation
            return out
        return PadicFraction(self.unit_part * other.unit_part, self.valuation + other.valuation)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, PadicFraction):
            other = self.ctx.fraction(other) if isinstance(other, (int, Fraction)) else PadicFraction(other)
        base = min(self.valuation, other.valuation)
        a = self.unit_part.shift(self.valuation - base)
        b = other.unit_part.shift(other.valuation - base)
        return PadicFraction(a + b, base)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(PadicFraction)
        out.unit_part = -self.unit_part
        out.valuation = self.valuation
        return out

    def __sub__(self, other):
        return self + (-other if isinstance(other, PadicFraction) else -Fraction(other) if isinstance(other, (int, Fraction)) else -PadicFraction(other))

    def frobenius(self) -> "PadicFraction":
        out = object.__new__(PadicFraction)
        out.unit_part = self.unit_part.frobenius()
        out.valuation = self.valuation
        return out

    def inverse(self) -> "PadicFraction":
        if self.is_zero():
            raise NotAUnit("zero has no inverse")
        return PadicFraction(invert(self.unit_part), -self.valuation)

    def __eq__(self, other):
        if not isinstance(other, PadicFraction):
            try:
                other = self.ctx.fraction(other) if isinstance(other, (int, Fraction)) else PadicFraction(other)
            except TypeError:
                return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            return f"PadicFraction(O({self.ctx.p}^{self.valuation}))"
        return f"PadicFraction({self.ctx.p}^{self.valuation} * {self.unit_part!r})"


# -- linear algebra over W(k) -------------------------------------------------

@dataclass
class Echelon:
    """Gauss-Jordan form over Z_p with minimal-valuation (full) pivoting.

    ``rows`` are the pivot rows, each normalised so the pivot entry is 1 and
    every other pivot column is cleared; the remaining entries are integral.
    ``zero_precision`` is the lowest precision at which a discarded residual
    entry was seen to vanish (``None`` when there was no residual).
    """

    rows: list[list[PadicElement]]
    pivots: list[int]
    ncols: int
    zero_precision: int | None
    ctx: PadicContext | None = None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> list[list[PadicElement]]:
        """Saturated basis of the kernel, one vector per free column."""
        ctx = self.ctx
        out = []
        for f in self.free_columns():
            v = [ctx.zero() for _ in range(self.ncols)]
            v[f] = ctx.one()
            for row, pc in zip(self.rows, self.pivots):
                v[pc] = -row[f]
            out.append(v)
        return out

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]


def echelon(rows: Sequence[Sequence[PadicElement]], ncols: int | None = None,
            min_precision: int = 0, pivot_cols: Sequence[int] | None = None) -> Echelon:
    """Row reduce a matrix over W(k)/p^m.

    Raises PrecisionExhausted if some entry declared zero was known to fewer
    than ``min_precision`` digits, i.e. the rank is ambiguous.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    nrows = len(m)
    allowed = range(ncols) if pivot_cols is None else list(pivot_cols)
    pivots: list[int] = []
    used: set[int] = set()
    r = 0
    while r < nrows:
        best = None
        for i in range(r, nrows):
            for j in allowed:
                if j in used:
                    continue
                v = m[i][j].valuation()
                if v != INF and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        e, i, j = best
        m[r], m[i] = m[i], m[r]
        piv = m[r][j]
        e = int(e)
        uinv = invert(piv.shift(-e))
        new_row = []
        for c, x in enumerate(m[r]):
            if c == j:
                new_row.append(piv.ctx.one().with_precision(piv.prec - e))
            elif x.valuation() >= e:
                new_row.append(x.shift(-e) * uinv)
            else:
                # only possible in a column excluded from pivoting
                raise PrecisionExhausted(f"column {c} is not divisible by the pivot")
        m[r] = new_row
        for i2 in range(nrows):
            if i2 == r:
                continue
            f = m[i2][j]
            if f.is_zero() and f.prec >= m[r][j].prec:
                m[i2][j] = f.ctx.zero().with_precision(f.prec)
                continue
            m[i2] = [a - f * b for a, b in zip(m[i2], m[r])]
            m[i2][j] = f.ctx.zero().with_precision(m[i2][j].prec)
        used.add(j)
        pivots.append(j)
        r += 1
    zero_prec = None
    for i in range(r, nrows):
        for j in allowed:
            x = m[i][j]
            zero_prec = x.prec if zero_prec is None else min(zero_prec, x.prec)
    if zero_prec is not None and zero_prec < min_precision:
        raise PrecisionExhausted(
            f"rank undetermined: residual entries known only to {zero_prec} digits (< {min_precision})")
    ctx = next((x.ctx for row in m for x in row), None)
    return Echelon(m[:r], pivots, ncols, zero_prec, ctx)


def kernel(rows: Sequence[Sequence[PadicElement]], ncols: int, min_precision: int = 0) -> list[list[PadicElement]]:
    return echelon(rows, ncols, min_precision).kernel()


def same_span(u: Sequence[Sequence[PadicElement]], w: Sequence[Sequence[PadicElement]],
              min_precision: int = 0) -> bool:
    """Equality of the K_v-spans of two families of vectors."""
    ncols = len((list(u) + list(w))[0])
    ru = echelon(u, ncols, min_precision).rank
    rw = echelon(w, ncols, min_precision).rank
    rb = echelon(list(u) + list(w), ncols, min_precision).rank
    return ru == rw == rb


def mat_mul(a: Sequence[Sequence[PadicElement]], b: Sequence[Sequence[PadicElement]]) -> list[list[PadicElement]]:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_frobenius(a: Sequence[Sequence[PadicElement]], times: int = 1) -> list[list[PadicElement]]:
    out = [list(r) for r in a]
    for _ in range(times % (out[0][0].ctx.n if out and out[0] else 1)):
        out = [[x.frobenius() for x in r] for r in out]
    return out


def embed_matrix(ctx: PadicContext, a: Iterable[Iterable]) -> list[list[PadicElement]]:
    return [[ctx.coerce(x) for x in row] for row in a]
