"""p-adic exponential and logarithm, and the torsion-killing logarithm on units.

Series are summed in a wider context (``m + guard`` digits) so that the
digit losses caused by dividing by k and k! stay outside the reported
digits.  Because p is odd, log and exp are isometries between 1 + pW and
pW, so the output is known to exactly as many digits as the input.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAUnit, NotInDomain, NotPrincipalUnit
from .padic import INF, PadicContext, PadicElement, invert


def log_loss(p: int, m: int) -> int:
    """ceil(log_p m): digits reported as lost by the log series."""
    e, q = 0, 1
    while q < m:
        q *= p
        e += 1
    return e


@dataclass(frozen=True)
class LogValue:
    """A logarithm in pW together with the number of digits vouched for."""

    value: PadicElement
    guaranteed_precision: int

    @property
    def element(self) -> PadicElement:
        """The value truncated to its guaranteed precision."""
        return self.value.with_precision(self.guaranteed_precision)

    def __add__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.value + other.value, min(self.guaranteed_precision, other.guaranteed_precision))

    def __rmul__(self, k: int) -> "LogValue":
        return LogValue(self.value * k, self.guaranteed_precision)


def _guard(ctx: PadicContext) -> int:
    return 2 * log_loss(ctx.p, 4 * ctx.m) + 4


def _series_setup(x: PadicElement):
    ctx = x.ctx
    M = ctx.m + _guard(ctx)
    P = ctx.p ** M
    d = ctx.d if ctx.n == 2 else 0
    return ctx, M, P, d


def _mul(a, b, d, P):
    return ((a[0] * b[0] + d * a[1] * b[1]) % P, (a[0] * b[1] + a[1] * b[0]) % P)


def _div_int(a, k, p, P):
    """Divide a pair by the integer k; a must be divisible by p^v_p(k)."""
    pe = 1
    while k % p == 0:
        k //= p
        pe *= p
    inv = pow(k, -1, P)
    return (a[0] // pe * inv % P, a[1] // pe * inv % P)


def plog(x: PadicElement) -> LogValue:
    """log(x) = sum_{k>=1} (-1)^(k-1) (x-1)^k / k for x in 1 + pW."""
    ctx = x.ctx
    y = x - 1
    vy = y.valuation()
    if vy < 1:
        raise NotPrincipalUnit(f"{x!r} is not congruent to 1 mod {ctx.p}")
    prec = x.prec
    gp = min(prec, ctx.m - log_loss(ctx.p, ctx.m))
    if vy == INF:
        return LogValue(ctx.zero().with_precision(prec), gp)
    _, M, P, d = _series_setup(x)
    p = ctx.p
    yy = (y.c0, y.c1)
    power = (1, 0)
    t0 = t1 = 0
    k = 1
    # term k has valuation >= k*vy - v_p(k); stop once that reaches M
    while k * vy - log_loss(p, k + 1) < M:
        power = _mul(power, yy, d, P)
        term = _div_int(power, k, p, P)
        if k % 2:
            t0, t1 = t0 + term[0], t1 + term[1]
        else:
            t0, t1 = t0 - term[0], t1 - term[1]
        k += 1
    # each term lost at most v_p(k) <= guard digits of the M computed
    return LogValue(PadicElement(ctx, t0, t1, prec), gp)


def pexp(x: PadicElement) -> PadicElement:
    """exp(x) = sum x^k / k! for valuation(x) >= 1."""
    ctx = x.ctx
    vx = x.valuation()
    if vx < 1:
        raise NotInDomain(f"exp does not converge at {x!r}")
    prec = x.prec
    if vx == INF:
        return ctx.one().with_precision(prec)
    _, M, P, d = _series_setup(x)
    p = ctx.p
    xx = (x.c0, x.c1)
    term = (1, 0)
    t0, t1 = 1, 0
    k = 1
    # v(x^k / k!) >= k*(vx - 1/(p-1))
    while k * (vx * (p - 1) - 1) < M * (p - 1) + p:
        term = _div_int(_mul(term, xx, d, P), k, p, P)
        t0, t1 = t0 + term[0], t1 + term[1]
        k += 1
    # t_k = t_(k-1) * x / k: each step gains a digit from x before losing v_p(k),
    # so the running loss stays below log_p(k) + 1 <= guard
    return PadicElement(ctx, t0, t1, prec)


def log_torus_unit(a: PadicElement, v=None) -> LogValue:
    """λ(a) = log(a^(p^n - 1)) / (p^n - 1) for a unit a of W(k_v)."""
    ctx = a.ctx
    if v is not None and (v.p != ctx.p or v.residue_degree != ctx.n):
        raise ValueError("place does not match the element's context")
    if a.valuation() != 0:
        raise NotAUnit(f"{a!r} is not a unit")
    q1 = ctx.p**ctx.n - 1
    lv = plog(a**q1)
    return LogValue(lv.value * invert(ctx.from_rational(q1)), lv.guaranteed_precision)


def log_Ga(x):
    """The logarithm of G_a is the identity on the additive coordinate."""
    return x
