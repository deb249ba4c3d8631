"""σ^e-semilinear endomorphisms of K_v^dim.

An operator is stored as p^shift * A with A an integral matrix over W(k)
and a twist exponent e, meaning F(x) = p^shift * A * σ^e(x).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch
from .padic import INF, PadicContext, PadicElement, PadicFraction, mat_frobenius, mat_mul, vp

Matrix = list  # list[list[PadicElement]]


class SemilinearOperator:
    __slots__ = ("ctx", "integral", "shift", "twist_exp")

    def __init__(self, ctx: PadicContext, integral: Sequence[Sequence], shift: int = 0, twist_exp: int = 1):
        rows = [[ctx.coerce(x) for x in r] for r in integral]
        if any(len(r) != len(rows) for r in rows):
            raise DimensionMismatch("operator matrix must be square")
        self.ctx = ctx
        self.integral = rows
        self.shift = shift
        self.twist_exp = twist_exp % ctx.n

    @classmethod
    def identity(cls, ctx: PadicContext, dim: int, twist_exp: int = 1) -> "SemilinearOperator":
        return cls(ctx, [[int(i == j) for j in range(dim)] for i in range(dim)], 0, twist_exp)

    @classmethod
    def from_rational(cls, ctx: PadicContext, M: Sequence[Sequence], twist_exp: int = 0) -> "SemilinearOperator":
        """p^k * A with A integral and k the least p-adic valuation of an entry."""
        fr = [[Fraction(x) for x in r] for r in M]
        vals = [vp(x.numerator, ctx.p) - vp(x.denominator, ctx.p) for r in fr for x in r if x != 0]
        k = int(min(vals)) if vals else 0
        scale = Fraction(ctx.p) ** (-k)
        return cls(ctx, [[ctx.from_rational(x * scale) for x in r] for r in fr], k, twist_exp)

    @property
    def dim(self) -> int:
        return len(self.integral)

    @property
    def matrix(self) -> list[list[PadicFraction]]:
        return [[PadicFraction(x, self.shift) for x in r] for r in self.integral]

    def min_valuation(self) -> float:
        """Smallest valuation of an entry of the actual matrix p^shift * A."""
        v = min((x.valuation() for r in self.integral for x in r), default=INF)
        return v + self.shift

    def block(self, rows: range, cols: range) -> "SemilinearOperator":
        return SemilinearOperator(self.ctx, [[self.integral[i][j] for j in cols] for i in rows],
                                  self.shift, self.twist_exp)

    def __eq__(self, other):
        if not isinstance(other, SemilinearOperator):
            return NotImplemented
        if (self.ctx, self.dim, self.twist_exp) != (other.ctx, other.dim, other.twist_exp):
            return False
        k = min(self.shift, other.shift)
        return all(a.shift(self.shift - k) == b.shift(other.shift - k)
                   for ra, rb in zip(self.integral, other.integral) for a, b in zip(ra, rb))

    __hash__ = None

    def __repr__(self):
        return f"SemilinearOperator(dim={self.dim}, shift={self.shift}, twist={self.twist_exp}, p={self.ctx.p}, n={self.ctx.n})"


def compose(F: SemilinearOperator, G: SemilinearOperator) -> SemilinearOperator:
    """F∘G: matrix A_F σ^{e_F}(A_G), twist e_F + e_G."""
    if F.ctx != G.ctx or F.dim != G.dim:
        raise DimensionMismatch("operators live on different spaces")
    if F.dim == 0:
        return SemilinearOperator(F.ctx, [], F.shift + G.shift, F.twist_exp + G.twist_exp)
    prod = mat_mul(F.integral, mat_frobenius(G.integral, F.twist_exp))
    return SemilinearOperator(F.ctx, prod, F.shift + G.shift, F.twist_exp + G.twist_exp)


def linearize(F: SemilinearOperator, v=None) -> SemilinearOperator:
    """F^n, linear because σ has order n."""
    n = F.ctx.n
    if v is not None and v.residue_degree != n:
        raise ValueError("place does not match the operator's context")
    out = F
    for _ in range(n - 1):
        out = compose(F, out)
    return out


def twist_op(F: SemilinearOperator, k: int) -> SemilinearOperator:
    """F ↦ p^{-k} F."""
    return SemilinearOperator(F.ctx, F.integral, F.shift - k, F.twist_exp)


@dataclass(frozen=True)
class CommuteResult:
    ok: bool
    entry: tuple[int, int] | None = None
    difference: PadicFraction | None = None
    valuation_gap: float | None = None
    checked_digits: int | None = None

    def __bool__(self):
        return self.ok


def commutes(X: Sequence[Sequence], F_M: SemilinearOperator, F_N: SemilinearOperator,
             tolerance_digits: int = 4) -> CommuteResult:
    """Test X·A_M = A_N·σ(X) for X: V_M -> V_N (dim_N x dim_M, integral entries).

    Both sides are rescaled by the smaller of the two shifts so they are
    integral, then compared to m - tolerance_digits digits (or fewer if the
    entries are known to fewer).  On failure the first offending entry, the
    difference (as a K_v element) and the number of missing digits are
    reported.
    """
    ctx = F_M.ctx
    if F_N.ctx != ctx or F_M.twist_exp != F_N.twist_exp:
        raise DimensionMismatch("operators are not over the same context/twist")
    X = [[ctx.coerce(x) for x in r] for r in X]
    if len(X) != F_N.dim or any(len(r) != F_M.dim for r in X):
        raise DimensionMismatch(f"X must be {F_N.dim} x {F_M.dim}")
    if F_M.dim == 0 or F_N.dim == 0:
        return CommuteResult(True, checked_digits=ctx.m - tolerance_digits)
    k0 = min(F_M.shift, F_N.shift)
    lhs = mat_mul(X, F_M.integral)
    rhs = mat_mul(F_N.integral, mat_frobenius(X, F_M.twist_exp))
    target = ctx.m - tolerance_digits
    checked = target
    for i in range(F_N.dim):
        for j in range(F_M.dim):
            diff = lhs[i][j].shift(F_M.shift - k0) - rhs[i][j].shift(F_N.shift - k0)
            t = min(target, diff.prec)
            checked = min(checked, t)
            if diff.with_precision(t).valuation() != INF:
                return CommuteResult(False, (i, j), PadicFraction(diff, k0), t - diff.valuation(), t)
    return CommuteResult(True, checked_digits=checked)
