"""Weights of Frobenius eigenvalues and the decomposition of a linear
F-isocrystal into pure pieces.

Polynomials are lists of rationals, constant term first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy as sp

from . import linalg
from .errors import CharpolyMismatch, MixedNonIntegralWeight, NotMonicNormalizable, PrecisionExhausted, ReconstructionFailed
from .padic import INF, PadicContext, PadicElement, echelon, mat_mul, vp
from .semilinear import SemilinearOperator

DEFAULT_GUARD = 4
MODULUS_RTOL = 1e-9

Poly = list  # list[Fraction], constant term first


# -- polynomial helpers ------------------------------------------------------

def _trim(f: Sequence) -> list[Fraction]:
    f = [Fraction(c) for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def monic(f: Sequence) -> list[Fraction]:
    f = _trim(f)
    if len(f) < 2:
        raise NotMonicNormalizable("polynomial must have positive degree")
    lead = f[-1]
    return [c / lead for c in f]


def poly_mul(f: Sequence, g: Sequence) -> list[Fraction]:
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += Fraction(a) * Fraction(b)
    return out


def poly_pow(f: Sequence, e: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(e):
        out = poly_mul(out, f)
    return out


def factor_rational(f: Sequence) -> list[tuple[list[Fraction], int]]:
    """Monic irreducible factors of f over Q with multiplicities (via sympy)."""
    f = monic(f)
    x = sp.Symbol("x")
    expr = sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(f)], x, domain="QQ")
    _, facs = expr.factor_list()
    out = []
    for g, e in facs:
        coeffs = [Fraction(int(sp.numer(c)), int(sp.denom(c))) for c in reversed(g.all_coeffs())]
        out.append((monic(coeffs), e))
    out.sort(key=lambda t: (len(t[0]), [(c.numerator, c.denominator) for c in t[0]]))
    return out


def poly_str(f: Sequence) -> str:
    terms = []
    for k in range(len(f) - 1, -1, -1):
        c = Fraction(f[k])
        if c == 0:
            continue
        mono = "" if k == 0 else "x" if k == 1 else f"x^{k}"
        if mono and abs(c) == 1:
            coef = ""
        else:
            coef = str(abs(c)) + ("*" if mono else "")
        sign = "-" if c < 0 else "+"
        terms.append((sign, coef + mono))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        s += f" {sign} {t}"
    return s


# -- weights -----------------------------------------------------------------

@dataclass(frozen=True)
class PurityReport:
    factor: tuple  # monic rational coefficients, constant first
    weight: int | None  # None: not pure of integral weight
    numeric_moduli: tuple

    @property
    def pure(self) -> bool:
        return self.weight is not None


def weil_weight(f: Sequence, p: int, n: int = 1) -> PurityReport:
    """The integer i such that every root of f has absolute value p^(n i / 2).

    The exact condition |f(0)| = p^(n i deg / 2) fixes the candidate i; the
    numerically computed root moduli must then agree to relative 1e-9.
    """
    f = monic(f)
    deg = len(f) - 1
    roots = np.roots([float(c) for c in reversed(f)])
    moduli = tuple(sorted(float(abs(r)) for r in roots))
    c0 = abs(f[0])
    if c0 == 0:
        return PurityReport(tuple(f), None, moduli)
    t = vp(c0.numerator, p) - vp(c0.denominator, p)
    if c0 != Fraction(p) ** int(t):
        return PurityReport(tuple(f), None, moduli)
    t = int(t)
    if (2 * t) % (n * deg):
        return PurityReport(tuple(f), None, moduli)
    i = 2 * t // (n * deg)
    target = float(p) ** (n * i / 2)
    if all(abs(mod - target) <= MODULUS_RTOL * target for mod in moduli):
        return PurityReport(tuple(f), i, moduli)
    return PurityReport(tuple(f), None, moduli)


# -- p-adic operator helpers -------------------------------------------------

def padic_charpoly(F: SemilinearOperator) -> list[PadicElement]:
    """Characteristic polynomial of the integral matrix A of F = p^k A."""
    ctx = F.ctx
    return linalg.berkowitz(F.integral, ctx.one(), ctx.zero())


def check_charpoly(F: SemilinearOperator, charpoly: Sequence, guard: int = DEFAULT_GUARD) -> None:
    """Raise CharpolyMismatch unless charpoly agrees with F mod p^(m - guard).

    With F = p^k A, the coefficient of x^j satisfies c_j(A) = c_j(F) p^(-k(dim-j)).
    """
    ctx = F.ctx
    f = _trim(charpoly)
    dim = F.dim
    if len(f) != dim + 1 or f[-1] != 1:
        raise CharpolyMismatch(f"expected a monic polynomial of degree {dim}")
    cA = padic_charpoly(F)
    target = ctx.m - guard
    for j in range(dim + 1):
        expected = f[j] * Fraction(ctx.p) ** (-F.shift * (dim - j))
        if expected.denominator % ctx.p == 0:
            raise CharpolyMismatch(f"coefficient of x^{j} is not compatible with an operator of this scale")
        diff = cA[j] - ctx.from_rational(expected)
        t = min(target, diff.prec)
        if diff.with_precision(t).valuation() != INF:
            raise CharpolyMismatch(
                f"coefficient of x^{j} disagrees with the operator at p-adic digit {int(diff.valuation())}")


def recover_charpoly(F: SemilinearOperator, bound: int) -> list[Fraction]:
    """Rational reconstruction of the charpoly from p-adic data (fallback)."""
    ctx = F.ctx
    cA = padic_charpoly(F)
    dim = F.dim
    out = []
    for j, c in enumerate(cA):
        if c.c1 != 0:
            raise ReconstructionFailed(f"coefficient of x^{j} is not in Q_p")
        q = c.to_rational(bound)
        out.append(q * Fraction(ctx.p) ** (F.shift * (dim - j)))
    return out


def poly_at_operator(F: SemilinearOperator, g: Sequence) -> list[list[PadicElement]]:
    """An integral matrix with the same kernel as g(F) (F linear): g(F) / p^s."""
    if F.twist_exp != 0:
        raise ValueError("polynomials are evaluated on linear operators only")
    ctx = F.ctx
    g = _trim(g)
    coeff_vals = []
    for j, c in enumerate(g):
        if c == 0:
            coeff_vals.append(INF)
        else:
            coeff_vals.append(vp(c.numerator, ctx.p) - vp(c.denominator, ctx.p) + F.shift * j)
    s = int(min(coeff_vals))
    dim = F.dim
    power = [[ctx.one() if i == j else ctx.zero() for j in range(dim)] for i in range(dim)]
    acc = [[ctx.zero() for _ in range(dim)] for _ in range(dim)]
    for j, c in enumerate(g):
        if j:
            power = mat_mul(power, F.integral)
        if c == 0:
            continue
        scale = ctx.fraction(c).scaled(F.shift * j - s).as_element()
        acc = [[a + scale * b for a, b in zip(ra, rb)] for ra, rb in zip(acc, power)]
    return acc


def restrict(F: SemilinearOperator, basis: Sequence[Sequence[PadicElement]], free_cols: Sequence[int]) -> SemilinearOperator:
    """The operator induced on span(basis), in coordinates read off free_cols.

    Each basis vector is 1 at its own free column and 0 at the others, so
    the coordinates of a vector in the span are its free-column entries.
    """
    k = len(basis)
    images = [[sum((F.integral[i][c] * b[c] for c in range(F.dim)), F.ctx.zero()) for i in range(F.dim)] for b in basis]
    M = [[images[j][free_cols[i]] for j in range(k)] for i in range(k)]
    return SemilinearOperator(F.ctx, M, F.shift, F.twist_exp)


# -- decomposition -----------------------------------------------------------

@dataclass
class Summand:
    weight: int
    basis: list  # list of vectors over W(k)
    free_columns: list
    charpoly: list  # monic rational, product of the weight's factors

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class WeightDecomposition:
    summands: list
    dim: int
    reports: list = field(default_factory=list)

    @property
    def weights(self) -> list[int]:
        return [s.weight for s in self.summands]

    @property
    def filtration(self) -> list[tuple[int, list]]:
        """W_i = sum of H_j for j <= i, listed for each weight present."""
        out, acc = [], []
        for s in self.summands:
            acc = acc + s.basis
            out.append((s.weight, list(acc)))
        return out


def weight_factors(charpoly: Sequence, p: int, n: int) -> tuple[dict, list[PurityReport]]:
    """Group the factors of charpoly by weight; raise on non-pure factors."""
    groups: dict[int, list[Fraction]] = {}
    reports = []
    for g, e in factor_rational(charpoly):
        rep = weil_weight(g, p, n)
        reports.append(rep)
        if rep.weight is None:
            raise MixedNonIntegralWeight(f"factor {poly_str(g)} is not pure of integral weight")
        groups[rep.weight] = poly_mul(groups.get(rep.weight, [Fraction(1)]), poly_pow(g, e))
    return dict(sorted(groups.items())), reports


def decompose(F_linear: SemilinearOperator, charpoly: Sequence, guard: int = DEFAULT_GUARD,
              n: int | None = None) -> WeightDecomposition:
    """Split F_linear into generalised eigenspaces grouped by weight.

    ``n`` is the residue degree used for weights (defaults to the context's).
    """
    ctx = F_linear.ctx
    n = ctx.n if n is None else n
    dim = F_linear.dim
    if dim == 0:
        return WeightDecomposition([], 0)
    check_charpoly(F_linear, charpoly, guard)
    groups, reports = weight_factors(charpoly, ctx.p, n)
    summands = []
    for w, g in groups.items():
        # g carries the multiplicities, so ker g(F) is the whole generalised eigenspace
        G = poly_at_operator(F_linear, g)
        ech = echelon(G, dim)
        kern = ech.kernel()
        expected = len(g) - 1
        if len(kern) != expected:
            raise PrecisionExhausted(
                f"weight {w}: kernel has dimension {len(kern)} but the charpoly predicts {expected}")
        summands.append(Summand(w, kern, ech.free_columns(), g))
    return WeightDecomposition(summands, dim, reports)


def is_pure(F_linear: SemilinearOperator, charpoly: Sequence, i: int, guard: int = DEFAULT_GUARD,
            n: int | None = None) -> bool:
    ctx = F_linear.ctx
    n = ctx.n if n is None else n
    if F_linear.dim == 0:
        return True
    check_charpoly(F_linear, charpoly, guard)
    groups, _ = weight_factors(charpoly, ctx.p, n)
    return set(groups) == {i}


def intertwiners(F_M: SemilinearOperator, F_N: SemilinearOperator, guard: int = DEFAULT_GUARD) -> list:
    """Basis (over K_v) of linear X with X F_M = F_N X, for linear operators.

    Unknowns are the entries of X in row-major order; the returned vectors
    are reshaped into dim_N x dim_M matrices.
    """
    if F_M.twist_exp or F_N.twist_exp:
        raise ValueError("intertwiners expects linear operators")
    ctx = F_M.ctx
    dm, dn = F_M.dim, F_N.dim
    k0 = min(F_M.shift, F_N.shift)
    am = [[x.shift(F_M.shift - k0) for x in r] for r in F_M.integral]
    an = [[x.shift(F_N.shift - k0) for x in r] for r in F_N.integral]
    rows = []
    # (X A_M - A_N X)[i][j] = sum_t X[i][t] A_M[t][j] - sum_t A_N[i][t] X[t][j]
    for i in range(dn):
        for j in range(dm):
            row = [ctx.zero() for _ in range(dn * dm)]
            for t in range(dm):
                row[i * dm + t] = row[i * dm + t] + am[t][j]
            for t in range(dn):
                row[t * dm + j] = row[t * dm + j] - an[i][t]
            rows.append(row)
    if not rows:
        return []
    kern = echelon(rows, dn * dm, min_precision=ctx.m // 2).kernel()
    return [[v[i * dm:(i + 1) * dm] for i in range(dn)] for v in kern]


def rational_generalized_eigenspaces(M: Sequence[Sequence], p: int, n: int) -> dict[int, list]:
    """Exact oracle over Q: weight -> basis of the generalised eigenspace."""
    cp = linalg.charpoly(M)
    groups, _ = weight_factors(cp, p, n)
    dim = len(M)
    out = {}
    for w, g in groups.items():
        acc = [[Fraction(0)] * dim for _ in range(dim)]
        power = linalg.identity(dim)
        for j, c in enumerate(g):
            if j:
                power = linalg.matmul(power, M)
            acc = [[a + c * b for a, b in zip(ra, rb)] for ra, rb in zip(acc, power)]
        out[w] = linalg.nullspace(acc, dim)
    return out
