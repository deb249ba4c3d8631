"""Split Kummer 1-motives [u: Z^r -> G_m^s] and their realizations.

The motive is the s x r array a[i][j] of positive rationals with
u(e_j) = (a[0][j], ..., a[s-1][j]).  Coordinates of every realization list
the s torus directions first, then the r lattice directions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import factorint, primerange

from . import linalg
from .errors import IncompatibleHom, NonPositiveEntry, NotAGoodPlace
from .isocrystal import DEFAULT_GUARD, poly_pow
from .logexp import LogValue, log_torus_unit
from .numfield import Place, QuadField, QuadraticFieldElement, classify_place, embed, place_context
from .ogcat import HomSolution, OgObject, hom_space, matrix_to_vector
from .padic import PadicContext, PadicElement, echelon
from .semilinear import SemilinearOperator

DEFAULT_PRECISION = 40


@dataclass(frozen=True)
class KummerMotive:
    r: int
    s: int
    u: tuple  # s rows of r positive Fractions
    field: QuadField = QuadField(1)

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.u)
        object.__setattr__(self, "u", rows)
        if self.r < 0 or self.s < 0:
            raise ValueError("ranks must be nonnegative")
        if len(rows) != self.s or any(len(row) != self.r for row in rows):
            raise ValueError(f"u must be an {self.s} x {self.r} array")
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x <= 0:
                    raise NonPositiveEntry(f"u[{i + 1}][{j + 1}] = {x} is not positive")

    @classmethod
    def kummer(cls, a, field: QuadField = QuadField(1)) -> "KummerMotive":
        """[Z -> G_m], 1 |-> a."""
        return cls(1, 1, ((Fraction(a),),), field)

    @property
    def dim(self) -> int:
        return self.r + self.s

    def entries(self) -> list[Fraction]:
        return [x for row in self.u for x in row]

    def bad_primes(self) -> set[int]:
        out = {2} | set(factorint(abs(self.field.d)))
        for x in self.entries():
            out |= set(factorint(x.numerator)) | set(factorint(x.denominator))
        return out

    def __str__(self):
        if self.r == 0 or self.s == 0:
            return f"[Z^{self.r} -> G_m^{self.s}] over {self.field}"
        cols = ["(" + ", ".join(str(self.u[i][j]) for i in range(self.s)) + ")" for j in range(self.r)]
        return f"[Z^{self.r} -> G_m^{self.s}: {'; '.join(cols)}] over {self.field}"


# -- places -------------------------------------------------------------------

def good_places(M: KummerMotive, field: QuadField | None = None, bound: int = 50) -> list[Place]:
    """Odd primes up to bound where the model of M has good reduction."""
    field = M.field if field is None else field
    bad = M.bad_primes() | set(factorint(abs(field.d)))
    return [classify_place(field, p) for p in primerange(3, bound + 1) if p not in bad]


def choose_places(candidates: Sequence[Place], field: QuadField, count: int = 3) -> list[Place]:
    """The `count` smallest places, with at least one inert place when K != Q."""
    cands = sorted(candidates)
    chosen = cands[:count]
    if field.d != 1 and chosen and not any(v.kind == "inert" for v in chosen):
        inert = next((v for v in cands[count:] if v.kind == "inert"), None)
        if inert is not None:
            chosen = chosen[:-1] + [inert]
    return chosen


def common_places(motives: Sequence[KummerMotive], bound: int = 50, count: int = 3) -> list[Place]:
    field = motives[0].field
    sets = [set(good_places(M, field, bound)) for M in motives]
    return choose_places(set.intersection(*sets), field, count)


def _require_good(M: KummerMotive, v: Place):
    if v.p in M.bad_primes():
        raise NotAGoodPlace(f"{v.p} is not a good place for {M}")
    expected = classify_place(M.field, v.p)
    if expected != v:
        raise NotAGoodPlace(f"{v} is not a place of {M.field} (expected {expected})")


# -- realizations ----------------------------------------------------------------

@dataclass(frozen=True)
class DeRhamLayout:
    dim: int
    weight_steps: tuple
    torus: range
    lattice: range


def t_dR(M: KummerMotive) -> DeRhamLayout:
    """Lie of the universal extension, K^s + K^r with W_-2 = W_-1 = torus part."""
    return DeRhamLayout(M.dim, ((-2, M.s), (-1, M.s), (0, M.dim)), range(0, M.s), range(M.s, M.dim))


@dataclass
class DeltaData:
    place: Place
    Lambda: list  # s x r LogValue

    def matrix(self) -> list[list[PadicElement]]:
        """Λ truncated to the digits each entry guarantees."""
        return [[lv.element for lv in row] for row in self.Lambda]


def delta_section(M: KummerMotive, v: Place, m: int = DEFAULT_PRECISION) -> DeltaData:
    """Λ[i][j] = λ_v(a[i][j]); the section is e_j -> (Λ[.][j], e_j)."""
    _require_good(M, v)
    ctx = place_context(M.field, v, m)
    lam = [[log_torus_unit(embed(QuadraticFieldElement(x, 0, M.field), v, ctx), v) for x in row] for row in M.u]
    return DeltaData(v, lam)


def t_Og_operator(M: KummerMotive, delta: DeltaData, m: int = DEFAULT_PRECISION) -> SemilinearOperator:
    """F_v = p^-1 [[I, pΛ - σΛ], [0, p I]] σ."""
    v = delta.place
    ctx = place_context(M.field, v, m)
    s, r = M.s, M.r
    lam = delta.matrix()
    A = [[ctx.zero() for _ in range(M.dim)] for _ in range(M.dim)]
    for i in range(s):
        A[i][i] = ctx.one()
        for j in range(r):
            A[i][s + j] = lam[i][j] * v.p - lam[i][j].frobenius()
    for j in range(r):
        A[s + j][s + j] = ctx.element(v.p)
    return SemilinearOperator(ctx, A, -1, 1)


def t_Og(M: KummerMotive, places: Sequence[Place] | None = None, m: int = DEFAULT_PRECISION) -> OgObject:
    places = list(places) if places is not None else choose_places(good_places(M), M.field)
    frob, cps = {}, {}
    for v in places:
        frob[v] = t_Og_operator(M, delta_section(M, v, m), m)
        q = Fraction(v.p) ** v.residue_degree
        cps[(v, -2)] = poly_pow([-1 / q, 1], M.s)
        cps[(v, 0)] = poly_pow([-1, 1], M.r)
    layout = t_dR(M)
    return OgObject(M.field, M.dim, list(layout.weight_steps), frob, cps)


# -- morphisms --------------------------------------------------------------------

@dataclass
class MotiveHom:
    source: KummerMotive
    target: KummerMotive
    E: list  # s_N x s_M
    D: list  # r_N x r_M

    def __post_init__(self):
        self.E = [[Fraction(x) for x in row] for row in self.E]
        self.D = [[Fraction(x) for x in row] for row in self.D]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.E + self.D for x in row)

    def compatible(self) -> bool:
        """prod_k a[k][j]^E[i][k] == prod_l b[i][l]^D[l][j] after clearing denominators."""
        M, N = self.source, self.target
        den = 1
        for x in (x for row in self.E + self.D for x in row):
            den = den * x.denominator // _gcd(den, x.denominator)
        for i in range(N.s):
            for j in range(M.r):
                lhs = Fraction(1)
                for k in range(M.s):
                    lhs *= M.u[k][j] ** int(self.E[i][k] * den)
                rhs = Fraction(1)
                for l in range(N.r):
                    rhs *= N.u[i][l] ** int(self.D[l][j] * den)
                if lhs != rhs:
                    return False
        return True

    def compose(self, other: "MotiveHom") -> "MotiveHom":
        """self ∘ other."""
        return MotiveHom(other.source, self.target, linalg.matmul(self.E, other.E) if self.E and other.E else
                         [[Fraction(0)] * other.source.s for _ in range(self.target.s)],
                         linalg.matmul(self.D, other.D) if self.D and other.D else
                         [[Fraction(0)] * other.source.r for _ in range(self.target.r)])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def realize_hom(phi: MotiveHom) -> list[list[QuadraticFieldElement]]:
    """diag(E, D) as a (s_N + r_N) x (s_M + r_M) matrix over K."""
    if not phi.compatible():
        raise IncompatibleHom("the multiplicative identity fails")
    M, N = phi.source, phi.target
    K = M.field
    out = [[QuadraticFieldElement(0, 0, K) for _ in range(M.dim)] for _ in range(N.dim)]
    for i in range(N.s):
        for k in range(M.s):
            out[i][k] = QuadraticFieldElement(phi.E[i][k], 0, K)
    for l in range(N.r):
        for j in range(M.r):
            out[N.s + l][M.s + j] = QuadraticFieldElement(phi.D[l][j], 0, K)
    return out


def _exponents(x: Fraction, primes: Sequence[int]) -> list[int]:
    num, den = factorint(x.numerator), factorint(x.denominator)
    return [num.get(q, 0) - den.get(q, 0) for q in primes]


def motive_hom_exact(M: KummerMotive, N: KummerMotive) -> list[MotiveHom]:
    """Basis of Hom(M, N) ⊗ Q from exponent vectors of the entries.

    Unknowns are E (s_N x s_M) then D (r_N x r_M), row-major; for each
    (i, j) and each prime q: sum_k E[i][k] ν_q(a[k][j]) = sum_l ν_q(b[i][l]) D[l][j].
    """
    primes = sorted({q for x in M.entries() + N.entries() for q in factorint(x.numerator) | factorint(x.denominator)})
    nE, nD = N.s * M.s, N.r * M.r
    nvars = nE + nD
    nu_a = [[_exponents(x, primes) for x in row] for row in M.u]
    nu_b = [[_exponents(x, primes) for x in row] for row in N.u]
    rows = []
    for i in range(N.s):
        for j in range(M.r):
            for t in range(len(primes)):
                row = [Fraction(0)] * nvars
                for k in range(M.s):
                    row[i * M.s + k] += nu_a[k][j][t]
                for l in range(N.r):
                    row[nE + l * M.r + j] -= nu_b[i][l][t]
                rows.append(row)
    basis = linalg.nullspace(rows, nvars) if rows else linalg.identity(nvars)
    out = []
    for vec in basis:
        E = [[vec[i * M.s + k] for k in range(M.s)] for i in range(N.s)]
        D = [[vec[nE + l * M.r + j] for j in range(M.r)] for l in range(N.r)]
        out.append(MotiveHom(M, N, E, D))
    return out


# -- the fullness experiment ----------------------------------------------------------

@dataclass
class FullnessReport:
    exact_basis: list  # MotiveHom
    realized: list  # matrices over K
    analytic: HomSolution
    faithful: bool
    full: bool
    places: list

    @property
    def exact_dimension(self) -> int:
        return len(self.exact_basis)

    @property
    def status(self) -> str:
        return "OK" if self.faithful and self.full else "FULLNESS_VIOLATION"


def check_fullness(M: KummerMotive, N: KummerMotive, places: Sequence[Place] | None = None,
                   m: int = DEFAULT_PRECISION, bound: int = 10**6, guard: int = DEFAULT_GUARD) -> FullnessReport:
    if places is None:
        places = common_places([M, N])
    exact = motive_hom_exact(M, N)
    realized = [realize_hom(phi) for phi in exact]
    sol = hom_space(t_Og(M, places, m), t_Og(N, places, m), bound=bound, guard=guard)
    vecs = [matrix_to_vector(X, M.field) for X in realized]
    faithful = all(any(x != 0 for x in v) for v in vecs) and linalg.rank(vecs) == len(vecs) if vecs else True
    full = sol.analytic_dimension == len(exact) and sol.same_space(realized)
    return FullnessReport(exact, realized, sol, faithful, full, list(places))


# -- uniqueness of the Frobenius-equivariant section ------------------------------------

@dataclass
class SectionReport:
    place: Place
    kernel_dimension: int
    solution: list  # s x r over W(k)
    matches_delta: bool
    precision: int


def section_uniqueness(M: KummerMotive, v: Place, m: int = DEFAULT_PRECISION) -> SectionReport:
    """Solve F_v ∘ S = S ∘ σ for S = [[T], [I_r]].

    With F_v from t_Og the top block reads p T - σ(T) = p Λ - σ(Λ); the
    unknown coordinates of T over Z_p form a square system whose kernel
    dimension is reported and whose solution is compared with Λ.
    """
    delta = delta_section(M, v, m)
    ctx = place_context(M.field, v, m)
    lam = delta.matrix()
    s, r, n = M.s, M.r, ctx.n
    omegas = [ctx.one()] if n == 1 else [ctx.one(), ctx.element(0, 1)]
    images = [w * v.p - w.frobenius() for w in omegas]
    nvars = s * r * n
    if nvars == 0:
        return SectionReport(v, 0, [[] for _ in range(s)], True, m)
    ctx1 = PadicContext(ctx.p, 1, ctx.m)
    rows = []
    for i in range(s):
        for j in range(r):
            rhs = lam[i][j] * v.p - lam[i][j].frobenius()
            for t in range(n):
                row = [PadicElement(ctx1, 0)] * (nvars + 1)
                for c in range(n):
                    img = images[c]
                    row[(i * r + j) * n + c] = PadicElement(ctx1, img.c0 if t == 0 else img.c1, 0, img.prec)
                row[nvars] = PadicElement(ctx1, rhs.c0 if t == 0 else rhs.c1, 0, rhs.prec)
                rows.append(row)
    ech = echelon(rows, nvars + 1, pivot_cols=range(nvars))
    kernel_dim = nvars - ech.rank
    coords = [PadicElement(ctx1, 0)] * nvars
    for row, pc in zip(ech.rows, ech.pivots):
        coords[pc] = row[nvars]
    T = []
    for i in range(s):
        T_row = []
        for j in range(r):
            base = (i * r + j) * n
            c0 = coords[base]
            c1 = coords[base + 1] if n == 2 else PadicElement(ctx1, 0)
            T_row.append(PadicElement(ctx, c0.c0, c1.c0, min(c0.prec, c1.prec)))
        T.append(T_row)
    matches = kernel_dim == 0 and all(T[i][j] == lam[i][j] for i in range(s) for j in range(r))
    precision = min((x.prec for row in T for x in row), default=m)
    return SectionReport(v, kernel_dim, T, matches, precision)
