"""Objects of the filtered Ogus category at desk scale, their predicates,
and the analytic hom-space solver.

An object is a K-vector space K^dim (standard basis, so every comparison
map g_v is the identity) with a weight filtration by coordinate prefixes
and, at each place v of a finite list, a σ_v-semilinear Frobenius F_v.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import (FiltrationNotCoordinateAligned, OgusError, PrecisionExhausted,
                     ReconstructionFailed)
from .isocrystal import (DEFAULT_GUARD, check_charpoly, padic_charpoly, poly_mul, recover_charpoly,
                         weight_factors)
from .numfield import Place, QuadField, QuadraticFieldElement, embed, place_context
from .padic import INF, PadicContext, PadicElement, echelon
from .semilinear import SemilinearOperator, commutes, linearize, twist_op

RECOVERY_BOUND = 10**6


@dataclass
class OgObject:
    field: QuadField
    dim: int
    weight_steps: list  # [(weight i, dim W_i)], increasing, last dim == dim
    frobenii: dict  # Place -> SemilinearOperator (twist 1)
    # exact charpolys of linearize(gr_i F_v), keyed by (Place, i); optional
    graded_charpolys: dict = field(default_factory=dict)

    @property
    def places(self) -> list:
        return sorted(self.frobenii)

    def ranges(self) -> list[tuple[int, range]]:
        """(weight, coordinate range of gr_i) for each step."""
        out, start = [], 0
        for w, d in self.weight_steps:
            out.append((w, range(start, d)))
            start = d
        return out

    def coordinate_weights(self) -> list[int]:
        out = []
        for w, rng in self.ranges():
            out += [w] * len(rng)
        return out

    def weights(self) -> list[int]:
        """Weights whose graded piece is nonzero."""
        return [w for w, rng in self.ranges() if len(rng)]

    def step_dim(self, i: int) -> int:
        d = 0
        for w, dw in self.weight_steps:
            if w <= i:
                d = dw
        return d

    def charpoly(self, v: Place) -> list[Fraction] | None:
        """Charpoly of linearize(F_v), if all graded ones are known."""
        out = [Fraction(1)]
        for w, rng in self.ranges():
            if not len(rng):
                continue
            g = self.graded_charpolys.get((v, w))
            if g is None:
                return None
            out = poly_mul(out, g)
        return out

    def restrict_places(self, places: Sequence[Place]) -> "OgObject":
        keep = set(places)
        return OgObject(self.field, self.dim, list(self.weight_steps),
                        {v: F for v, F in self.frobenii.items() if v in keep},
                        {k: g for k, g in self.graded_charpolys.items() if k[0] in keep})


def zero_object(field: QuadField, places: Sequence[Place], m: int = 40) -> OgObject:
    frob = {v: SemilinearOperator(place_context(field, v, m), [], 0, 1) for v in places}
    return OgObject(field, 0, [(0, 0)], frob)


# -- structural checks -------------------------------------------------------

@dataclass
class ObjectReport:
    ok: bool
    violations: list
    purity: list  # (place, weight, weights found or None)

    def __bool__(self):
        return self.ok


def _lower_left_violation(F: SemilinearOperator, split: int, guard: int) -> tuple[int, int] | None:
    target = F.ctx.m - guard
    for i in range(split, F.dim):
        for j in range(split):
            x = F.integral[i][j]
            if x.with_precision(min(target, x.prec)).valuation() != INF:
                return (i, j)
    return None


def _graded_charpoly(X: OgObject, v: Place, w: int, block: SemilinearOperator) -> list[Fraction]:
    g = X.graded_charpolys.get((v, w))
    if g is not None:
        return g
    return recover_charpoly(block, RECOVERY_BOUND)


def check_object(X: OgObject, guard: int = DEFAULT_GUARD) -> ObjectReport:
    """Verify the axioms of a filtered object; never raises."""
    violations, purity = [], []
    dims = [d for _, d in X.weight_steps]
    ws = [w for w, _ in X.weight_steps]
    if any(a >= b for a, b in zip(ws, ws[1:])):
        violations.append("weight steps are not strictly increasing")
    if any(a > b for a, b in zip(dims, dims[1:])) or (dims and dims[0] < 0):
        violations.append("filtration dimensions are not increasing")
    if (dims[-1] if dims else 0) != X.dim:
        violations.append("filtration is not exhaustive")
    if violations:
        return ObjectReport(False, violations, purity)
    for v in X.places:
        F = X.frobenii[v]
        if F.dim != X.dim:
            violations.append(f"{v}: operator has dimension {F.dim}, expected {X.dim}")
            continue
        if F.twist_exp != 1 % F.ctx.n:
            violations.append(f"{v}: operator is not σ-semilinear")
            continue
        if X.dim == 0:
            continue
        for w, rng in X.ranges():
            bad = _lower_left_violation(F, rng.stop, guard) if rng.stop < X.dim else None
            if bad:
                violations.append(f"{v}: F does not preserve W_{w} (entry {bad[0] + 1},{bad[1] + 1})")
        if padic_charpoly(F)[0].valuation() == INF:
            violations.append(f"{v}: F is not invertible")
        for w, rng in X.ranges():
            if not len(rng):
                continue
            block = linearize(F.block(rng, rng))
            try:
                g = _graded_charpoly(X, v, w, block)
                check_charpoly(block, g, guard)
                found = sorted(weight_factors(g, F.ctx.p, F.ctx.n)[0])
            except OgusError as exc:
                violations.append(f"{v}: gr_{w} {exc.kind}: {exc}")
                purity.append((v, w, None))
                continue
            purity.append((v, w, found))
            if found != [w]:
                violations.append(f"{v}: gr_{w} has Frobenius weights {found}, not pure of weight {w}")
    return ObjectReport(not violations, violations, purity)


# -- twists, graded pieces ----------------------------------------------------

def _twist_poly(g: Sequence, c: Fraction) -> list[Fraction]:
    deg = len(g) - 1
    return [Fraction(a) * c ** (deg - j) for j, a in enumerate(g)]


def twist_object(X: OgObject, k: int) -> OgObject:
    """X(k): F_v -> p^-k F_v, so every weight label drops by 2k."""
    frob = {v: twist_op(F, k) for v, F in X.frobenii.items()}
    steps = [(w - 2 * k, d) for w, d in X.weight_steps]
    cps = {}
    for (v, w), g in X.graded_charpolys.items():
        cps[(v, w - 2 * k)] = _twist_poly(g, Fraction(v.p) ** (-k * v.residue_degree))
    return OgObject(X.field, X.dim, steps, frob, cps)


def _check_aligned(X: OgObject, split: int, guard: int):
    for v, F in X.frobenii.items():
        bad = _lower_left_violation(F, split, guard)
        if bad:
            raise FiltrationNotCoordinateAligned(f"{v}: nonzero entry ({bad[0] + 1},{bad[1] + 1}) below the block")


def w_leq(X: OgObject, n: int, guard: int = DEFAULT_GUARD) -> OgObject:
    d = X.step_dim(n)
    if d == X.dim:
        return X
    _check_aligned(X, d, guard)
    rng = range(d)
    steps = [(w, dw) for w, dw in X.weight_steps if w <= n] or [(n, 0)]
    frob = {v: F.block(rng, rng) for v, F in X.frobenii.items()}
    cps = {k: g for k, g in X.graded_charpolys.items() if k[1] <= n}
    return OgObject(X.field, d, steps, frob, cps)


def gr(X: OgObject, i: int, guard: int = DEFAULT_GUARD) -> OgObject:
    rng = next((r for w, r in X.ranges() if w == i), range(0))
    if len(rng):
        _check_aligned(X, rng.start, guard)
        _check_aligned(X, rng.stop, guard)
    frob = {v: F.block(rng, rng) for v, F in X.frobenii.items()}
    cps = {k: g for k, g in X.graded_charpolys.items() if k[1] == i}
    return OgObject(X.field, len(rng), [(i, len(rng))], frob, cps)


# -- effectivity ---------------------------------------------------------------

@dataclass
class PredicateResult:
    ok: bool
    witness: str | None = None

    def __bool__(self):
        return self.ok


def is_l_effective(X: OgObject) -> PredicateResult:
    """The standard lattice is F_v-stable at every listed place."""
    for v in X.places:
        F = X.frobenii[v]
        for i, row in enumerate(F.integral):
            for j, x in enumerate(row):
                val = x.valuation() + F.shift
                if val < 0:
                    return PredicateResult(False, f"place {v}: entry ({i + 1},{j + 1}) has valuation {int(val)}")
    return PredicateResult(True)


def is_e_effective(X: OgObject, charpolys: dict | None = None, guard: int = DEFAULT_GUARD) -> PredicateResult:
    """Every charpoly of linearize(F_v) lies in Z[x] (eigenvalues are algebraic integers)."""
    for v in X.places:
        if X.dim == 0:
            continue
        g = (charpolys or {}).get(v) or X.charpoly(v)
        Flin = linearize(X.frobenii[v])
        if g is None:
            g = recover_charpoly(Flin, RECOVERY_BOUND)
        check_charpoly(Flin, g, guard)
        bad = [c for c in g if Fraction(c).denominator != 1]
        if bad:
            return PredicateResult(False, f"place {v}: charpoly coefficient {bad[0]} is not an integer")
    return PredicateResult(True)


@dataclass
class LevelReport:
    weights_ok: bool  # clause (a)
    artin_lefschetz: bool  # clause (b)
    twist_l_effective: bool  # clause (c)
    e_effective_graded: bool  # implemented reading
    e_effective_literal: bool  # literal reading, reported only
    details: dict

    @property
    def ok(self) -> bool:
        return self.weights_ok and self.artin_lefschetz and self.twist_l_effective and self.e_effective_graded

    def __bool__(self):
        return self.ok

    def clauses(self) -> list[tuple[str, bool]]:
        return [("weights in {-2,-1,0}", self.weights_ok),
                ("W_-2 is Artin-Lefschetz", self.artin_lefschetz),
                ("X(-1) l-effective", self.twist_l_effective),
                ("e-effective (graded reading)", self.e_effective_graded),
                ("e-effective (literal reading)", self.e_effective_literal)]


def _safe(pred, *args) -> tuple[bool, str | None]:
    try:
        r = pred(*args)
        return bool(r), getattr(r, "witness", None)
    except OgusError as exc:
        return False, f"{exc.kind}: {exc}"


def is_level_le_1(X: OgObject, charpolys: dict | None = None, guard: int = DEFAULT_GUARD) -> LevelReport:
    """Level <= 1 test with e-effectivity read gradedwise.

    e-effectivity is required of gr_0, of gr_-1(-1) and of W_-2(-1); the
    literal requirement on X itself is computed and reported alongside.
    """
    details = {}
    weights_ok = set(X.weights()) <= {-2, -1, 0}
    details["weights"] = X.weights()
    try:
        W = twist_object(w_leq(X, -2, guard), -1)
        rep = check_object(W, guard)
        pure0 = rep.ok and all(found == [0] for _, _, found in rep.purity)
        l_ok, l_w = _safe(is_l_effective, W)
        e_ok, e_w = _safe(is_e_effective, W)
        al = pure0 and l_ok and e_ok
        details["W_-2(-1)"] = {"pure of weight 0": pure0, "l-effective": l_ok, "e-effective": e_ok,
                               "witness": l_w or e_w}
    except OgusError as exc:
        al = False
        details["W_-2(-1)"] = f"{exc.kind}: {exc}"
    c_ok, c_w = _safe(is_l_effective, twist_object(X, -1))
    details["X(-1) witness"] = c_w
    graded = True
    try:
        g0, _ = _safe(is_e_effective, gr(X, 0, guard))
        g1, _ = _safe(is_e_effective, twist_object(gr(X, -1, guard), -1))
        graded = g0 and g1 and al
        details["gr_0 e-effective"] = g0
        details["gr_-1(-1) e-effective"] = g1
    except OgusError as exc:
        graded = False
        details["graded"] = f"{exc.kind}: {exc}"
    lit, _ = _safe(is_e_effective, X, charpolys)
    return LevelReport(weights_ok, al, c_ok, graded, lit, details)


# -- Kronecker ----------------------------------------------------------------

@dataclass
class KroneckerResult:
    exact: bool
    local: dict  # Place -> bool

    @property
    def agree(self) -> bool:
        return all(self.local.values()) == self.exact

    def __bool__(self):
        return self.exact


def kronecker_rational(c: QuadraticFieldElement, places: Sequence[Place], m: int = 40) -> KroneckerResult:
    """Is c rational?  Exactly (conj c == c) and locally (σ_v fixes c at inert v)."""
    exact = c.conjugate() == c
    local = {}
    for v in places:
        if v.kind != "inert":
            continue
        x = embed(c, v, place_context(c.field, v, m))
        local[v] = x.frobenius() == x
    return KroneckerResult(exact, local)


# -- hom spaces -----------------------------------------------------------------

@dataclass
class HomSolution:
    basis: list  # dim_N x dim_M matrices of QuadraticFieldElement
    analytic_dimension: int
    places_used: list
    precision_used: int
    reconstruction_bound: int
    place_dimensions: dict  # Place -> Q-dimension of that place's reconstructed space
    strict: bool  # every basis matrix kills the weight-raising block
    field: QuadField
    shape: tuple  # (dim_N, dim_M)

    def vectors(self) -> list[list[Fraction]]:
        return [matrix_to_vector(X, self.field) for X in self.basis]

    def contains(self, X) -> bool:
        k = self.shape[0] * self.shape[1] * self.field.degree
        return linalg.contains(self.vectors(), [matrix_to_vector(X, self.field)], k)

    def same_space(self, matrices: Sequence) -> bool:
        k = self.shape[0] * self.shape[1] * self.field.degree
        return linalg.same_span(self.vectors(), [matrix_to_vector(X, self.field) for X in matrices], k)


def matrix_to_vector(X, field: QuadField) -> list[Fraction]:
    """Flatten a K-matrix to Q-coordinates (a, b per entry, row-major)."""
    out = []
    for row in X:
        for x in row:
            x = x if isinstance(x, QuadraticFieldElement) else QuadraticFieldElement(x, 0, field)
            out.append(x.a)
            if field.degree == 2:
                out.append(x.b)
    return out


def vector_to_matrix(vec: Sequence, field: QuadField, dn: int, dm: int) -> list[list[QuadraticFieldElement]]:
    deg = field.degree
    out = []
    for i in range(dn):
        row = []
        for j in range(dm):
            base = (i * dm + j) * deg
            b = vec[base + 1] if deg == 2 else 0
            row.append(QuadraticFieldElement(vec[base], b, field))
        out.append(row)
    return out


def weight_raising_zero(X, M: OgObject, N: OgObject) -> bool:
    """Entries from weight j to a strictly larger weight i are exactly 0."""
    wm, wn = M.coordinate_weights(), N.coordinate_weights()
    return all(X[i][j] == 0 for i in range(N.dim) for j in range(M.dim) if wn[i] > wm[j])


def _place_constraints(M: OgObject, N: OgObject, v: Place) -> tuple[list, PadicContext]:
    """Z_p-linear constraints on the rational coordinates of X at v."""
    FM, FN = M.frobenii[v], N.frobenii[v]
    ctx = FM.ctx
    if FN.ctx != ctx:
        raise ValueError(f"{v}: objects use different p-adic contexts")
    k0 = min(FM.shift, FN.shift)
    AM = [[x.shift(FM.shift - k0) for x in r] for r in FM.integral]
    AN = [[x.shift(FN.shift - k0) for x in r] for r in FN.integral]
    dm, dn = M.dim, N.dim
    field = M.field
    omegas = [ctx.one()] if field.degree == 1 else [ctx.one(), ctx.sqrt_d]
    s_omegas = [w.frobenius() for w in omegas]
    deg = len(omegas)
    nvars = dn * dm * deg
    zero = ctx.zero()
    # columns[u][(a, b)] = entry (a, b) of L(ω E_ij)
    cols = []
    for i in range(dn):
        for j in range(dm):
            for c in range(deg):
                col = {}
                for b in range(dm):
                    col[(i, b)] = col.get((i, b), zero) + omegas[c] * AM[j][b]
                for a in range(dn):
                    col[(a, j)] = col.get((a, j), zero) - AN[a][i] * s_omegas[c]
                cols.append(col)
    ctx1 = PadicContext(ctx.p, 1, ctx.m)
    rows = []
    for a in range(dn):
        for b in range(dm):
            for t in range(ctx.n):
                row = []
                for u in range(nvars):
                    x = cols[u].get((a, b), zero)
                    row.append(PadicElement(ctx1, x.c0 if t == 0 else x.c1, 0, x.prec))
                rows.append(row)
    return rows, ctx1


def _inf_norm(v) -> int:
    return max((abs(x) for x in v), default=0)


def place_subspace(M: OgObject, N: OgObject, v: Place, bound: int, guard: int = DEFAULT_GUARD) -> list[list[Fraction]]:
    """Rational reconstruction of the solution space at one place.

    The p-adic solutions form x_piv = -G x_free; the integer vectors
    satisfying this mod p^t form a lattice whose LLL-reduced short vectors
    are the candidate rational solutions.  The split between short and long
    vectors is certified through the Gram-Schmidt norms.
    """
    rows, ctx1 = _place_constraints(M, N, v)
    nvars = M.dim * N.dim * M.field.degree
    if nvars == 0:
        return []
    if not rows:
        return linalg.identity(nvars)
    ech = echelon(rows, nvars, min_precision=ctx1.m // 2)
    free = ech.free_columns()
    t = ctx1.m - guard
    for row in ech.rows:
        for f in free:
            t = min(t, row[f].prec)
    if t <= guard:
        raise PrecisionExhausted(f"{v}: only {t} digits survive row reduction")
    pt = ctx1.p ** t
    G = {}
    forced_zero = []
    for row, pc in zip(ech.rows, ech.pivots):
        g = {f: row[f].c0 % pt for f in free if row[f].c0 % pt}
        if g:
            G[pc] = g
        else:
            forced_zero.append(pc)
    active = [c for c in range(nvars) if c not in forced_zero]
    pos = {c: i for i, c in enumerate(active)}
    basis = []
    for f in free:
        vec = [0] * len(active)
        vec[pos[f]] = 1
        for pc, g in G.items():
            if f in g:
                vec[pos[pc]] = (-g[f]) % pt
        basis.append(vec)
    for pc in G:
        vec = [0] * len(active)
        vec[pos[pc]] = pt
        basis.append(vec)
    if not basis:
        return []
    reduced, gs = linalg.lll(basis)
    keep = 0
    while keep < len(reduced) and _inf_norm(reduced[keep]) <= bound:
        keep += 1
    k = len(active)
    rest = gs[keep:]
    if rest and min(rest) <= bound * bound * k:
        raise ReconstructionFailed(
            f"{v}: short and long lattice vectors are not separated at bound {bound}; raise the precision", place=v)
    out = []
    for vec in reduced[:keep]:
        full = [Fraction(0)] * nvars
        for c, x in zip(active, vec):
            full[c] = Fraction(x)
        out.append(full)
    return linalg.span_basis(out, nvars)


def hom_space(M: OgObject, N: OgObject, m: int | None = None, bound: int = 10**6,
              guard: int = DEFAULT_GUARD) -> HomSolution:
    """Q-basis of the K-linear X: V_M -> V_N with X F_M = F_N σ(X) at every shared place."""
    if M.field != N.field:
        raise ValueError("objects over different fields")
    field = M.field
    places = [v for v in M.places if v in N.frobenii]
    if m is not None:
        M = _at_precision(M, m)
        N = _at_precision(N, m)
    nvars = M.dim * N.dim * field.degree
    space = linalg.identity(nvars)
    per_place = {}
    precision = min((M.frobenii[v].ctx.m for v in places), default=m or 0)
    for v in places:
        sub = place_subspace(M, N, v, bound, guard)
        per_place[v] = len(sub)
        space = linalg.intersect(space, sub, nvars) if sub else []
        if not space:
            break
    basis = [vector_to_matrix(vec, field, N.dim, M.dim) for vec in space]
    for X in basis:
        ints = linalg.primitive(matrix_to_vector(X, field))
        Xi = vector_to_matrix(ints, field, N.dim, M.dim)
        for v in places:
            ctx = M.frobenii[v].ctx
            Xv = [[embed(x, v, ctx) for x in row] for row in Xi]
            res = commutes(Xv, M.frobenii[v], N.frobenii[v], guard)
            if not res:
                raise ReconstructionFailed(
                    f"{v}: reconstructed morphism fails the Frobenius condition at entry {res.entry}", place=v)
    strict = all(weight_raising_zero(X, M, N) for X in basis)
    return HomSolution(basis, len(basis), places, precision, bound, per_place, strict, field, (N.dim, M.dim))


def _at_precision(X: OgObject, m: int) -> OgObject:
    """Truncate operators to m digits when they were built wider."""
    frob = {}
    for v, F in X.frobenii.items():
        if F.ctx.m == m:
            frob[v] = F
            continue
        if F.ctx.m < m:
            raise PrecisionExhausted(f"{v}: object only carries {F.ctx.m} digits")
        ctx = PadicContext(F.ctx.p, F.ctx.n, m, F.ctx.d)
        frob[v] = SemilinearOperator(ctx, [[PadicElement(ctx, x.c0, x.c1, min(x.prec, m)) for x in r]
                                           for r in F.integral], F.shift, F.twist_exp)
    return OgObject(X.field, X.dim, list(X.weight_steps), frob, dict(X.graded_charpolys))
