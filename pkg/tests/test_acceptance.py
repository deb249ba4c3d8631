"""Acceptance criteria 1-13.

Each test records one ``CRITERION n: PASS|FAIL`` line; the lines are
printed at the end of the pytest run (see conftest) and also when this
file is executed directly.
"""
from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction

import pytest
import sympy

from ogus import linalg
from ogus.bogcat import bog_hom_space, t_BOg, t_BOg_direct
from ogus.isocrystal import decompose, weil_weight
from ogus.logexp import log_loss, log_torus_unit, pexp, plog
from ogus.motive import (KummerMotive, check_fullness, common_places, delta_section, motive_hom_exact,
                         realize_hom, section_uniqueness, t_Og)
from ogus.numfield import Place, QuadField, QuadraticFieldElement, classify_place
from ogus.ogcat import is_e_effective, is_l_effective, is_level_le_1, kronecker_rational, twist_object
from ogus.padic import PadicContext, PadicFraction, frobenius, is_square_mod, same_span
from ogus.semilinear import SemilinearOperator, commutes

RESULTS: dict[int, str] = {}

PRIMES = (3, 5, 7, 11)
DESK = (2, 3, 4, 6, 8, 9, 12)


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def non_residue(p: int) -> int:
    return next(d for d in range(2, p) if not is_square_mod(d, p))


def contexts(m: int):
    for p in PRIMES:
        yield PadicContext(p, 1, m)
        yield PadicContext(p, 2, m, non_residue(p))


# 1 ---------------------------------------------------------------------------

def test_criterion_01_exp_log_inversion():
    rng = random.Random(1)
    t0 = time.perf_counter()
    worst = None
    bad = 0
    for ctx in contexts(64):
        g = ctx.m - log_loss(ctx.p, ctx.m)
        for _ in range(100):
            u = ctx.one() + ctx.element(rng.randrange(ctx.modulus), rng.randrange(ctx.modulus)).shift(1)
            back = pexp(plog(u).value)
            if back.with_precision(g) != u.with_precision(g):
                bad += 1
                worst = (ctx.p, ctx.n)
    dt = time.perf_counter() - t0
    record(1, bad == 0 and dt < 5, f"800 units, {bad} mismatches{f' {worst}' if worst else ''}, {dt:.2f} s (< 5 s)")


# 2 ---------------------------------------------------------------------------

def test_criterion_02_frobenius_laws():
    rng = random.Random(2)
    bad = 0
    for ctx in contexts(64):
        for _ in range(200):
            x = ctx.element(rng.randrange(ctx.modulus), rng.randrange(ctx.modulus))
            y = ctx.element(rng.randrange(ctx.modulus), rng.randrange(ctx.modulus))
            ok = frobenius(x + y) == frobenius(x) + frobenius(y)
            ok &= frobenius(x * y) == frobenius(x) * frobenius(y)
            ok &= frobenius(ctx.one()) == ctx.one()
            ok &= frobenius(frobenius(x)) == x if ctx.n == 2 else frobenius(x) == x
            ok &= frobenius(x).residue() == (x ** ctx.p).residue()
            bad += not ok
    record(2, bad == 0, f"8 configurations x 200 checks, {bad} failures")


# 3 ---------------------------------------------------------------------------

def test_criterion_03_weight_table():
    rows = []
    ok = True
    for p, n in [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2), (5, 2)]:
        q = p**n
        table = [([-1, 1], 0), ([-q, 1], 2), ([-q, 0, 1], 1)]
        for f, w in table:
            r = weil_weight(f, p, n)
            target = q ** (w / 2)
            exact = abs(Fraction(f[0])) == Fraction(p) ** (n * w * (len(f) - 1) // 2)
            numeric = all(abs(m - target) <= 1e-9 * target for m in r.numeric_moduli)
            ok &= r.weight == w and exact and numeric
            rows.append(r.weight)
    r = weil_weight([1, -3, 1], 5, 1)
    ok &= r.weight is None
    record(3, ok, f"x-1 -> 0, x-q -> 2, x^2-q -> 1 on 6 (p, n); x^2-3x+1 at 5 -> not pure (moduli {r.numeric_moduli[0]:.6f}, {r.numeric_moduli[1]:.6f})")


# 4 ---------------------------------------------------------------------------

def pure_blocks(p: int, n: int):
    q = p**n
    return [
        (0, [[1]], [-1, 1]),
        (2, [[q]], [-q, 1]),
        (-2, [[Fraction(1, q)]], [Fraction(-1, q), 1]),
        (1, [[0, q], [1, 0]], [-q, 0, 1]),
        (-1, [[0, 1], [Fraction(1, q), 0]], [Fraction(-1, q), 0, 1]),
        (0, [[0, -1], [1, 0]], [1, 0, 1]),
    ]


def block_diag(blocks):
    dim = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * dim for _ in range(dim)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = Fraction(x)
        k += len(b)
    return out


def unimodular(rng, dim):
    S = linalg.identity(dim)
    for _ in range(4 * dim):
        i, j = rng.sample(range(dim), 2) if dim > 1 else (0, 0)
        if i == j:
            continue
        k = rng.randint(-3, 3)
        S[i] = [a + k * b for a, b in zip(S[i], S[j])]
    return S


def sympy_oracle(M, factors_by_weight):
    """Generalised eigenspaces by brute force: ker prod g(M)^dim over exact rationals."""
    A = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M])
    dim = A.shape[0]
    out = {}
    for w, gs in factors_by_weight.items():
        P = sympy.eye(dim)
        for g in gs:
            G = sympy.zeros(dim, dim)
            for j, c in enumerate(g):
                G += sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * A**j
            P = P * G**dim
        out[w] = [[Fraction(int(sympy.numer(x)), int(sympy.denom(x))) for x in v] for v in P.nullspace()]
    return out


def test_criterion_04_decomposition_vs_oracle():
    rng = random.Random(4)
    bad = []
    guard = 4
    for trial in range(50):
        p = rng.choice([3, 5, 7])
        n = rng.choice([1, 2])
        blocks, dim = [], 0
        while True:
            choice = rng.choice(pure_blocks(p, n))
            if dim + len(choice[1]) > 4:
                break
            blocks.append(choice)
            dim += len(choice[1])
            if dim >= 2 and rng.random() < 0.3:
                break
        S = unimodular(rng, dim)
        M = linalg.matmul(linalg.matmul(S, block_diag([b[1] for b in blocks])), linalg.inverse(S))
        cp = linalg.charpoly(M)
        by_weight: dict[int, list] = {}
        for w, _, g in blocks:
            by_weight.setdefault(w, [])
            if g not in by_weight[w]:
                by_weight[w].append(g)
        oracle = sympy_oracle(M, by_weight)
        ctx = PadicContext(p, 1, 40)
        dec = decompose(SemilinearOperator.from_rational(ctx, M, 0), cp, guard, n=n)
        got = {s.weight: s.basis for s in dec.summands}
        if sorted(got) != sorted(oracle):
            bad.append(trial)
            continue
        for w, basis in got.items():
            ex = [[ctx.from_rational(x) for x in linalg.primitive(v)] for v in oracle[w]]
            if len(ex) != len(basis) or not same_span(basis, ex, ctx.m - guard):
                bad.append(trial)
                break
    record(4, not bad, f"50 conjugated operators (dim <= 4), mismatches: {bad or 'none'}")


# 5 ---------------------------------------------------------------------------

def test_criterion_05_identity_rejected():
    M1, M2 = KummerMotive.kummer(1), KummerMotive.kummer(2)
    places = [Place(p, 1, "split") for p in (3, 5, 7)]
    XM, XN = t_Og(M1, places), t_Og(M2, places)
    ok = True
    notes = []
    for v in places:
        w = commutes([[1, 0], [0, 1]], XM.frobenii[v], XN.frobenii[v])
        ctx = XM.frobenii[v].ctx
        lam = PadicFraction(delta_section(M2, v).matrix()[0][0], 0)
        # at a split place the entry is (p^-1 - 1) * λ_v(2)
        scale = ctx.fraction(Fraction(1, v.p) - 1)
        witness = w.difference * scale.inverse() if not w else None
        match = witness is not None and w.entry == (0, 1) and witness == lam and not lam.is_zero()
        ok &= match
        notes.append(f"{v.p}:{'rejected' if not w else 'accepted'}")
    sol = check_fullness(M1, M2, places).analytic
    kills = all(X[i][1] == 0 for X in sol.basis for i in range(2))
    ok &= sol.analytic_dimension == 1 and kills and not sol.contains([[1, 0], [0, 1]])
    record(5, ok, f"identity {' '.join(notes)}, witness = λ_v(2); Hom dim {sol.analytic_dimension}, lattice column killed: {kills}")


# 6, 7, 9, 10 -------------------------------------------------------------------

_DESK_CACHE: dict = {}


def desk_runs():
    if not _DESK_CACHE:
        t0 = time.perf_counter()
        runs = []
        for d in (1, 2):
            K = QuadField(d)
            for a, b in itertools.product(DESK, DESK):
                M, N = KummerMotive.kummer(a, K), KummerMotive.kummer(b, K)
                places = common_places([M, N])
                runs.append((d, a, b, M, N, places, check_fullness(M, N, places, 40, 10**6)))
        _DESK_CACHE["runs"] = runs
        _DESK_CACHE["time"] = time.perf_counter() - t0
    return _DESK_CACHE["runs"], _DESK_CACHE["time"]


def test_criterion_06_fullness():
    runs, dt = desk_runs()
    viol = [(d, a, b) for d, a, b, *_, r in runs if r.status != "OK"]
    dims = all(r.analytic.analytic_dimension == r.exact_dimension for *_, r in runs)
    spans = all(r.analytic.same_space(r.realized) for *_, r in runs)
    inert = all(any(v.kind == "inert" for v in places) for d, a, b, M, N, places, r in runs if d == 2)
    three = all(len(places) == 3 for *_, places, r in runs)
    ok = not viol and dims and spans and inert and three and dt < 30
    record(6, ok, f"{len(runs)} pairs over Q and Q(sqrt 2) (42 ordered a != b + 7 End each), "
                  f"{len(viol)} FULLNESS_VIOLATION, inert place in every Q(sqrt 2) set: {inert}, {dt:.1f} s (< 30 s)")


def test_criterion_07_faithfulness():
    runs, _ = desk_runs()
    count = 0
    ok = True
    for *_, r in runs:
        for phi, X in zip(r.exact_basis, r.realized):
            count += 1
            ok &= any(not x.is_zero() for row in X for x in row) and not phi.is_zero()
            ok &= any(not x.is_zero() for row in realize_hom(phi) for x in row)
    record(7, ok, f"{count} nonzero exact basis morphisms realize to nonzero matrices")


def test_criterion_08_section_uniqueness():
    rng = random.Random(8)
    bad = 0
    for _ in range(20):
        r, s = rng.randint(1, 2), rng.randint(1, 2)
        K = QuadField(rng.choice([1, 2, 3]))
        u = tuple(tuple(Fraction(rng.randint(1, 30), rng.randint(1, 30)) for _ in range(r)) for _ in range(s))
        M = KummerMotive(r, s, u, K)
        for v in common_places([M], count=2):
            rep = section_uniqueness(M, v, 40)
            bad += not (rep.kernel_dimension == 0 and rep.matches_delta)
    record(8, bad == 0, f"20 motives x 2 places, affine solution set of dimension 0 equal to δ: {40 - bad}/40")


def test_criterion_09_strictness():
    runs, _ = desk_runs()
    total = 0
    ok = True
    for d, a, b, M, N, places, r in runs:
        for X in r.analytic.basis:
            total += 1
            ok &= all(X[N.s + j][i] == 0 for j in range(N.r) for i in range(M.s))
        ok &= r.analytic.strict
    record(9, ok, f"{total} reconstructed basis matrices, weight-raising block exactly zero")


def test_criterion_10_effectivity():
    runs, _ = desk_runs()
    seen = {}
    for d, a, b, M, N, places, r in runs:
        seen[(d, a)] = (M, places)
    ok = True
    for M, places in seen.values():
        X = t_Og(M, places)
        ok &= (not is_l_effective(X)) if M.s >= 1 else True
        ok &= bool(is_l_effective(twist_object(X, -1)))
        lvl = is_level_le_1(X)
        ok &= lvl.e_effective_graded and lvl.ok
    record(10, ok, f"{len(seen)} motives: X not l-effective, X(-1) l-effective, graded e-effective, level <= 1")


# 11 ----------------------------------------------------------------------------

def test_criterion_11_psi_routes():
    rng = random.Random(11)
    bad = 0
    checked = 0
    for _ in range(50):
        r, s = rng.randint(0, 2), rng.randint(0, 2)
        if r + s == 0:
            r = 1
        K = QuadField(rng.choice([1, 2, 5]))
        u = tuple(tuple(Fraction(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(r)) for _ in range(s))
        M = KummerMotive(r, s, u, K)
        places = common_places([M])
        checked += len(places)
        bad += t_BOg(M, places).residues != t_BOg_direct(M, places).residues
    record(11, bad == 0 and checked == 150, f"50 motives x 3 places, entrywise agreement over k_v, {bad} disagreements")


# 12 ----------------------------------------------------------------------------

def test_criterion_12_bog_not_full():
    K = QuadField(2)
    Z1 = KummerMotive(1, 0, (), K)
    X = t_BOg(Z1, common_places([Z1]))
    bog = bog_hom_space(X, X).dimension
    mot = len(motive_hom_exact(Z1, Z1))
    record(12, bog == 2 and mot == 1, f"End over Q(sqrt 2): BOg dimension {bog} > motive dimension {mot}")


# 13 ----------------------------------------------------------------------------

def test_criterion_13_kronecker():
    rng = random.Random(13)
    K = QuadField(2)
    v = next(classify_place(K, p) for p in sympy.primerange(3, 100)
             if K.d % p and classify_place(K, p).kind == "inert")

    def coeff():
        while True:
            q = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
            if q.denominator % v.p:
                return q

    acc = sum(bool(kronecker_rational(K(coeff()), [v]).local[v]) for _ in range(100))
    rej = 0
    for _ in range(100):
        b = coeff()
        while b == 0:
            b = coeff()
        rej += not kronecker_rational(QuadraticFieldElement(coeff(), b, K), [v]).local[v]
    record(13, acc == 100 and rej == 100, f"first inert place {v}: {acc}/100 rationals accepted, {rej}/100 irrationals rejected")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
