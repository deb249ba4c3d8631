import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ogus.errors import DenominatorNotUnit, NotAUnit, PrecisionExhausted
from ogus.padic import (INF, PadicContext, PadicFraction, echelon, frobenius, invert, kernel,
                        mat_mul, valuation)

CONFIGS = [(3, 1, None), (5, 1, None), (5, 2, 2), (7, 2, 3), (11, 2, 2), (3, 2, 2)]
coords = st.integers(0, 10**40)


def ctx_of(cfg, m=24):
    p, n, d = cfg
    return PadicContext(p, n, m, d)


def test_context_validation():
    with pytest.raises(ValueError):
        PadicContext(2)
    with pytest.raises(ValueError):
        PadicContext(5, 1, 3)
    with pytest.raises(ValueError):
        PadicContext(5, 2, 8, 4)  # 4 is a square mod 5
    with pytest.raises(ValueError):
        PadicContext(9)


def test_frobenius_examples():
    c1 = PadicContext(5, 1, 8)
    assert frobenius(c1.from_rational(7)) == c1.from_rational(7)
    c2 = PadicContext(5, 2, 16, 2)
    s = c2.sqrt_d
    assert frobenius(s) == -s
    assert c2.sigma_generator == (0, c2.modulus - 1)


def test_valuation_examples():
    c = PadicContext(5, 1, 10)
    assert valuation(c.zero()) == INF
    assert valuation(c.element(25)) == 2
    assert valuation(c.element(3 * 5 + 5**3)) == 1


def test_invert_examples():
    c = PadicContext(5, 1, 4)
    assert invert(c.one()) == c.one()
    assert invert(c.element(2)).c0 == 313
    assert invert(c.element(3)).c0 == 417
    with pytest.raises(NotAUnit):
        invert(c.element(10))


def test_from_rational_rejects_p_denominator():
    with pytest.raises(DenominatorNotUnit):
        PadicContext(5).from_rational(Fraction(1, 5))


@pytest.mark.parametrize("cfg", CONFIGS)
@given(coords, coords, coords, coords)
def test_frobenius_is_ring_automorphism(cfg, a, b, c, d):
    ctx = ctx_of(cfg)
    x, y = ctx.element(a, b), ctx.element(c, d)
    assert frobenius(x + y) == frobenius(x) + frobenius(y)
    assert frobenius(x * y) == frobenius(x) * frobenius(y)
    if ctx.n == 2:
        assert frobenius(frobenius(x)) == x
    else:
        assert frobenius(x) == x


@pytest.mark.parametrize("cfg", CONFIGS)
@given(coords, coords)
def test_frobenius_reduces_to_pth_power(cfg, a, b):
    ctx = ctx_of(cfg)
    x = ctx.element(a, b)
    assert frobenius(x).residue() == (x ** ctx.p).residue()


@pytest.mark.parametrize("cfg", CONFIGS)
@given(coords, coords)
def test_inverse(cfg, a, b):
    ctx = ctx_of(cfg)
    x = ctx.element(a, b)
    if not x.is_unit():
        return
    assert x * invert(x) == ctx.one()


@pytest.mark.parametrize("cfg", CONFIGS)
@given(st.integers(0, 2**32))
def test_precision_tracking_is_conservative(cfg, seed):
    rng = random.Random(seed)
    p = cfg[0]
    lo, hi = ctx_of(cfg, 20), ctx_of(cfg, 28)

    def rand():
        e = rng.choice([0, 0, 0, 1, 2])
        return (rng.randrange(p**30) * p**e, rng.randrange(p**30) * p**e)

    lx = [lo.element(*rand()) for _ in range(4)]
    hx = [hi.element(x.c0, x.c1) for x in lx]
    for _ in range(20):
        i, j = rng.randrange(len(lx)), rng.randrange(len(lx))
        op = rng.choice("+-*")
        f = {"+": lambda a, b: a + b, "-": lambda a, b: a - b, "*": lambda a, b: a * b}[op]
        lx.append(f(lx[i], lx[j]))
        hx.append(f(hx[i], hx[j]))
    for a, b in zip(lx, hx):
        mod = p ** a.prec
        assert a.prec <= b.prec
        assert (a.c0 - b.c0) % mod == 0 and (a.c1 - b.c1) % mod == 0


def test_product_precision_gains_from_valuation():
    c = PadicContext(5, 1, 10)
    x = c.element(3, prec=4)
    y = c.element(25)
    assert (x * y).prec == 6


def test_fraction_arithmetic():
    c = PadicContext(7, 1, 12)
    a = c.fraction(Fraction(3, 49))
    assert a.valuation == -2
    b = c.fraction(Fraction(14))
    assert (a * b) == c.fraction(Fraction(42, 49))
    assert a.inverse() * a == c.fraction(1)
    assert isinstance(a + b, PadicFraction)


def test_echelon_kernel():
    c = PadicContext(5, 1, 20)
    rows = [[c.from_rational(x) for x in r] for r in [[1, 2, 3], [2, 4, 6], [0, 5, 10]]]
    kern = kernel(rows, 3)
    assert len(kern) == 1
    prod = mat_mul(rows, [[v] for v in kern[0]])
    assert all(r[0].valuation() == INF for r in prod)


def test_echelon_detects_precision_loss():
    c = PadicContext(5, 1, 8)
    rows = [[c.element(1, prec=3), c.element(1)], [c.element(1), c.element(1 + 5**3)]]
    assert echelon(rows, 2).rank == 1
    with pytest.raises(PrecisionExhausted):
        echelon(rows, 2, min_precision=5)
