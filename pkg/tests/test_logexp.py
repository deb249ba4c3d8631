import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ogus.errors import NotAUnit, NotInDomain, NotPrincipalUnit
from ogus.logexp import log_Ga, log_loss, log_torus_unit, pexp, plog
from ogus.numfield import Place
from ogus.padic import PadicContext

CONFIGS = [(3, 1, None), (5, 1, None), (7, 1, None), (5, 2, 2), (7, 2, 3), (11, 2, 2)]
coords = st.integers(0, 10**60)


def ctx_of(cfg, m=30):
    return PadicContext(cfg[0], cfg[1], m, cfg[2])


def principal(ctx, a, b):
    return ctx.one() + ctx.element(a, b).shift(1)


def series_mod(terms, mod):
    """Exact rational partial sum reduced mod an integer modulus."""
    q = sum(terms, Fraction(0))
    return q.numerator * pow(q.denominator, -1, mod) % mod


def test_plog_examples():
    c = PadicContext(5, 1, 4)
    assert plog(c.one()).value.is_zero()
    oracle = series_mod([Fraction((-1) ** (k - 1) * 5**k, k) for k in range(1, 30)], 625)
    assert oracle == 555
    assert plog(c.element(6)).value.c0 == 555


def test_pexp_examples():
    c = PadicContext(5, 1, 4)
    assert pexp(c.zero()) == c.one()
    # m = 3 lies below the minimum working precision; compute at 4 and reduce
    assert pexp(c.element(5)).c0 % 125 == 81
    oracle = series_mod([Fraction(5**k, math.factorial(k)) for k in range(40)], 5**4)
    assert pexp(c.element(5)).c0 == oracle
    x = c.element(6)
    assert pexp(plog(x).value) == x


def test_domain_errors():
    c = PadicContext(5, 1, 8)
    with pytest.raises(NotPrincipalUnit):
        plog(c.element(2))
    with pytest.raises(NotInDomain):
        pexp(c.element(2))
    with pytest.raises(NotAUnit):
        log_torus_unit(c.element(10))


def test_log_torus_examples():
    c = PadicContext(5, 1, 20)
    assert log_torus_unit(c.from_rational(-1)).value.is_zero()
    assert log_torus_unit(c.element(6)).element == plog(c.element(6)).element
    lam2 = log_torus_unit(c.element(2))
    assert lam2.element == (plog(c.element(16)).value * c.from_rational(Fraction(1, 4))).with_precision(
        lam2.guaranteed_precision)
    assert (4 * lam2).element == log_torus_unit(c.element(16)).element


def test_log_Ga_is_identity():
    c = PadicContext(5, 1, 8)
    for x in (0, 7, c.element(15)):
        assert log_Ga(x) == x


def test_guaranteed_precision_accounts_for_loss():
    c = PadicContext(5, 1, 64)
    lv = plog(c.element(6))
    assert lv.guaranteed_precision == 64 - log_loss(5, 64)
    assert lv.value.valuation() >= 1


@pytest.mark.parametrize("cfg", CONFIGS)
@given(coords, coords, coords, coords)
def test_plog_homomorphism(cfg, a, b, c, d):
    ctx = ctx_of(cfg)
    u, w = principal(ctx, a, b), principal(ctx, c, d)
    assert plog(u * w).element == (plog(u) + plog(w)).element


@pytest.mark.parametrize("cfg", CONFIGS)
@given(coords, coords)
def test_exp_log_inverse(cfg, a, b):
    ctx = ctx_of(cfg)
    x = ctx.element(a, b).shift(1)
    g = ctx.m - log_loss(ctx.p, ctx.m)
    assert plog(pexp(x)).value.with_precision(g) == x.with_precision(g)
    assert pexp(plog(1 + x).value).with_precision(g) == (1 + x).with_precision(g)


@pytest.mark.parametrize("cfg", [c for c in CONFIGS if c[1] == 2])
@given(coords, coords)
def test_frobenius_equivariance(cfg, a, b):
    ctx = ctx_of(cfg)
    u = principal(ctx, a, b)
    assert plog(u).element.frobenius() == plog(u.frobenius()).element
    x = ctx.element(a, b)
    if x.is_unit():
        v = Place(ctx.p, 2, "inert")
        assert log_torus_unit(x, v).element.frobenius() == log_torus_unit(x.frobenius(), v).element


@pytest.mark.parametrize("cfg", CONFIGS)
@given(coords, coords, st.integers(-3, 3))
def test_log_torus_power(cfg, a, b, k):
    ctx = ctx_of(cfg)
    x = ctx.element(a, b)
    if not x.is_unit():
        return
    assert log_torus_unit(x**k).element == (k * log_torus_unit(x)).element
