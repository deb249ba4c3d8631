from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ogus.errors import DenominatorNotUnit, RamifiedOrEvenPlace
from ogus.numfield import (Place, QuadField, QuadraticFieldElement, classify_place, embed,
                           galois_conjugate, place_context)
from ogus.padic import PadicContext

K2 = QuadField(2)
K3 = QuadField(3)
rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@pytest.mark.parametrize("d,p,kind,n", [(1, 5, "split", 1), (2, 5, "inert", 2), (2, 7, "split", 1),
                                        (2, 3, "inert", 2), (-1, 5, "split", 1), (-1, 7, "inert", 2)])
def test_classify_place(d, p, kind, n):
    v = classify_place(QuadField(d), p)
    assert (v.kind, v.residue_degree) == (kind, n)


@pytest.mark.parametrize("d,p", [(1, 2), (2, 2), (3, 3), (5, 5)])
def test_classify_rejects_even_and_ramified(d, p):
    with pytest.raises(RamifiedOrEvenPlace):
        classify_place(QuadField(d), p)


def test_field_validation():
    with pytest.raises(ValueError):
        QuadField(4)
    with pytest.raises(ValueError):
        QuadField(0)


def test_galois_conjugate_examples():
    assert galois_conjugate(K2(Fraction(3, 2))) == K2(Fraction(3, 2))
    assert galois_conjugate(K2.sqrt_d()) == -K2.sqrt_d()
    assert galois_conjugate(K3(1, 2)) == K3(1, -2)


def test_rational_field_folds():
    Q = QuadField(1)
    x = QuadraticFieldElement(2, 3, Q)
    assert x == Q(5) and x.is_rational()


@given(rats, rats, rats, rats)
def test_field_axioms(a, b, c, e):
    x, y = K2(a, b), K2(c, e)
    assert x * y == y * x
    assert (x + y).conjugate() == x.conjugate() + y.conjugate()
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert (x * y).norm() == x.norm() * y.norm()
    if not x.is_zero():
        assert x * x.inverse() == K2(1)


def test_embed_examples():
    Q = QuadField(1)
    v = Place(5, 1, "split")
    ctx = PadicContext(5, 1, 8)
    assert embed(Q(1), v, ctx) == ctx.one()
    assert embed(Q(Fraction(1, 2)), v, ctx).residue()[0] == 3
    w = classify_place(K2, 5)
    c2 = place_context(K2, w, 12)
    r = embed(K2.sqrt_d(), w, c2)
    assert r * r == c2.from_rational(2)
    with pytest.raises(DenominatorNotUnit):
        embed(Q(Fraction(1, 5)), v, ctx)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 23])
@given(rats, rats, rats, rats)
def test_embed_is_ring_homomorphism(p, a, b, c, e):
    v = classify_place(K2, p)
    ctx = place_context(K2, v, 16)
    x, y = K2(a, b), K2(c, e)
    try:
        ex, ey = embed(x, v, ctx), embed(y, v, ctx)
    except DenominatorNotUnit:
        return
    assert embed(x + y, v, ctx) == ex + ey
    assert embed(x * y, v, ctx) == ex * ey
    if v.kind == "inert":
        # the local Frobenius restricts to Galois conjugation
        assert embed(x.conjugate(), v, ctx) == ex.frobenius()
    else:
        assert ex.frobenius() == ex


def test_classify_agrees_with_legendre_symbol():
    from sympy import legendre_symbol, primerange
    for d in (-1, 1, -2, 2, -3, 3, 5):
        K = QuadField(d)
        for p in primerange(3, 1000):
            if d % p == 0:
                continue
            v = classify_place(K, p)
            expected = "split" if d == 1 or legendre_symbol(d % p, p) == 1 else "inert"
            assert v.kind == expected and v == classify_place(K, p)


@given(rats, rats)
def test_conjugation_is_involution_with_fixed_field_Q(a, b):
    x = K3(a, b)
    assert galois_conjugate(galois_conjugate(x)) == x
    assert (galois_conjugate(x) == x) == (b == 0)
