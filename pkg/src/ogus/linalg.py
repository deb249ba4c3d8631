"""Exact linear algebra over Q and Z: row reduction, subspace calculus, LLL
and rational number reconstruction.

Vectors are plain lists; entries are ``int`` or ``Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Vector = list
Rows = list


def _frac_rows(rows: Iterable[Sequence]) -> Rows:
    return [[Fraction(x) for x in r] for r in rows]


def rref(rows: Iterable[Sequence], ncols: int | None = None) -> tuple[Rows, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = _frac_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Iterable[Sequence], ncols: int) -> Rows:
    """Basis of {x : rows . x = 0}, one basis vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def span_basis(rows: Iterable[Sequence], ncols: int) -> Rows:
    """Canonical basis (the RREF rows) of the span of ``rows``."""
    rows = list(rows)
    if not rows:
        return []
    return rref(rows, ncols)[0]


def intersect(u: Sequence[Sequence], w: Sequence[Sequence], ncols: int) -> Rows:
    """Canonical basis of span(u) ∩ span(w)."""
    ann = nullspace(u, ncols) if u else [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ann += nullspace(w, ncols) if w else [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    # span(u) = ann(ann(u)) for the standard pairing on Q^n
    if not ann:
        return span_basis([[int(i == j) for j in range(ncols)] for i in range(ncols)], ncols)
    return span_basis(nullspace(ann, ncols), ncols)


def same_span(u: Sequence[Sequence], w: Sequence[Sequence], ncols: int) -> bool:
    return span_basis(u, ncols) == span_basis(w, ncols)


def contains(u: Sequence[Sequence], w: Sequence[Sequence], ncols: int) -> bool:
    """True iff span(w) ⊆ span(u)."""
    return rank(list(u) + list(w)) == rank(u) if u else all(all(x == 0 for x in v) for v in w)


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to a primitive integer vector (first nonzero entry positive)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return [-x for x in ints] if lead < 0 else ints


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Rows:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def identity(n: int) -> Rows:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> Rows:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def charpoly(a: Sequence[Sequence]) -> list[Fraction]:
    """Characteristic polynomial det(x - A), coefficients from the constant term up.

    Berkowitz's division-free recursion, so it works unchanged over any
    commutative ring whose elements support +, -, *.
    """
    return berkowitz(a, one=Fraction(1), zero=Fraction(0))


def berkowitz(a: Sequence[Sequence], one, zero) -> list:
    n = len(a)
    if n == 0:
        return [one]
    # vect holds coefficients highest degree first
    vect = [one, -a[0][0]]
    for r in range(1, n):
        # leading principal r x r block and the border of row/col r
        R = [a[r][j] for j in range(r)]
        C = [a[i][r] for i in range(r)]
        Ablk = [row[:r] for row in a[:r]]
        Q = [zero] * (r + 2)
        Q[0] = one
        Q[1] = -a[r][r]
        Ck = C
        for k in range(2, r + 2):
            Q[k] = -sum((R[i] * Ck[i] for i in range(r)), zero)
            Ck = [sum((Ablk[i][j] * Ck[j] for j in range(r)), zero) for i in range(r)]
        # Toeplitz product: new vect = T(Q) * vect
        new = [zero] * (r + 2)
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                acc = acc + Q[i - j] * vect[j]
            new[i] = acc
        vect = new
    return list(reversed(vect))


# -- lattices --------------------------------------------------------------

def lll(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> tuple[list[list[int]], list[Fraction]]:
    """LLL-reduce a basis of linearly independent integer vectors.

    Returns the reduced basis and the squared Gram-Schmidt norms.
    """
    b = [list(map(int, v)) for v in basis]
    n = len(b)
    if n == 0:
        return [], []

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar: list[list[Fraction]] = []
    B: list[Fraction] = []
    for i in range(n):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            mu[i][j] = Fraction(dot(b[i], bstar[j])) / B[j] if B[j] else Fraction(0)
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        B.append(dot(v, v))
        if B[-1] == 0:
            raise ValueError("basis vectors are linearly dependent")

    def size_reduce(k, l):
        q = round(mu[k][l])
        if q:
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            for j in range(l):
                mu[k][j] -= q * mu[l][j]
            mu[k][l] -= q

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            for l in range(k - 2, -1, -1):
                size_reduce(k, l)
            k += 1
            continue
        m = mu[k][k - 1]
        Bn = B[k] + m * m * B[k - 1]
        mu[k][k - 1] = m * B[k - 1] / Bn
        B[k] = B[k - 1] * B[k] / Bn
        B[k - 1] = Bn
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        for i in range(k + 1, n):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
        k = max(1, k - 1)
    return b, B


def rational_reconstruct(u: int, modulus: int, bound: int | None = None) -> Fraction | None:
    """Find a/b ≡ u (mod modulus) with |a|, b <= bound (default sqrt(modulus/2)).

    Returns None when no such fraction exists.
    """
    if bound is None:
        bound = isqrt(modulus // 2)
    u %= modulus
    r0, r1 = modulus, u
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)
