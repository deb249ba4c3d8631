"""Mod-p semilinear data: the p-th power operation, the reduction functor Ψ
and hom spaces in the Bost-Ogus category.

A residue matrix has entries in k_v, stored as pairs (a, b) of integers
mod p meaning a + b*s̄ (b = 0 at split places).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import linalg
from .errors import NotLEffective
from .motive import KummerMotive, delta_section, t_Og
from .numfield import Place, QuadField, QuadraticFieldElement
from .ogcat import OgObject, is_l_effective, twist_object, vector_to_matrix
from .padic import PadicFraction

ResidueMatrix = list  # list[list[tuple[int, int]]]


@dataclass
class BOgObject:
    field: QuadField
    dim: int
    residues: dict  # Place -> ResidueMatrix, the matrix of ♭F_v (σ̄-semilinear)

    @property
    def places(self) -> list:
        return sorted(self.residues)


def _diag(ones: int, zeros: int) -> ResidueMatrix:
    n = ones + zeros
    return [[(1, 0) if i == j and i < ones else (0, 0) for j in range(n)] for i in range(n)]


Kind = Union[str, tuple]


def pth_power_op(kind: Kind, v: Place | None = None) -> ResidueMatrix:
    """Lie of the p-th power map: "Ga" -> 0, "Gm" -> x |-> x^p, ("product", s, r) -> diag(I_s, 0_r)."""
    if kind == "Ga":
        return _diag(0, 1)
    if kind == "Gm":
        return _diag(1, 0)
    if isinstance(kind, tuple) and len(kind) == 3 and kind[0] == "product":
        return _diag(kind[1], kind[2])
    raise ValueError(f"unknown group {kind!r}")


def psi(X: OgObject) -> BOgObject:
    """Reduce the (integral) Frobenius matrices of an l-effective object mod p."""
    leff = is_l_effective(X)
    if not leff:
        raise NotLEffective(leff.witness)
    residues = {}
    for v in X.places:
        F = X.frobenii[v]
        residues[v] = [[PadicFraction(x, F.shift).as_element().residue() for x in row] for row in F.integral]
    return BOgObject(X.field, X.dim, residues)


def t_BOg(M: KummerMotive, places: Sequence[Place] | None = None, m: int = 40) -> BOgObject:
    """Ψ(T_Og(M)(-1)), after checking Λ ≡ 0 mod p at each place."""
    X = t_Og(M, places, m)
    for v in X.places:
        lam = delta_section(M, v, m).matrix()
        if any(x.valuation() < 1 for row in lam for x in row):
            raise ValueError(f"{v}: logarithm matrix is not divisible by p")
    return psi(twist_object(X, -1))


def t_BOg_direct(M: KummerMotive, places: Sequence[Place]) -> BOgObject:
    """Lie(G^♮) with G^♮ = G_m^s x G_a^r: the p-th power operation at every place."""
    return BOgObject(M.field, M.dim, {v: pth_power_op(("product", M.s, M.r), v) for v in places})


def _lift(res: tuple[int, int], v: Place, field: QuadField) -> QuadraticFieldElement:
    """Smallest representative in O_K of a residue class (symmetric residues)."""
    def sym(a):
        a %= v.p
        return a - v.p if a > v.p // 2 else a
    a, b = res
    if v.kind == "inert":
        return QuadraticFieldElement(sym(a), sym(b), field)
    return QuadraticFieldElement(sym(a), 0, field)


@dataclass
class BOgHomSolution:
    basis: list  # matrices over K
    dimension: int  # over Q


def bog_hom_space(X: BOgObject, Y: BOgObject) -> BOgHomSolution:
    """K-matrices Z with Z ♭F_X = ♭F_Y σ̄(Z) at every shared place.

    The residue matrices are lifted to their smallest O_K representatives
    and the condition is imposed exactly over Q, with σ acting as Galois
    conjugation at inert places and trivially at split ones.
    """
    field = X.field
    deg = field.degree
    dm, dn = X.dim, Y.dim
    nvars = dm * dn * deg
    places = [v for v in X.places if v in Y.residues]
    rows = []
    for v in places:
        FX = [[_lift(e, v, field) for e in row] for row in X.residues[v]]
        FY = [[_lift(e, v, field) for e in row] for row in Y.residues[v]]
        # column u of the constraint: L(ω E_ij) = ω E_ij FX - FY σ(ω) E_ij
        cols = []
        for i in range(dn):
            for j in range(dm):
                for c in range(deg):
                    w = QuadraticFieldElement(int(c == 0), int(c == 1), field)
                    sw = w.conjugate() if v.kind == "inert" else w
                    col = {}
                    for b in range(dm):
                        col[(i, b)] = col.get((i, b), 0) + w * FX[j][b]
                    for a in range(dn):
                        col[(a, j)] = col.get((a, j), 0) - FY[a][i] * sw
                    cols.append(col)
        for a in range(dn):
            for b in range(dm):
                for t in range(deg):
                    row = []
                    for u in range(nvars):
                        x = cols[u].get((a, b), 0)
                        x = x if isinstance(x, QuadraticFieldElement) else QuadraticFieldElement(x, 0, field)
                        row.append(x.a if t == 0 else x.b)
                    rows.append(row)
    basis = linalg.nullspace(rows, nvars) if rows else linalg.identity(nvars)
    mats = [vector_to_matrix(vec, field, dn, dm) for vec in basis]
    return BOgHomSolution(mats, len(mats))
