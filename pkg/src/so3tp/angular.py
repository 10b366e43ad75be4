"""Clebsch-Gordan coefficients, Wigner d/D matrices, and Wigner 9j symbols.

Conventions: integer angular momenta only, quantum-mechanical
(Condon-Shortley) phases, complex spherical harmonics, active zyz Euler
rotations.  The rotation of degree-j coefficient vectors is ``x' = D x``
with ``D = wigner_d_matrix(j, alpha, beta, gamma)``; a rotation about z by
``t`` has diagonal entries ``exp(-1j * m * t)``.

Clebsch-Gordan values come from the Racah closed-form sum evaluated in
exact rational arithmetic.  The general 9j symbol is the recoupling inner
product between the two coupling orders of four momenta, evaluated by
contracting six CG coefficients over all magnetic quantum numbers -- slow
but exact, which is what the selection-rule machinery requires.  A
closed-form fast path covers the grids with unit spins in the third
column.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cache

import numpy as np

from .exact import SqrtRational, term_add_into, term_from_sqrt, term_mul

__all__ = [
    "triangle_delta",
    "cg",
    "cg_float",
    "cg_zero",
    "wigner_d_matrix",
    "wigner_9j",
    "wigner_9j_spin1",
    "rotation_matrix",
]

_fact = math.factorial


def triangle_delta(a: int, b: int, c: int) -> int:
    """Triangular delta {a,b,c}: 1 iff a, b, c satisfy all triangle inequalities."""
    for x in (a, b, c):
        if x < 0:
            raise ValueError(f"triangle_delta arguments must be non-negative, got {(a, b, c)}")
    return int(a <= b + c and b <= a + c and c <= a + b)


@cache
def _cg_term(j1: int, m1: int, j2: int, m2: int, j3: int, m3: int):
    """C^{j3,m3}_{j1,m1,j2,m2} as an exact radical term (coeff, primes)."""
    if m3 != m1 + m2 or not triangle_delta(j1, j2, j3):
        return Fraction(0), frozenset()
    # Racah sum: the k-sum is rational, the prefactor a square root.
    ksum = Fraction(0)
    k_lo = max(0, j2 - j3 - m1, j1 - j3 + m2)
    k_hi = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    for k in range(k_lo, k_hi + 1):
        den = (_fact(k) * _fact(j1 + j2 - j3 - k) * _fact(j1 - m1 - k)
               * _fact(j2 + m2 - k) * _fact(j3 - j2 + m1 + k) * _fact(j3 - j1 - m2 + k))
        ksum += Fraction(-1 if k % 2 else 1, den)
    if ksum == 0:
        return Fraction(0), frozenset()
    pre = Fraction(
        (2 * j3 + 1) * _fact(j1 + j2 - j3) * _fact(j1 - j2 + j3) * _fact(-j1 + j2 + j3),
        _fact(j1 + j2 + j3 + 1),
    )
    pre *= (_fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2)
            * _fact(j3 + m3) * _fact(j3 - m3))
    return term_from_sqrt(ksum, pre)


@cache
def cg(j1: int, m1: int, j2: int, m2: int, j3: int, m3: int) -> SqrtRational:
    """Exact Clebsch-Gordan coefficient C^{j3,m3}_{j1,m1,j2,m2}.

    Zero when m3 != m1 + m2 or the triangle condition fails.  Component
    indices must satisfy |m_i| <= j_i.
    """
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if j < 0 or abs(m) > j:
            raise ValueError(f"invalid (j, m) = ({j}, {m})")
    return SqrtRational.from_term(_cg_term(j1, m1, j2, m2, j3, m3))


@cache
def cg_float(j1: int, m1: int, j2: int, m2: int, j3: int, m3: int) -> float:
    return float(cg(j1, m1, j2, m2, j3, m3))


def cg_zero(l1: int, l2: int, l3: int) -> SqrtRational:
    """C^{l3,0}_{l1,0,l2,0}; nonzero iff the triangle holds and l1+l2+l3 is even."""
    return cg(l1, 0, l2, 0, l3, 0)


def _wigner_d_small(j: int, beta: float) -> np.ndarray:
    """Real d^j(beta), indexed [m' + j, m + j]."""
    d = np.zeros((2 * j + 1, 2 * j + 1))
    cb = math.cos(beta / 2.0)
    sb = math.sin(beta / 2.0)
    for mp in range(-j, j + 1):
        for m in range(-j, j + 1):
            norm = math.sqrt(_fact(j + mp) * _fact(j - mp) * _fact(j + m) * _fact(j - m))
            total = 0.0
            for k in range(max(0, m - mp), min(j + m, j - mp) + 1):
                num = (-1.0) ** (mp - m + k)
                den = _fact(j + m - k) * _fact(k) * _fact(mp - m + k) * _fact(j - mp - k)
                total += num / den * cb ** (2 * j + m - mp - 2 * k) * sb ** (mp - m + 2 * k)
            d[mp + j, m + j] = norm * total
    return d


def wigner_d_matrix(j: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Wigner D^j matrix for the active zyz rotation (alpha, beta, gamma).

    Returns the (2j+1) x (2j+1) complex matrix D^j_{m,n} with both indices
    running m, n = -j..j, so that rotating a signal on the sphere by g maps
    its degree-j coefficient vector x to D x.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    d = _wigner_d_small(j, beta)
    m = np.arange(-j, j + 1)
    return np.exp(-1j * m[:, None] * alpha) * d * np.exp(-1j * m[None, :] * gamma)


def rotation_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Cartesian 3x3 matrix of the active zyz rotation Rz(alpha) Ry(beta) Rz(gamma)."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    cc, sc = math.cos(gamma), math.sin(gamma)
    rz1 = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]])
    rz2 = np.array([[cc, -sc, 0.0], [sc, cc, 0.0], [0.0, 0.0, 1.0]])
    return rz1 @ ry @ rz2


def _rows_cols(grid):
    (j1, l1, s1), (j2, l2, s2), (j3, l3, s3) = grid
    rows = ((j1, l1, s1), (j2, l2, s2), (j3, l3, s3))
    cols = ((j1, j2, j3), (l1, l2, l3), (s1, s2, s3))
    return rows, cols


@cache
def _wigner_9j_cached(flat: tuple) -> SqrtRational:
    j1, l1, s1, j2, l2, s2, j3, l3, s3 = flat
    grid = ((j1, l1, s1), (j2, l2, s2), (j3, l3, s3))
    rows, cols = _rows_cols(grid)
    for tri in rows + cols:
        if not triangle_delta(*tri):
            # every contraction term carries a CG over this triple, hence 0
            return SqrtRational.from_term((Fraction(0), frozenset()))
    # <(j1 l1)s1, (j2 l2)s2, (s1 s2)s3 | (j1 j2)j3, (l1 l2)l3, (j3 l3)s3>
    # evaluated at the fixed top component m_{s3} = s3 (any choice agrees).
    ms3 = s3
    acc: dict = {}
    for ms1 in range(-s1, s1 + 1):
        ms2 = ms3 - ms1
        if abs(ms2) > s2:
            continue
        t_s12 = _cg_term(s1, ms1, s2, ms2, s3, ms3)
        if t_s12[0] == 0:
            continue
        for mj1 in range(-j1, j1 + 1):
            ml1 = ms1 - mj1
            if abs(ml1) > l1:
                continue
            t_1 = _cg_term(j1, mj1, l1, ml1, s1, ms1)
            if t_1[0] == 0:
                continue
            t_1 = term_mul(t_1, t_s12)
            for mj2 in range(-j2, j2 + 1):
                ml2 = ms2 - mj2
                if abs(ml2) > l2:
                    continue
                mj3 = mj1 + mj2
                ml3 = ml1 + ml2
                if abs(mj3) > j3 or abs(ml3) > l3:
                    continue
                t = term_mul(t_1, _cg_term(j2, mj2, l2, ml2, s2, ms2))
                if t[0] == 0:
                    continue
                t = term_mul(t, _cg_term(j1, mj1, j2, mj2, j3, mj3))
                if t[0] == 0:
                    continue
                t = term_mul(t, _cg_term(l1, ml1, l2, ml2, l3, ml3))
                if t[0] == 0:
                    continue
                t = term_mul(t, _cg_term(j3, mj3, l3, ml3, s3, ms3))
                term_add_into(acc, t)
    norm = (2 * s1 + 1) * (2 * s2 + 1) * (2 * j3 + 1) * (2 * l3 + 1)
    inv = term_from_sqrt(Fraction(1), Fraction(1, norm))
    out: dict = {}
    for primes, coeff in acc.items():
        term_add_into(out, term_mul((coeff, primes), inv))
    return SqrtRational.from_sum(out)


def wigner_9j(grid) -> SqrtRational:
    """Exact Wigner 9j symbol for a 3x3 grid of non-negative integers.

    ``grid`` is ((j1, l1, s1), (j2, l2, s2), (j3, l3, s3)) or the same nine
    values flattened row-major.  Returns zero whenever any row or column
    violates the triangle condition.
    """
    flat = tuple(int(x) for row in grid for x in (row if hasattr(row, "__len__") else (row,)))
    if len(flat) != 9:
        raise ValueError("wigner_9j expects nine entries")
    if any(x < 0 for x in flat):
        raise ValueError("9j entries must be non-negative")
    return _wigner_9j_cached(flat)


def _rfact(n: int) -> Fraction:
    """1/n! with the gamma-pole convention: zero for negative integers."""
    return Fraction(0) if n < 0 else Fraction(1, _fact(n))


# Closed forms for {a+lam, a, 1; b+mu, b, 1; c+nu, c, 1}, one cell per
# (lam, mu, nu).  Each entry maps (a, b, c, s=a+b+c) to (prefactor,
# radicand); the symbol value is pref * sqrt(rad).  Denominator factorials
# use the pole convention via _rfact, so cells evaluate to zero exactly
# where a selection rule fails.
_SPIN1_TABLE = {
    (1, 1, 1): lambda a, b, c, s: (
        1,
        Fraction(_fact(s + 4) * (s - 2 * c + 1) * (s - 2 * b + 1) * (s - 2 * a + 1)
                 * _fact(2 * a) * _fact(2 * b) * _fact(2 * c), 3)
        * _rfact(s + 1) * _rfact(2 * a + 3) * _rfact(2 * b + 3) * _rfact(2 * c + 3)),
    (1, 0, 1): lambda a, b, c, s: (
        c - a,
        Fraction(2 * _fact(s + 3) * _fact(s - 2 * b + 2) * _fact(2 * a) * _fact(2 * b - 1) * _fact(2 * c), 3)
        * _rfact(s + 1) * _rfact(s - 2 * b) * _rfact(2 * a + 3) * _rfact(2 * b + 2) * _rfact(2 * c + 3)),
    (1, -1, 1): lambda a, b, c, s: (
        -1,
        Fraction((s + 2) * (s - 2 * c) * _fact(s - 2 * b + 3) * (s - 2 * a)
                 * _fact(2 * a) * _fact(2 * b - 2) * _fact(2 * c), 3)
        * _rfact(s - 2 * b) * _rfact(2 * a + 3) * _rfact(2 * b + 1) * _rfact(2 * c + 3)),
    (0, 1, 1): lambda a, b, c, s: (
        b - c,
        Fraction(2 * _fact(s + 3) * _fact(s - 2 * a + 2) * _fact(2 * a - 1) * _fact(2 * b) * _fact(2 * c), 3)
        * _rfact(s + 1) * _rfact(s - 2 * a) * _rfact(2 * a + 2) * _rfact(2 * b + 3) * _rfact(2 * c + 3)),
    (0, 0, 1): lambda a, b, c, s: (
        2 * (c + 1),
        Fraction((s + 2) * (s - 2 * c) * (s - 2 * b + 1) * (s - 2 * a + 1)
                 * _fact(2 * a - 1) * _fact(2 * b - 1) * _fact(2 * c), 3)
        * _rfact(2 * a + 2) * _rfact(2 * b + 2) * _rfact(2 * c + 3)),
    (0, -1, 1): lambda a, b, c, s: (
        -(b + c + 1),
        Fraction(2 * _fact(s - 2 * c) * _fact(s - 2 * b + 2) * _fact(2 * a - 1)
                 * _fact(2 * b - 2) * _fact(2 * c), 3)
        * _rfact(s - 2 * c - 2) * _rfact(s - 2 * b) * _rfact(2 * a + 2) * _rfact(2 * b + 1) * _rfact(2 * c + 3)),
    (-1, 1, 1): lambda a, b, c, s: (
        -1,
        Fraction((s + 2) * (s - 2 * c) * (s - 2 * b) * _fact(s - 2 * a + 3)
                 * _fact(2 * a - 2) * _fact(2 * b) * _fact(2 * c), 3)
        * _rfact(s - 2 * a) * _rfact(2 * a + 1) * _rfact(2 * b + 3) * _rfact(2 * c + 3)),
    (-1, 0, 1): lambda a, b, c, s: (
        a + c + 1,
        Fraction(2 * _fact(s - 2 * c) * _fact(s - 2 * a + 2) * _fact(2 * a - 2)
                 * _fact(2 * b - 1) * _fact(2 * c), 3)
        * _rfact(s - 2 * c - 2) * _rfact(s - 2 * a) * _rfact(2 * a + 1) * _rfact(2 * b + 2) * _rfact(2 * c + 3)),
    (-1, -1, 1): lambda a, b, c, s: (
        -1,
        Fraction((s + 1) * _fact(s - 2 * c) * (s - 2 * b + 1) * (s - 2 * a + 1)
                 * _fact(2 * a - 2) * _fact(2 * b - 2) * _fact(2 * c), 3)
        * _rfact(s - 2 * c - 3) * _rfact(2 * a + 1) * _rfact(2 * b + 1) * _rfact(2 * c + 3)),
    (1, 1, 0): lambda a, b, c, s: (
        a - b,
        Fraction(2 * _fact(s + 3) * _fact(s - 2 * c + 2) * _fact(2 * a) * _fact(2 * b) * _fact(2 * c - 1), 3)
        * _rfact(s + 1) * _rfact(s - 2 * c) * _rfact(2 * a + 3) * _rfact(2 * b + 3) * _rfact(2 * c + 2)),
    (1, 0, 0): lambda a, b, c, s: (
        2 * (a + 1),
        Fraction((s + 2) * (s - 2 * c + 1) * (s - 2 * b + 1) * (s - 2 * a)
                 * _fact(2 * a) * _fact(2 * b - 1) * _fact(2 * c - 1), 3)
        * _rfact(2 * a + 3) * _rfact(2 * b + 2) * _rfact(2 * c + 2)),
    (1, -1, 0): lambda a, b, c, s: (
        a + b + 1,
        Fraction(2 * _fact(s - 2 * b + 2) * _fact(s - 2 * a) * _fact(2 * a)
                 * _fact(2 * b - 2) * _fact(2 * c - 1), 3)
        * _rfact(s - 2 * b) * _rfact(s - 2 * a - 2) * _rfact(2 * a + 3) * _rfact(2 * b + 1) * _rfact(2 * c + 2)),
    (0, 1, 0): lambda a, b, c, s: (
        2 * (b + 1),
        Fraction((s + 2) * (s - 2 * c + 1) * (s - 2 * b) * (s - 2 * a + 1)
                 * _fact(2 * a - 1) * _fact(2 * b) * _fact(2 * c - 1), 3)
        * _rfact(2 * a + 2) * _rfact(2 * b + 3) * _rfact(2 * c + 2)),
    (0, 0, 0): lambda a, b, c, s: (0, Fraction(0)),
    (0, -1, 0): lambda a, b, c, s: (
        2 * b,
        Fraction((s + 1) * (s - 2 * c) * (s - 2 * b + 1) * (s - 2 * a)
                 * _fact(2 * a - 1) * _fact(2 * b - 2) * _fact(2 * c - 1), 3)
        * _rfact(2 * a + 2) * _rfact(2 * b + 1) * _rfact(2 * c + 2)),
    (-1, 1, 0): lambda a, b, c, s: (
        -(a + b + 1),
        Fraction(2 * _fact(s - 2 * b) * _fact(s - 2 * a + 2) * _fact(2 * a - 2)
                 * _fact(2 * b) * _fact(2 * c - 1), 3)
        * _rfact(s - 2 * b - 2) * _rfact(s - 2 * a) * _rfact(2 * a + 1) * _rfact(2 * b + 3) * _rfact(2 * c + 2)),
    (-1, 0, 0): lambda a, b, c, s: (
        2 * a,
        Fraction((s + 1) * (s - 2 * c) * (s - 2 * b) * (s - 2 * a + 1)
                 * _fact(2 * a - 2) * _fact(2 * b - 1) * _fact(2 * c - 1), 3)
        * _rfact(2 * a + 1) * _rfact(2 * b + 2) * _rfact(2 * c + 2)),
    (-1, -1, 0): lambda a, b, c, s: (
        b - a,
        Fraction(2 * _fact(s + 1) * _fact(s - 2 * c) * _fact(2 * a - 2)
                 * _fact(2 * b - 2) * _fact(2 * c - 1), 3)
        * _rfact(s - 1) * _rfact(s - 2 * c - 2) * _rfact(2 * a + 1) * _rfact(2 * b + 1) * _rfact(2 * c + 2)),
    (1, 1, -1): lambda a, b, c, s: (
        -1,
        Fraction((s + 2) * _fact(s - 2 * c + 3) * (s - 2 * b) * (s - 2 * a)
                 * _fact(2 * a) * _fact(2 * b) * _fact(2 * c - 2), 3)
        * _rfact(s - 2 * c) * _rfact(2 * a + 3) * _rfact(2 * b + 3) * _rfact(2 * c + 1)),
    (1, 0, -1): lambda a, b, c, s: (
        -(a + c + 1),
        Fraction(2 * _fact(s - 2 * c + 2) * _fact(s - 2 * a) * _fact(2 * a)
                 * _fact(2 * b - 1) * _fact(2 * c - 2), 3)
        * _rfact(s - 2 * c) * _rfact(s - 2 * a - 2) * _rfact(2 * a + 3) * _rfact(2 * b + 2) * _rfact(2 * c + 1)),
    (1, -1, -1): lambda a, b, c, s: (
        -1,
        Fraction((s + 1) * (s - 2 * c + 1) * (s - 2 * b + 1) * _fact(s - 2 * a)
                 * _fact(2 * a) * _fact(2 * b - 2) * _fact(2 * c - 2), 3)
        * _rfact(s - 2 * a - 3) * _rfact(2 * a + 3) * _rfact(2 * b + 1) * _rfact(2 * c + 1)),
    (0, 1, -1): lambda a, b, c, s: (
        b + c + 1,
        Fraction(2 * _fact(s - 2 * c + 2) * _fact(s - 2 * b) * _fact(2 * a - 1)
                 * _fact(2 * b) * _fact(2 * c - 2), 3)
        * _rfact(s - 2 * c) * _rfact(s - 2 * b - 2) * _rfact(2 * a + 2) * _rfact(2 * b + 3) * _rfact(2 * c + 1)),
    # The (0, 0, -1) radicand carries the same 1/3 as every other cell;
    # row-swap symmetry maps it onto (1, 0, 0) at (c-1, b, a).
    (0, 0, -1): lambda a, b, c, s: (
        2 * c,
        Fraction((s + 1) * (s - 2 * c + 1) * (s - 2 * b) * (s - 2 * a)
                 * _fact(2 * a - 1) * _fact(2 * b - 1) * _fact(2 * c - 2), 3)
        * _rfact(2 * a + 2) * _rfact(2 * b + 2) * _rfact(2 * c + 1)),
    (0, -1, -1): lambda a, b, c, s: (
        c - b,
        Fraction(2 * _fact(s + 1) * _fact(s - 2 * a) * _fact(2 * a - 1)
                 * _fact(2 * b - 2) * _fact(2 * c - 2), 3)
        * _rfact(s - 1) * _rfact(s - 2 * a - 2) * _rfact(2 * a + 2) * _rfact(2 * b + 1) * _rfact(2 * c + 1)),
    (-1, 1, -1): lambda a, b, c, s: (
        -1,
        Fraction((s + 1) * (s - 2 * c + 1) * _fact(s - 2 * b) * (s - 2 * a + 1)
                 * _fact(2 * a - 2) * _fact(2 * b) * _fact(2 * c - 2), 3)
        * _rfact(s - 2 * b - 3) * _rfact(2 * a + 1) * _rfact(2 * b + 3) * _rfact(2 * c + 1)),
    (-1, 0, -1): lambda a, b, c, s: (
        a - c,
        Fraction(2 * _fact(s + 1) * _fact(s - 2 * b) * _fact(2 * a - 2)
                 * _fact(2 * b - 1) * _fact(2 * c - 2), 3)
        * _rfact(s - 1) * _rfact(s - 2 * b - 2) * _rfact(2 * a + 1) * _rfact(2 * b + 2) * _rfact(2 * c + 1)),
    (-1, -1, -1): lambda a, b, c, s: (
        1,
        Fraction(_fact(s + 1) * (s - 2 * c) * (s - 2 * b) * (s - 2 * a)
                 * _fact(2 * a - 2) * _fact(2 * b - 2) * _fact(2 * c - 2), 3)
        * _rfact(s - 2) * _rfact(2 * a + 1) * _rfact(2 * b + 1) * _rfact(2 * c + 1)),
}


def wigner_9j_spin1(a: int, lam: int, b: int, mu: int, c: int, nu: int) -> float:
    """Closed-form {a+lam, a, 1; b+mu, b, 1; c+nu, c, 1} with lam, mu, nu in {-1, 0, 1}.

    Fast path for the 9j grids whose third column is (1, 1, 1); agrees with
    the general contraction to 1e-12.
    """
    if lam not in (-1, 0, 1) or mu not in (-1, 0, 1) or nu not in (-1, 0, 1):
        raise ValueError(f"lam, mu, nu must be in {{-1, 0, 1}}, got {(lam, mu, nu)}")
    if min(a, b, c) < 0 or a + lam < 0 or b + mu < 0 or c + nu < 0:
        raise ValueError("row entries must be non-negative")
    rows = ((a + lam, a, 1), (b + mu, b, 1), (c + nu, c, 1))
    cols = ((a + lam, b + mu, c + nu), (a, b, c))
    if any(not triangle_delta(*tri) for tri in rows + cols):
        return 0.0
    pref, rad = _SPIN1_TABLE[(lam, mu, nu)](a, b, c, a + b + c)
    if pref == 0 or rad == 0:
        return 0.0
    return pref * math.sqrt(rad)
