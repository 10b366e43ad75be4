"""Selection rules, interactability, and generalized Gaunt coefficients.

A full coupling path carries nine labels (j1, l1, s1; j2, l2, s2;
j3, l3, s3).  The scalar multiplying C^{j3,m3}_{j1,m1,j2,m2} Y^{l3,s3}_{j3,m3}
in the product expansion of two tensor harmonics is

    sqrt((2j1+1)(2j2+1)(2l1+1)(2l2+1)(2s3+1) / 4 pi)
        * {j1 l1 s1; j2 l2 s2; j3 l3 s3}_9j * C^{l3,0}_{l1,0,l2,0}

For the vector-signal product (all spins 1) this coefficient is nonzero
iff five selection rules hold; the rule flags here are evaluated by direct
pattern matching and cross-checked against the exact-arithmetic
coefficient, never against a float threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import NamedTuple, Optional

from .angular import cg_zero, triangle_delta, wigner_9j
from .exact import SqrtRational

__all__ = [
    "PathKey",
    "RuleReport",
    "TriangleViolation",
    "NotInteractable",
    "generalized_gaunt",
    "generalized_gaunt_exact",
    "vstp_rules",
    "find_valid_ells",
    "interactable",
    "expressivity_count",
]


class TriangleViolation(ValueError):
    """Raised when (j1, j2, j3) fails the triangle condition."""


class NotInteractable(ValueError):
    """Raised for the one non-interactable triple (0, 0, 0)."""


class PathKey(NamedTuple):
    """Full coupling label; l/s fields may be None for pure-CGTP paths."""

    j1: int
    l1: Optional[int] = None
    s1: Optional[int] = None
    j2: int = 0
    l2: Optional[int] = None
    s2: Optional[int] = None
    j3: int = 0
    l3: Optional[int] = None
    s3: Optional[int] = None

    def require_full(self) -> "PathKey":
        if None in self:
            raise ValueError(f"path {self} must carry all nine labels")
        return self


@dataclass(frozen=True)
class RuleReport:
    """Per-rule verdicts for a vector-signal path plus its coefficient."""

    passed: bool
    r1: bool
    r2: bool
    r3: bool
    r4: bool
    r5: bool
    coefficient: float


@cache
def generalized_gaunt_exact(path: PathKey) -> SqrtRational:
    """Exact radical part of the path coefficient, excluding the 1/sqrt(4 pi).

    The returned value is sqrt(dims) * 9j * C^{l3,0}; it is zero exactly
    when the true coefficient is zero, which is what rule checks need.
    """
    p = PathKey(*path).require_full()
    nine = wigner_9j(((p.j1, p.l1, p.s1), (p.j2, p.l2, p.s2), (p.j3, p.l3, p.s3)))
    if nine.is_zero():
        return nine
    prod = nine * cg_zero(p.l1, p.l2, p.l3)
    if prod.is_zero():
        return prod
    dims = ((2 * p.j1 + 1) * (2 * p.j2 + 1) * (2 * p.l1 + 1)
            * (2 * p.l2 + 1) * (2 * p.s3 + 1))
    return SqrtRational(1, Fraction(dims)) * prod


def generalized_gaunt(path: PathKey) -> float:
    """Coefficient of the (j3, l3) output term for a full coupling path."""
    exact = generalized_gaunt_exact(PathKey(*path))
    if exact.is_zero():
        return 0.0
    return float(exact) / math.sqrt(4.0 * math.pi)


def _rule5_violated(js, ls) -> bool:
    """An odd grid symmetry forces the 9j to vanish.

    Swapping two rows fixes the grid when those (j, l) pairs coincide and
    flips the sign when the remaining pair is diagonal; swapping the j and
    l columns fixes the grid when every pair is diagonal and always flips
    the sign (the unit spins make the entry sum odd).  The second clause
    covers paths like (1,1),(2,2),(3,3) that the pairwise pattern alone
    misses.
    """
    for a in range(3):
        b, c = [i for i in range(3) if i != a]
        if js[a] == ls[a] and (js[b], ls[b]) == (js[c], ls[c]):
            return True
    return js == ls


def vstp_rules(path: PathKey) -> RuleReport:
    """Evaluate the five vector-signal selection rules for a path.

    Spins must all be 1 (None spins are taken as 1).  The flags are
    computed by pattern matching only; ``coefficient`` is the generalized
    Gaunt value, and ``passed`` iff all flags hold, which coincides with
    the coefficient being nonzero in exact arithmetic.
    """
    p = PathKey(*path)
    spins = (p.s1, p.s2, p.s3)
    if any(s not in (None, 1) for s in spins):
        raise ValueError(f"vstp_rules applies to spin-(1,1,1) paths, got spins {spins}")
    p = PathKey(p.j1, p.l1, 1, p.j2, p.l2, 1, p.j3, p.l3, 1).require_full()
    js = (p.j1, p.j2, p.j3)
    ls = (p.l1, p.l2, p.l3)
    r1 = all(triangle_delta(j, l, 1) for j, l in zip(js, ls))
    r2 = bool(triangle_delta(*js))
    r3 = bool(triangle_delta(*ls))
    r4 = sum(ls) % 2 == 0
    r5 = not _rule5_violated(js, ls)
    passed = r1 and r2 and r3 and r4 and r5
    return RuleReport(passed=passed, r1=r1, r2=r2, r3=r3, r4=r4, r5=r5,
                      coefficient=generalized_gaunt(p))


def find_valid_ells(j1: int, j2: int, j3: int) -> tuple[int, int, int]:
    """A deterministic (l1, l2, l3) passing all vector-signal rules.

    Sorts the degrees ascending (stable), applies the constructive
    casework on the sorted triple, and maps the orbital labels back to the
    original positions.  Raises NotInteractable for (0, 0, 0) and
    TriangleViolation when the degrees fail the triangle condition.
    """
    js = (j1, j2, j3)
    if any(j < 0 for j in js):
        raise ValueError(f"degrees must be non-negative, got {js}")
    if not triangle_delta(*js):
        raise TriangleViolation(f"{js} violates the triangle condition")
    if js == (0, 0, 0):
        raise NotInteractable("scalar x scalar -> scalar is plain multiplication")
    order = sorted(range(3), key=lambda i: (js[i], i))
    a, b, c = (js[i] for i in order)
    even = (a + b + c) % 2 == 0
    if a < b < c:
        # the fully diagonal (a, b, c) assignment vanishes by column-swap
        # antisymmetry, so the even case offsets the top two degrees
        ells = (a, b + 1, c - 1) if even else (a, b, c - 1)
    elif a == b < c:
        ells = (a, b + 1, c - 1) if even else (a, b + 1, c)
    elif a < b == c:
        ells = (a + 1, b, c - 1) if even else (a + 1, b, c)
    else:  # a == b == c = j > 0
        ells = (a - 1, a, a + 1) if even else (a - 1, a, a)
    out = [0, 0, 0]
    for pos, l in zip(order, ells):
        out[pos] = l
    return tuple(out)


def interactable(j1: int, j2: int, j3: int) -> bool:
    """Whether a vector-signal product of some degree can couple (j1, j2, j3).

    True iff the triangle condition holds and the degrees are not all
    zero; agrees with brute-force search over orbital labels.
    """
    js = (j1, j2, j3)
    if any(j < 0 for j in js):
        raise ValueError(f"degrees must be non-negative, got {js}")
    return bool(triangle_delta(*js)) and js != (0, 0, 0)


def expressivity_count(s: int, L: int) -> int:
    """Number of (j, l) keys with {j, l, s} = 1 and l <= L.

    Bounds how many distinct degree-j inputs a spin-s signal of band
    limit L can carry; grows as (2s+1)(L+1) for L >> s.
    """
    if s < 0 or L < 0:
        raise ValueError("s and L must be non-negative")
    return sum(2 * min(l, s) + 1 for l in range(L + 1))
