"""Tests for selection rules, ell assignment, and expressivity counting."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from so3tp.angular import triangle_delta
from so3tp.rules import (
    NotInteractable,
    PathKey,
    TriangleViolation,
    expressivity_count,
    find_valid_ells,
    generalized_gaunt,
    generalized_gaunt_exact,
    interactable,
    vstp_rules,
)
from so3tp.sht import gaunt_coefficient
from so3tp.angular import cg_float


# ---------------------------------------------------------------- coefficient

def test_generalized_gaunt_reduces_to_classical():
    # all-spin-zero paths reduce to the classical Gaunt prefactor times C^{l3,0}
    for l1, l2, l3 in [(0, 0, 0), (1, 1, 2), (2, 2, 2), (0, 1, 1), (3, 3, 4)]:
        gg = generalized_gaunt(PathKey(l1, l1, 0, l2, l2, 0, l3, l3, 0))
        expect = (math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (4 * math.pi * (2 * l3 + 1)))
                  * cg_float(l1, 0, l2, 0, l3, 0))
        assert gg == pytest.approx(expect, abs=1e-14)
        # consistency with the triple-product integral
        if cg_float(l1, 0, l2, 0, l3, 0):
            ratio = gaunt_coefficient(l1, 0, l2, 0, l3, 0) / cg_float(l1, 0, l2, 0, l3, 0)
            assert gg == pytest.approx(ratio, abs=1e-14)


def test_generalized_gaunt_odd_path_vanishes():
    assert generalized_gaunt(PathKey(1, 1, 1, 1, 1, 1, 1, 1, 1)) == 0.0
    assert generalized_gaunt_exact(PathKey(1, 1, 1, 1, 1, 1, 1, 1, 1)).is_zero()


def test_generalized_gaunt_requires_full_key():
    with pytest.raises(ValueError):
        generalized_gaunt(PathKey(1, None, None, 1, None, None, 1, None, None))


# ---------------------------------------------------------------- rule flags

def test_rule_examples():
    r = vstp_rules(PathKey(1, 0, 1, 1, 1, 1, 1, 1, 1))
    assert r.passed and abs(r.coefficient) > 0
    r = vstp_rules(PathKey(1, 1, 1, 1, 1, 1, 1, 1, 1))
    assert not r.passed and not r.r4 and not r.r5 and r.r1 and r.r2 and r.r3
    r = vstp_rules(PathKey(2, 2, 1, 1, 1, 1, 1, 1, 1))
    assert not r.passed and not r.r5


def test_rule_flags_none_spins_default_to_one():
    r = vstp_rules(PathKey(1, 0, None, 1, 1, None, 1, 1, None))
    assert r.passed


def test_rule_rejects_non_unit_spins():
    with pytest.raises(ValueError):
        vstp_rules(PathKey(1, 1, 0, 1, 1, 0, 1, 1, 0))


def test_all_diagonal_distinct_paths_vanish():
    # fully diagonal paths with distinct degrees: every pairwise pattern
    # passes, but the coupling vanishes by column-swap antisymmetry
    for js in [(1, 2, 3), (2, 3, 4), (1, 3, 4)]:
        p = PathKey(js[0], js[0], 1, js[1], js[1], 1, js[2], js[2], 1)
        r = vstp_rules(p)
        assert not r.r5 and not r.passed
        assert generalized_gaunt_exact(p).is_zero()


def test_rule_iff_exhaustive_small():
    # flags <=> exact nonzero coefficient, exhaustive over j, l <= 3
    for j1, l1, j2, l2, j3, l3 in itertools.product(range(4), repeat=6):
        p = PathKey(j1, l1, 1, j2, l2, 1, j3, l3, 1)
        rep = vstp_rules(p)
        nz = not generalized_gaunt_exact(p).is_zero()
        assert rep.passed == nz, p
        assert rep.passed == (abs(rep.coefficient) > 0), p


# ---------------------------------------------------------------- ell assignment

def test_find_valid_ells_examples():
    # distinct even-sum degrees: the all-diagonal assignment vanishes by
    # column-swap antisymmetry, so the top two degrees are offset
    assert find_valid_ells(1, 2, 3) == (1, 3, 2)
    assert find_valid_ells(1, 1, 1) == (0, 1, 1)
    with pytest.raises(NotInteractable):
        find_valid_ells(0, 0, 0)
    with pytest.raises(TriangleViolation):
        find_valid_ells(1, 2, 4)
    with pytest.raises(ValueError):
        find_valid_ells(-1, 1, 1)


def test_find_valid_ells_deterministic_and_permutation_consistent():
    assert find_valid_ells(2, 1, 1) == find_valid_ells(2, 1, 1)
    for js in [(1, 2, 3), (2, 1, 1), (1, 1, 2), (3, 3, 3)]:
        ells = find_valid_ells(*js)
        path = PathKey(js[0], ells[0], 1, js[1], ells[1], 1, js[2], ells[2], 1)
        assert vstp_rules(path).passed


@pytest.mark.parametrize("jmax", [6])
def test_find_valid_ells_complete(jmax):
    for j1 in range(jmax + 1):
        for j2 in range(jmax + 1):
            for j3 in range(jmax + 1):
                if not triangle_delta(j1, j2, j3) or (j1, j2, j3) == (0, 0, 0):
                    continue
                ells = find_valid_ells(j1, j2, j3)
                path = PathKey(j1, ells[0], 1, j2, ells[1], 1, j3, ells[2], 1)
                assert vstp_rules(path).passed, (j1, j2, j3, ells)
                assert not generalized_gaunt_exact(path).is_zero(), (j1, j2, j3, ells)


# ---------------------------------------------------------------- interactable

def test_interactable_examples():
    assert interactable(1, 1, 1)
    assert not interactable(1, 2, 4)
    assert not interactable(0, 0, 0)


def test_interactable_matches_bruteforce():
    # agreement with exhaustive search over orbital labels <= jmax + 1
    for j1 in range(5):
        for j2 in range(5):
            for j3 in range(5):
                lmax = max(j1, j2, j3) + 1
                found = any(
                    vstp_rules(PathKey(j1, l1, 1, j2, l2, 1, j3, l3, 1)).passed
                    for l1 in range(lmax + 1)
                    for l2 in range(lmax + 1)
                    for l3 in range(lmax + 1))
                assert interactable(j1, j2, j3) == found, (j1, j2, j3)


def test_gtp_exclusion():
    # spin-zero paths are nonzero exactly on even triangle-satisfying triples
    for l1 in range(5):
        for l2 in range(5):
            for l3 in range(5):
                p = PathKey(l1, l1, 0, l2, l2, 0, l3, l3, 0)
                nz = not generalized_gaunt_exact(p).is_zero()
                expect = bool(triangle_delta(l1, l2, l3)) and (l1 + l2 + l3) % 2 == 0
                assert nz == expect, (l1, l2, l3)


# ---------------------------------------------------------------- expressivity

def test_expressivity_examples():
    assert expressivity_count(0, 2) == 3
    assert expressivity_count(1, 1) == 4
    assert expressivity_count(1, 0) == 1


def test_expressivity_scalar_is_band_count():
    for L in range(65):
        assert expressivity_count(0, L) == L + 1


@given(st.integers(0, 4), st.integers(0, 32))
@settings(max_examples=60)
def test_expressivity_matches_enumeration(s, L):
    brute = sum(1 for l in range(L + 1) for j in range(0, l + s + 1)
                if triangle_delta(j, l, s))
    assert expressivity_count(s, L) == brute


def test_expressivity_asymptotic_ratio():
    for s in (0, 1, 2):
        count = expressivity_count(s, 64)
        assert abs(count / ((2 * s + 1) * 65) - 1.0) <= 0.1
