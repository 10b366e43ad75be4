"""Spherical grids and scalar spherical harmonic transforms.

Complex spherical harmonics with Condon-Shortley phase throughout:

    Y^m_l(theta, phi) = Lambda^m_l(cos theta) * exp(1j * m * phi)

with Lambda the fully normalized associated Legendre function carrying the
(-1)^m phase, so that integral(Y^m1*_l1 Y^m2_l2) = delta delta and
(-1)^m Y^{-m}_l = conj(Y^m_l).

Grids pair Gauss-Legendre nodes in cos(theta) with uniform phi nodes.  A
grid of exactness degree Lg integrates any product of harmonics with total
theta degree <= 2 Lg and phi frequency below 2 Lg + 1 exactly, which makes
the synthesis/analysis round trip exact for band-limited signals.  Both
transforms are the separable O(Lg^3) method: an associated-Legendre
contraction over theta and a plain DFT matrix product over phi (fixed
summation order, deterministic).

Analysis integrates against conj(Y^m_l); spherical harmonic expansions use
plain Y^m_l.  Coefficient containers carry one complex block per degree j,
optionally tagged (tags distinguish multiplicity, e.g. source paths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _dft_matrix(n_phi: int, L: int, sign: int) -> np.ndarray:
    """exp(sign * 1j * m * phi_k) as [m + L, k] for uniform phi nodes."""
    ms = np.arange(-L, L + 1)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return np.exp(sign * 1j * np.outer(ms, phi))


@lru_cache(maxsize=256)
def _padded_legendre(Lg: int, L: int):
    """Zero-padded Legendre tables for batched theta contractions.

    Returns (lam_pad, rows, cols, lis): lam_pad[m+L, i, li] holds
    Lambda^m_{|m|+li}(cos theta_i), and the index triplet maps the packed
    (l, m) coefficient layout onto the padded (m, li) layout.
    """
    grid = make_grid(Lg)
    lam_pad = np.zeros((2 * L + 1, grid.n_theta, L + 1))
    for m in range(-L, L + 1):
        lam_pad[m + L, :, : L - abs(m) + 1] = grid.lam(m)[:, : L - abs(m) + 1]
    ms = np.arange(-L, L + 1)
    lens = L + 1 - np.abs(ms)
    cols = np.repeat(ms + L, lens)
    lis = np.concatenate([np.arange(n) for n in lens])
    rows = np.abs(cols - L) + lis
    return lam_pad, rows, cols, lis

from .angular import cg, cg_zero
from .flops import FlopCounter

__all__ = [
    "SphereGrid",
    "ScalarSignal",
    "IrrepCoeffs",
    "make_grid",
    "sh_eval",
    "to_sphere",
    "from_sphere",
    "gaunt_coefficient",
    "random_coeffs",
    "rotate_coeffs",
]


def _legendre_tables(cos_theta: np.ndarray, lmax: int) -> list[np.ndarray]:
    """Per-order tables lam[m][i, l-m] = Lambda^m_l(cos_theta[i]), l = m..lmax."""
    x = cos_theta
    sin_theta = np.sqrt(1.0 - x * x)
    tables = []
    diag = np.full_like(x, 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(lmax + 1):
        if m > 0:
            diag = -math.sqrt((2 * m + 1) / (2.0 * m)) * sin_theta * diag
        tab = np.empty((x.size, lmax - m + 1))
        tab[:, 0] = diag
        if m + 1 <= lmax:
            tab[:, 1] = math.sqrt(2 * m + 3.0) * x * diag
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1) ** 2 - 1.0))
            tab[:, l - m] = a * (x * tab[:, l - m - 1] - b * tab[:, l - m - 2])
        tables.append(tab)
    return tables


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Gauss-Legendre theta nodes x uniform phi nodes, exact to degree Lg."""

    Lg: int
    cos_theta: np.ndarray
    theta: np.ndarray
    theta_weights: np.ndarray
    phi: np.ndarray
    legendre: list[np.ndarray] = field(repr=False)

    @property
    def n_theta(self) -> int:
        return self.cos_theta.size

    @property
    def n_phi(self) -> int:
        return self.phi.size

    def lam(self, m: int) -> np.ndarray:
        """Lambda^m_l table for m possibly negative, columns l = |m|..Lg."""
        tab = self.legendre[abs(m)]
        return -tab if (m < 0 and m % 2) else tab


@lru_cache(maxsize=128)
def make_grid(Lg: int) -> SphereGrid:
    """Grid with Lg+1 Gauss-Legendre theta nodes and 2 Lg + 1 phi nodes."""
    if Lg < 0:
        raise ValueError("Lg must be non-negative")
    x, w = np.polynomial.legendre.leggauss(Lg + 1)
    n_phi = 2 * Lg + 1
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return SphereGrid(
        Lg=Lg,
        cos_theta=x,
        theta=np.arccos(x),
        theta_weights=w,
        phi=phi,
        legendre=_legendre_tables(x, Lg),
    )


@dataclass(eq=False)
class ScalarSignal:
    """Complex samples on a SphereGrid, shape (n_theta, n_phi)."""

    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        expect = (self.grid.n_theta, self.grid.n_phi)
        if self.values.shape != expect:
            raise ValueError(f"signal shape {self.values.shape} != grid shape {expect}")

    def integral(self) -> complex:
        """Quadrature of the signal over the sphere (theta-major order)."""
        phi_mean = self.values.sum(axis=1) * (2.0 * np.pi / self.grid.n_phi)
        return complex(np.dot(self.grid.theta_weights, phi_mean))


def _block_sort_key(key):
    j, tag = key
    return (j, tag is not None, repr(tag))


@dataclass(eq=False)
class IrrepCoeffs:
    """Coefficient blocks indexed by degree j and an optional tag.

    Block (j, tag) is a complex vector of length 2j+1 indexed m = -j..j.
    Untagged blocks (tag None) are plain spherical harmonic coefficients;
    tags carry multiplicity labels such as source paths.
    """

    L: int
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        fixed = {}
        for key, vec in self.blocks.items():
            j, tag = key if isinstance(key, tuple) and len(key) == 2 else (key, None)
            vec = np.asarray(vec, dtype=complex)
            if j < 0 or j > self.L:
                raise ValueError(f"block degree {j} outside 0..L={self.L}")
            if vec.shape != (2 * j + 1,):
                raise ValueError(f"block {key} has length {vec.shape}, want {2 * j + 1}")
            fixed[(j, tag)] = vec
        self.blocks = fixed

    def block(self, j: int, tag=None) -> np.ndarray:
        return self.blocks[(j, tag)]

    def get(self, j: int, tag=None):
        return self.blocks.get((j, tag))

    def set_block(self, j: int, vec, tag=None) -> None:
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (2 * j + 1,):
            raise ValueError(f"block {(j, tag)} has length {vec.shape}, want {2 * j + 1}")
        if j > self.L:
            raise ValueError(f"block degree {j} outside 0..L={self.L}")
        self.blocks[(j, tag)] = vec

    def items(self):
        """Blocks in canonical order: ascending j, untagged first."""
        for key in sorted(self.blocks, key=_block_sort_key):
            yield key, self.blocks[key]

    def single_per_degree(self) -> dict[int, np.ndarray]:
        """Map j -> vector, requiring at most one block per degree."""
        out: dict[int, np.ndarray] = {}
        for (j, _tag), vec in self.items():
            if j in out:
                raise ValueError(f"multiple blocks share degree {j}")
            out[j] = vec
        return out


def sh_eval(l: int, m: int, theta, phi):
    """Y^m_l at (theta, phi); scalars or broadcastable arrays."""
    if l < 0 or abs(m) > l:
        raise ValueError(f"need |m| <= l, got (l, m) = ({l}, {m})")
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    scalar = th.ndim == 0 and ph.ndim == 0
    th, ph = np.broadcast_arrays(np.atleast_1d(th), np.atleast_1d(ph))
    tab = _legendre_tables(np.cos(th).ravel(), l)[abs(m)]
    lam = tab[:, l - abs(m)].reshape(th.shape)
    if m < 0 and m % 2:
        lam = -lam
    out = lam * np.exp(1j * m * ph)
    return complex(out.ravel()[0]) if scalar else out


def _synthesis_core(cmat: np.ndarray, grid: SphereGrid, L: int,
                    flops: FlopCounter | None) -> np.ndarray:
    """Grid samples from a packed coefficient matrix cmat[l, m+L]."""
    n_theta = grid.n_theta
    lam_pad, rows, cols, lis = _padded_legendre(grid.Lg, L)
    cpad = np.zeros((2 * L + 1, L + 1), dtype=complex)
    cpad[cols, lis] = cmat[rows, cols]
    # G[i, m+L] = sum_l Lambda^m_l c^{(l)}_m, batched over m
    G = (np.einsum("mil,ml->im", lam_pad, cpad.real)
         + 1j * np.einsum("mil,ml->im", lam_pad, cpad.imag))
    values = G @ _dft_matrix(grid.n_phi, L, +1)
    if flops is not None:
        flops.add(n_theta * (L + 1) ** 2 + n_theta * (2 * L + 1) * grid.n_phi)
    return values


def _analysis_core(values: np.ndarray, grid: SphereGrid, L: int,
                   flops: FlopCounter | None) -> np.ndarray:
    """Packed coefficient matrix xmat[l, m+L] from grid samples."""
    n_theta = grid.n_theta
    F = values @ _dft_matrix(grid.n_phi, L, -1).T * (2.0 * np.pi / grid.n_phi)
    Fw = F * grid.theta_weights[:, None]
    lam_pad, rows, cols, lis = _padded_legendre(grid.Lg, L)
    # xpad[m+L, li] = sum_i w_i Lambda^m_{|m|+li} F[i, m+L], batched over m
    xpad = (np.einsum("mil,im->ml", lam_pad, Fw.real)
            + 1j * np.einsum("mil,im->ml", lam_pad, Fw.imag))
    xmat = np.zeros((L + 1, 2 * L + 1), dtype=complex)
    xmat[rows, cols] = xpad[cols, lis]
    if flops is not None:
        flops.add(n_theta * grid.n_phi * (2 * L + 1) + n_theta * (L + 1) ** 2)
    return xmat


def to_sphere(x: IrrepCoeffs, grid: SphereGrid, flops: FlopCounter | None = None) -> ScalarSignal:
    """Synthesize f(theta, phi) = sum_{l,m} x^(l)_m Y^m_l on the grid.

    Requires grid.Lg >= x.L.  Tags are ignored; at most one block per
    degree may be present.
    """
    if grid.Lg < x.L:
        raise ValueError(f"grid exactness degree {grid.Lg} < band limit {x.L}")
    L = x.L
    cmat = np.zeros((L + 1, 2 * L + 1), dtype=complex)  # [l, m+L]
    for l, vec in x.single_per_degree().items():
        cmat[l, L - l:L + l + 1] = vec
    return ScalarSignal(grid=grid, values=_synthesis_core(cmat, grid, L, flops))


def from_sphere(f: ScalarSignal, L: int, flops: FlopCounter | None = None) -> IrrepCoeffs:
    """Analyze a signal into coefficients x^(l)_m = integral(f * conj(Y^m_l)).

    Exact for signals band-limited at degree <= grid.Lg when L <= grid.Lg.
    """
    grid = f.grid
    if L > grid.Lg:
        raise ValueError(f"analysis degree {L} > grid exactness degree {grid.Lg}")
    xmat = _analysis_core(f.values, grid, L, flops)
    return IrrepCoeffs(L=L, blocks={(l, None): xmat[l, L - l:L + l + 1].copy()
                                    for l in range(L + 1)})


def gaunt_coefficient(l1: int, m1: int, l2: int, m2: int, l3: int, m3: int) -> float:
    """integral(Y^m1_l1 Y^m2_l2 conj(Y^m3_l3)) over the sphere.

    Equals sqrt((2l1+1)(2l2+1) / (4 pi (2l3+1))) C^{l3,m3}_{l1,m1,l2,m2}
    C^{l3,0}_{l1,0,l2,0}; zero unless m3 = m1 + m2, the triangle condition
    holds, and l1 + l2 + l3 is even.
    """
    for l, m in ((l1, m1), (l2, m2), (l3, m3)):
        if l < 0 or abs(m) > l:
            raise ValueError(f"need |m| <= l, got (l, m) = ({l}, {m})")
    exact = cg(l1, m1, l2, m2, l3, m3) * cg_zero(l1, l2, l3)
    if exact.is_zero():
        return 0.0
    scale = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (4.0 * math.pi * (2 * l3 + 1)))
    return scale * float(exact)


def random_coeffs(L: int, rng: np.random.Generator) -> IrrepCoeffs:
    """Standard complex normal coefficients, one untagged block per degree."""
    blocks = {}
    for l in range(L + 1):
        blocks[(l, None)] = rng.standard_normal(2 * l + 1) + 1j * rng.standard_normal(2 * l + 1)
    return IrrepCoeffs(L=L, blocks=blocks)


def rotate_coeffs(x: IrrepCoeffs, alpha: float, beta: float, gamma: float) -> IrrepCoeffs:
    """Apply the rotation blockwise: each degree-j block maps to D^j x."""
    from .angular import wigner_d_matrix

    blocks = {}
    for (j, tag), vec in x.items():
        blocks[(j, tag)] = wigner_d_matrix(j, alpha, beta, gamma) @ vec
    return IrrepCoeffs(L=x.L, blocks=blocks)
