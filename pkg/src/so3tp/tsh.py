"""Tensor spherical harmonics and spin-valued spherical signals.

A spin-s signal maps the sphere to C^(2s+1) and transforms with D^s on its
components while the domain rotates.  The tensor spherical harmonic basis
couples a scalar harmonic of degree l with the spin-s components into
total degree j:

    (Y^{l,s}_{j,mj})_{ms} = sum_{ml} C^{j,mj}_{l,ml,s,ms} Y^{ml}_l

defined for key triples with {j, l, s} = 1.  Coefficient containers are
keyed by (j, l); a degree-j block is a complex vector indexed mj = -j..j.

Encode/decode factor through the scalar transforms: the coupling step
turns (j, l) blocks into per-component scalar coefficients (sparse in mj =
ml + ms), then one scalar synthesis or analysis runs per spin component.
Decoding inverts the coupling by Clebsch-Gordan orthogonality, so
decode(encode(x)) = x whenever the grid resolves the band limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .angular import cg_float, triangle_delta, wigner_d_matrix
from .flops import FlopCounter
from .sht import SphereGrid, _analysis_core, _synthesis_core, make_grid, sh_eval

__all__ = [
    "SpinSignal",
    "TshCoeffs",
    "valid_pairs",
    "tsh_eval",
    "tsh_encode",
    "tsh_decode",
    "tsh_evaluate",
    "tsh_orthonormality_check",
    "random_tsh_coeffs",
    "rotate_tsh_coeffs",
]


def valid_pairs(s: int, L: int) -> list[tuple[int, int]]:
    """All (j, l) with {j, l, s} = 1 and l <= L, ascending j then l."""
    pairs = [(j, l) for l in range(L + 1) for j in range(abs(l - s), l + s + 1)]
    return sorted(pairs)


@dataclass(eq=False)
class SpinSignal:
    """Complex samples with 2s+1 spin components per grid point."""

    s: int
    grid: SphereGrid
    values: np.ndarray  # (n_theta, n_phi, 2s+1), component index ms = -s..s

    def __post_init__(self):
        expect = (self.grid.n_theta, self.grid.n_phi, 2 * self.s + 1)
        if self.s < 0:
            raise ValueError("spin must be non-negative")
        if self.values.shape != expect:
            raise ValueError(f"signal shape {self.values.shape} != {expect}")


@dataclass(eq=False)
class TshCoeffs:
    """Tensor-harmonic coefficient blocks keyed by (j, l).

    Every key satisfies {j, l, s} = 1 and l <= L; block (j, l) has length
    2j+1.  Canonical block order is ascending j, then ascending l.
    """

    s: int
    L: int
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        fixed = {}
        for (j, l), vec in self.blocks.items():
            vec = np.asarray(vec, dtype=complex)
            self._check_key(j, l)
            if vec.shape != (2 * j + 1,):
                raise ValueError(f"block {(j, l)} has length {vec.shape}, want {2 * j + 1}")
            fixed[(j, l)] = vec
        self.blocks = fixed

    def _check_key(self, j: int, l: int) -> None:
        if l > self.L:
            raise ValueError(f"block {(j, l)} exceeds band limit L={self.L}")
        if j < 0 or l < 0 or not triangle_delta(j, l, self.s):
            raise ValueError(f"key {(j, l)} violates the triangle {{j, l, s={self.s}}}")

    def block(self, j: int, l: int) -> np.ndarray:
        return self.blocks[(j, l)]

    def get(self, j: int, l: int):
        return self.blocks.get((j, l))

    def set_block(self, j: int, l: int, vec) -> None:
        vec = np.asarray(vec, dtype=complex)
        self._check_key(j, l)
        if vec.shape != (2 * j + 1,):
            raise ValueError(f"block {(j, l)} has length {vec.shape}, want {2 * j + 1}")
        self.blocks[(j, l)] = vec

    def items(self):
        for key in sorted(self.blocks):
            yield key, self.blocks[key]


def tsh_eval(j: int, m_j: int, l: int, s: int, theta, phi) -> np.ndarray:
    """One tensor harmonic at (theta, phi): components ms = -s..s.

    Scalar angles give shape (2s+1,); array angles broadcast to
    shape (..., 2s+1).  With s = 0 this reduces to the scalar harmonic.
    """
    if not triangle_delta(j, l, s):
        raise ValueError(f"(j, l, s) = {(j, l, s)} violates the triangle condition")
    if abs(m_j) > j:
        raise ValueError(f"|m_j| <= j required, got {(j, m_j)}")
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    ph = np.asarray(phi, dtype=float)
    th_b, _ = np.broadcast_arrays(th, np.atleast_1d(ph))
    out = np.zeros(th_b.shape + (2 * s + 1,), dtype=complex)
    for m_s in range(-s, s + 1):
        m_l = m_j - m_s
        if abs(m_l) > l:
            continue
        coef = cg_float(l, m_l, s, m_s, j, m_j)
        if coef:
            out[..., m_s + s] = coef * sh_eval(l, m_l, theta, phi)
    if np.ndim(theta) == 0 and np.ndim(phi) == 0:
        return out.reshape(2 * s + 1)
    return out


@lru_cache(maxsize=None)
def _coupling_matrix(j: int, l: int, s: int) -> np.ndarray:
    """W[ml + l, ms + s] = C^{j, ml+ms}_{l, ml, s, ms}, zero out of range."""
    W = np.zeros((2 * l + 1, 2 * s + 1))
    for m_l in range(-l, l + 1):
        for m_s in range(-s, s + 1):
            if abs(m_l + m_s) <= j:
                W[m_l + l, m_s + s] = cg_float(l, m_l, s, m_s, j, m_l + m_s)
    return W


def _ml_band(j: int, l: int, m_s: int) -> tuple[int, int]:
    """Inclusive ml range coupling into |ml + ms| <= j."""
    return max(-l, -j - m_s), min(l, j - m_s)


@lru_cache(maxsize=None)
def _coupling_plan(j: int, l: int, s: int):
    """Banded slices for coupling one (j, l) block: (W, bands, macs).

    bands holds (ms + s, ml slice into the W/B tables, mj slice into the
    degree-j block) per spin component.
    """
    W = _coupling_matrix(j, l, s)
    bands = []
    macs = 0
    for m_s in range(-s, s + 1):
        lo, hi = _ml_band(j, l, m_s)
        if lo > hi:
            continue
        bands.append((m_s + s, slice(lo + l, hi + l + 1),
                      slice(lo + m_s + j, hi + m_s + j + 1)))
        macs += hi - lo + 1
    return W, tuple(bands), macs


def _couple_to_scalar(x: TshCoeffs, flops: FlopCounter | None):
    """Per-component scalar coefficients B[l][ms+s, ml+l] from (j, l) blocks."""
    s = x.s
    B: dict[int, np.ndarray] = {}
    macs = 0
    for (j, l), vec in x.items():
        tab = B.setdefault(l, np.zeros((2 * s + 1, 2 * l + 1), dtype=complex))
        W, bands, n = _coupling_plan(j, l, s)
        for comp, ml_slice, mj_slice in bands:
            tab[comp, ml_slice] += W[ml_slice, comp] * vec[mj_slice]
        macs += n
    if flops is not None:
        flops.add(macs)
    return B


def tsh_encode(x: TshCoeffs, grid: SphereGrid, flops: FlopCounter | None = None) -> SpinSignal:
    """Synthesize the spin-s signal sum_{j,l,m} x^(j,l)_m Y^{l,s}_{j,m} on the grid."""
    if grid.Lg < x.L:
        raise ValueError(f"grid exactness degree {grid.Lg} < band limit {x.L}")
    s = x.s
    B = _couple_to_scalar(x, flops)
    Lb = max(B) if B else 0
    values = np.empty((grid.n_theta, grid.n_phi, 2 * s + 1), dtype=complex)
    for comp in range(2 * s + 1):
        cmat = np.zeros((Lb + 1, 2 * Lb + 1), dtype=complex)
        for l, tab in B.items():
            cmat[l, Lb - l:Lb + l + 1] = tab[comp]
        values[:, :, comp] = _synthesis_core(cmat, grid, Lb, flops)
    return SpinSignal(s=s, grid=grid, values=values)


def tsh_decode(f: SpinSignal, L: int, flops: FlopCounter | None = None) -> TshCoeffs:
    """Analyze a spin-s signal into (j, l) blocks with l <= L.

    Component-wise scalar analysis produces B^l_{ml,ms}; Clebsch-Gordan
    orthogonality then extracts each block:
    z^(j,l)_{mj} = sum_{ml,ms} C^{j,mj}_{l,ml,s,ms} B^l_{ml,ms}.
    """
    grid = f.grid
    if L > grid.Lg:
        raise ValueError(f"analysis degree {L} > grid exactness degree {grid.Lg}")
    s = f.s
    xmats = [_analysis_core(f.values[:, :, c], grid, L, flops) for c in range(2 * s + 1)]
    blocks = {}
    macs = 0
    for j, l in valid_pairs(s, L):
        vec = np.zeros(2 * j + 1, dtype=complex)
        W, bands, n = _coupling_plan(j, l, s)
        shift = L - l  # block-relative ml slice -> xmat column slice
        for comp, ml_slice, mj_slice in bands:
            col = slice(ml_slice.start + shift, ml_slice.stop + shift)
            vec[mj_slice] += W[ml_slice, comp] * xmats[comp][l, col]
        blocks[(j, l)] = vec
        macs += n
    if flops is not None:
        flops.add(macs)
    return TshCoeffs(s=s, L=L, blocks=blocks)


def tsh_evaluate(x: TshCoeffs, theta, phi) -> np.ndarray:
    """Direct pointwise synthesis at arbitrary angles, shape (..., 2s+1).

    Slow path for tests and equivariance checks; grids use tsh_encode.
    """
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    ph = np.atleast_1d(np.asarray(phi, dtype=float))
    th_b, ph_b = np.broadcast_arrays(th, ph)
    out = np.zeros(th_b.shape + (2 * x.s + 1,), dtype=complex)
    for (j, l), vec in x.items():
        for m_j in range(-j, j + 1):
            if vec[m_j + j] == 0:
                continue
            out += vec[m_j + j] * tsh_eval(j, m_j, l, x.s, th_b, ph_b)
    return out


def tsh_orthonormality_check(s: int, L: int) -> float:
    """Max deviation of the TSH Gram matrix from identity up to band limit L.

    Inner product: component sum integrated over the sphere with the
    grid quadrature (exact at the working band limits).
    """
    if L < s:
        raise ValueError("need L >= s so at least one key exists")
    grid = make_grid(2 * L)
    pairs = valid_pairs(s, L)
    sigs = []
    for j, l in pairs:
        x = TshCoeffs(s=s, L=L, blocks={})
        for m_j in range(-j, j + 1):
            vec = np.zeros(2 * j + 1, dtype=complex)
            vec[m_j + j] = 1.0
            y = TshCoeffs(s=s, L=L, blocks={(j, l): vec})
            sigs.append(tsh_encode(y, grid).values)
    stack = np.stack(sigs)  # (n_basis, n_theta, n_phi, 2s+1)
    w2d = grid.theta_weights[:, None] * (2.0 * np.pi / grid.n_phi)
    gram = np.einsum("atpc,btpc,tp->ab", stack.conj(), stack, np.broadcast_to(w2d, stack.shape[1:3]))
    return float(np.abs(gram - np.eye(len(sigs))).max())


def random_tsh_coeffs(s: int, L: int, rng: np.random.Generator) -> TshCoeffs:
    """Standard complex normal coefficients on every valid (j, l) key."""
    blocks = {}
    for j, l in valid_pairs(s, L):
        blocks[(j, l)] = rng.standard_normal(2 * j + 1) + 1j * rng.standard_normal(2 * j + 1)
    return TshCoeffs(s=s, L=L, blocks=blocks)


def rotate_tsh_coeffs(x: TshCoeffs, alpha: float, beta: float, gamma: float) -> TshCoeffs:
    """Apply the rotation blockwise: each (j, l) block maps to D^j x."""
    blocks = {}
    for (j, l), vec in x.items():
        blocks[(j, l)] = wigner_d_matrix(j, alpha, beta, gamma) @ vec
    return TshCoeffs(s=x.s, L=x.L, blocks=blocks)
