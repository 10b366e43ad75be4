"""Tensor product operations on irrep coefficients and spherical signals.

Two families:

* Coefficient-space Clebsch-Gordan products (``cgtp_path`` /
  ``cgtp_full``), in a ``naive`` variant that loops every (m1, m2, m3)
  triple and a ``sparse`` variant restricted to m3 = m1 + m2.

* Grid products: encode inputs as spin signals, couple them pointwise,
  and decode (``istp``), with the scalar (``gtp``) and vector (``vstp``)
  specializations.  A single coefficient-space path can be recovered from
  one vector-signal product by dividing out the path coefficient
  (``simulate_cgtp_path``).

Every operation reports the complex multiply-accumulate count it
performed; counts are data independent and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .angular import cg_float, triangle_delta
from .flops import FlopCounter
from .rules import PathKey, find_valid_ells, generalized_gaunt
from .sht import IrrepCoeffs, SphereGrid, make_grid
from .tsh import SpinSignal, TshCoeffs, tsh_decode, tsh_encode

__all__ = [
    "PathKey",
    "TpoResult",
    "NumericalDegeneracy",
    "cgtp_path",
    "cgtp_full",
    "pointwise_spin_tp",
    "istp",
    "gtp",
    "vstp",
    "simulate_cgtp_path",
]

class NumericalDegeneracy(ArithmeticError):
    """A path coefficient expected to be nonzero fell below threshold."""


@dataclass(eq=False)
class TpoResult:
    """Product output plus the complex-MAC count spent producing it."""

    output: Union[IrrepCoeffs, TshCoeffs]
    flops: int


def sparse_pair_count(j1: int, j2: int, j3: int) -> int:
    """#{(m1, m2): |m1| <= j1, |m2| <= j2, |m1 + m2| <= j3}."""
    t = j1 + j2 - j3
    full = (2 * j1 + 1) * (2 * j2 + 1)
    return full - t * (t + 1) if t > 0 else full


@lru_cache(maxsize=4096)
def _log_factorials(n: int) -> np.ndarray:
    return np.array([math.lgamma(k + 1) for k in range(n + 1)])


def _cg_block_float(j1: int, j2: int, j3: int) -> np.ndarray:
    """All C^{j3,m1+m2}_{j1,m1,j2,m2} as array [m1+j1, m2+j2], via log-space Racah.

    The Racah k-sum is evaluated with the largest term factored out, so
    factorial products never overflow.  Relative accuracy ~1e-13 at the
    degrees the benchmark harness visits.
    """
    lf = _log_factorials(j1 + j2 + j3 + 2)
    I, J = 2 * j1 + 1, 2 * j2 + 1
    m1 = np.arange(-j1, j1 + 1)
    m2 = np.arange(-j2, j2 + 1)
    M3 = m1[:, None] + m2[None, :]
    valid_m = np.abs(M3) <= j3
    kmax = min(j1 + j2 - j3, 2 * j1, 2 * j2)
    ks = np.arange(kmax + 1)
    # log denominator splits as A(k) + B(m1, k) + C(m2, k); invalid factorial
    # arguments are marked inf so their terms vanish
    A = lf[ks] + lf[j1 + j2 - j3 - ks]
    b1 = j1 - m1[:, None] - ks[None, :]
    b2 = j3 - j2 + m1[:, None] + ks[None, :]
    B = np.where((b1 >= 0) & (b2 >= 0),
                 lf[np.clip(b1, 0, None)] + lf[np.clip(b2, 0, None)], np.inf)
    c1 = j2 + m2[:, None] - ks[None, :]
    c2 = j3 - j1 - m2[:, None] + ks[None, :]
    C = np.where((c1 >= 0) & (c2 >= 0),
                 lf[np.clip(c1, 0, None)] + lf[np.clip(c2, 0, None)], np.inf)
    lam = (A[None, :] + B)[:, None, :] + C[None, :, :]
    lam_ref = lam.min(axis=-1)
    lam_ref = np.where(np.isfinite(lam_ref), lam_ref, 0.0)
    scaled = np.exp(lam_ref[..., None] - lam)  # exp(-inf) = 0 kills invalid k
    ksum = (np.where(ks % 2 == 0, 1.0, -1.0) * scaled).sum(axis=-1)
    log_pre = (math.log(2 * j3 + 1)
               + lf[j1 + j2 - j3] + lf[j1 - j2 + j3] + lf[-j1 + j2 + j3]
               - lf[j1 + j2 + j3 + 1]
               + lf[j1 + m1[:, None]] + lf[j1 - m1[:, None]]
               + lf[j2 + m2[None, :]] + lf[j2 - m2[None, :]]
               + lf[np.clip(j3 + M3, 0, None)] + lf[np.clip(j3 - M3, 0, None)])
    with np.errstate(divide="ignore"):
        log_mag = 0.5 * log_pre + np.log(np.abs(ksum)) - lam_ref
    return np.where(valid_m & (ksum != 0), np.sign(ksum) * np.exp(log_mag), 0.0)


@lru_cache(maxsize=8192)
def _cg_block(j1: int, j2: int, j3: int) -> np.ndarray:
    """Dense C^{j3,m1+m2}_{j1,m1,j2,m2} as float array [m1+j1, m2+j2].

    Values come from the vectorized log-space Racah sum; the exact
    arithmetic path stays reserved for rule checks and oracles.
    """
    return _cg_block_float(j1, j2, j3)


def cgtp_path(x: np.ndarray, y: np.ndarray, j3: int, mode: str = "sparse",
              flops: FlopCounter | None = None) -> np.ndarray:
    """Single-path coupling z_{m3} = sum C^{j3,m3}_{j1,m1,j2,m2} x_{m1} y_{m2}.

    Degrees are inferred from the vector lengths.  ``naive`` costs
    (2j1+1)(2j2+1)(2j3+1) MACs; ``sparse`` loops only m3 = m1 + m2, for
    sparse_pair_count(j1, j2, j3) MACs.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.ndim != 1 or y.ndim != 1 or x.size % 2 == 0 or y.size % 2 == 0:
        raise ValueError("inputs must be odd-length vectors")
    j1 = (x.size - 1) // 2
    j2 = (y.size - 1) // 2
    if not triangle_delta(j1, j2, j3):
        raise ValueError(f"({j1}, {j2}, {j3}) violates the triangle condition")
    if mode not in ("naive", "sparse"):
        raise ValueError(f"unknown mode {mode!r}")
    C2 = _cg_block(j1, j2, j3)
    I, J, K = 2 * j1 + 1, 2 * j2 + 1, 2 * j3 + 1
    if mode == "naive":
        outer = np.multiply.outer(x, y).ravel()
        i1, i2 = np.indices((I, J))
        i3 = i1 + i2 - j1 - j2 + j3
        valid = (i3 >= 0) & (i3 < K)
        dense = np.zeros((I, J, K))
        dense[i1[valid], i2[valid], i3[valid]] = C2[valid]
        flat = dense.reshape(I * J, K).T
        z = flat @ outer.real + 1j * (flat @ outer.imag)
        macs = I * J * K
    else:
        # anti-diagonal gather over (m1, m3); only m2 = m3 - m1 contributes
        m1g = np.arange(-j1, j1 + 1)[:, None]
        m2g = np.arange(-j3, j3 + 1)[None, :] - m1g
        valid = np.abs(m2g) <= j2
        idx2 = np.clip(m2g + j2, 0, J - 1)
        wy = np.where(valid, y[idx2], 0)
        cm = np.where(valid, C2[np.arange(I)[:, None], idx2], 0.0)
        z = (cm * x[:, None] * wy).sum(axis=0)
        macs = sparse_pair_count(j1, j2, j3)
    if flops is not None:
        flops.add(macs)
    return z


def cgtp_full(x: IrrepCoeffs, y: IrrepCoeffs, L3: int, mode: str = "sparse") -> TpoResult:
    """All-path coupling of single-copy inputs, one output block per path.

    Inputs must carry at most one block per degree.  The output keeps
    multiplicity: block (j3, (j1, j2)) holds the (j1, j2) -> j3 path.
    """
    xs = x.single_per_degree()
    ys = y.single_per_degree()
    fl = FlopCounter()
    out = IrrepCoeffs(L=L3, blocks={})
    for j1, xv in sorted(xs.items()):
        for j2, yv in sorted(ys.items()):
            for j3 in range(abs(j1 - j2), min(j1 + j2, L3) + 1):
                z = cgtp_path(xv, yv, j3, mode=mode, flops=fl)
                out.set_block(j3, z, tag=(j1, j2))
    return TpoResult(output=out, flops=fl.count)


def pointwise_spin_tp(f: SpinSignal, g: SpinSignal, s3: int,
                      flops: FlopCounter | None = None) -> SpinSignal:
    """Pointwise coupling (f (x) g)^{s3}_{m3} = sum C^{s3,m3}_{s1,m1,s2,m2} f_{m1} g_{m2}.

    Requires a shared grid and {s1, s2, s3} = 1.  For spins (0,0,0) this
    is plain pointwise multiplication; for (1,1,1) it is the pointwise
    cross product in the spherical basis up to a constant.
    """
    if f.grid is not g.grid:
        raise ValueError("signals must share a grid")
    s1, s2 = f.s, g.s
    if not triangle_delta(s1, s2, s3):
        raise ValueError(f"spins ({s1}, {s2}, {s3}) violate the triangle condition")
    out = np.zeros(f.values.shape[:2] + (2 * s3 + 1,), dtype=complex)
    pairs = 0
    for m1 in range(-s1, s1 + 1):
        for m2 in range(-s2, s2 + 1):
            m3 = m1 + m2
            if abs(m3) > s3:
                continue
            pairs += 1
            coef = cg_float(s1, m1, s2, m2, s3, m3)
            if coef:
                out[:, :, m3 + s3] += coef * f.values[:, :, m1 + s1] * g.values[:, :, m2 + s2]
    if flops is not None:
        flops.add(pairs * f.values.shape[0] * f.values.shape[1])
    return SpinSignal(s=s3, grid=f.grid, values=out)


def istp(x: TshCoeffs, y: TshCoeffs, s3: int, L3: int, grid: SphereGrid) -> TpoResult:
    """Grid product: encode both inputs, couple pointwise, decode at L3.

    Requires grid.Lg >= x.L + y.L (exact product representation) and
    L3 <= grid.Lg.
    """
    if grid.Lg < x.L + y.L:
        raise ValueError(f"grid exactness degree {grid.Lg} < x.L + y.L = {x.L + y.L}")
    if L3 > grid.Lg:
        raise ValueError(f"output band limit {L3} > grid exactness degree {grid.Lg}")
    fl = FlopCounter()
    fx = tsh_encode(x, grid, flops=fl)
    fy = tsh_encode(y, grid, flops=fl)
    prod = pointwise_spin_tp(fx, fy, s3, flops=fl)
    out = tsh_decode(prod, L3, flops=fl)
    return TpoResult(output=out, flops=fl.count)


def _as_spin0(x: IrrepCoeffs) -> TshCoeffs:
    blocks = {(j, j): vec for j, vec in x.single_per_degree().items()}
    return TshCoeffs(s=0, L=x.L, blocks=blocks)


def gtp(x: IrrepCoeffs, y: IrrepCoeffs, L3: int, grid: SphereGrid) -> TpoResult:
    """Scalar-signal (Gaunt) product: the all-spins-zero grid product.

    Output blocks are plain degree-l3 coefficients; only paths with
    l1 + l2 + l3 even survive.
    """
    res = istp(_as_spin0(x), _as_spin0(y), 0, L3, grid)
    out = IrrepCoeffs(L=L3, blocks={(j, None): vec for (j, _l), vec in res.output.items()})
    return TpoResult(output=out, flops=res.flops)


def vstp(x: TshCoeffs, y: TshCoeffs, L3: int, grid: SphereGrid) -> TpoResult:
    """Vector-signal product: the all-spins-one grid product."""
    if x.s != 1 or y.s != 1:
        raise ValueError(f"vstp needs spin-1 inputs, got spins ({x.s}, {y.s})")
    return istp(x, y, 1, L3, grid)


def simulate_cgtp_path(x: np.ndarray, y: np.ndarray, j3: int,
                       grid: SphereGrid | None = None,
                       flops: FlopCounter | None = None) -> np.ndarray:
    """Compute one Clebsch-Gordan path through a single vector-signal product.

    Places x and y into the tensor-harmonic blocks selected by
    find_valid_ells, runs one vstp, reads the (j3, l3) output block, and
    divides by the path coefficient.  The (0, 0, 0) path is plain scalar
    multiplication and uses no signal product.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    j1 = (x.size - 1) // 2
    j2 = (y.size - 1) // 2
    if not triangle_delta(j1, j2, j3):
        raise ValueError(f"({j1}, {j2}, {j3}) violates the triangle condition")
    if (j1, j2, j3) == (0, 0, 0):
        if flops is not None:
            flops.add(1)
        return x * y
    l1, l2, l3 = find_valid_ells(j1, j2, j3)
    if grid is None:
        grid = make_grid(l1 + l2)
    X = TshCoeffs(s=1, L=l1, blocks={(j1, l1): x})
    Y = TshCoeffs(s=1, L=l2, blocks={(j2, l2): y})
    res = vstp(X, Y, L3=l3, grid=grid)
    coef = generalized_gaunt(PathKey(j1, l1, 1, j2, l2, 1, j3, l3, 1))
    if abs(coef) < 1e-13:
        raise NumericalDegeneracy(
            f"coefficient for path {(j1, l1, j2, l2, j3, l3)} is {coef}")
    if flops is not None:
        flops.add(res.flops)
    return res.output.block(j3, l3) / coef
