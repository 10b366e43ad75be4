"""Complex multiply-accumulate counting.

Counted flops are the MACs performed by bilinear contraction loops
(coefficient couplings, Legendre/Fourier matrix products, pointwise
products).  Elementwise diagonal scalings and pure additions are not
counted; they are lower order everywhere and data independent either way.
"""

from __future__ import annotations

__all__ = ["FlopCounter"]


class FlopCounter:
    """Mutable MAC tally threaded through transform and product kernels."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int) -> None:
        self.count += int(n)

    def __repr__(self) -> str:
        return f"FlopCounter({self.count})"
