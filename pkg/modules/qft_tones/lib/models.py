from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Normalization(str, Enum):
    """Scale factor applied to a Fourier sum of length N."""

    UNITARY = "unitary"  # 1/sqrt(N)
    PLAIN = "plain"  # 1
    INVERSE = "inverse"  # 1/N

    def factor(self, n: int) -> float:
        if self is Normalization.UNITARY:
            return 1.0 / math.sqrt(n)
        if self is Normalization.INVERSE:
            return 1.0 / n
        return 1.0

    def pair(self) -> Normalization:
        """The normalization whose product with this one gives 1/N (forward * inverse = I)."""
        if self is Normalization.UNITARY:
            return Normalization.UNITARY
        if self is Normalization.PLAIN:
            return Normalization.INVERSE
        return Normalization.PLAIN


@dataclass(frozen=True)
class FourierConvention:
    """
    Exponent sign and scaling of a Fourier transform.

    omega = exp(sign * 2*pi*i / N). The quantum transform uses sign=+1, the classical
    DFT defaults to sign=-1.
    """

    sign: int = -1
    normalization: Normalization = Normalization.PLAIN

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"FourierConvention.sign must be +1 or -1 (got {self.sign!r})")
        if not isinstance(self.normalization, Normalization):
            object.__setattr__(self, "normalization", Normalization(self.normalization))

    def inverse(self) -> FourierConvention:
        """Convention of the transform that undoes this one."""
        return FourierConvention(sign=-self.sign, normalization=self.normalization.pair())


QUANTUM = FourierConvention(sign=1, normalization=Normalization.UNITARY)
CLASSICAL = FourierConvention(sign=-1, normalization=Normalization.PLAIN)
