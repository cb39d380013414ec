"""
Classical Fourier oracle: direct DFT, radix-2 FFT, inverse DFT and the 4-point sparse
factorization check.

Nothing here imports the quantum modules; every quantum result is checked against this
code, so it must stay an independent implementation.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .models import CLASSICAL, FourierConvention

_DFT_ROW_BLOCK = 256


class SpectralError(ValueError):
    """Bad input to a classical transform."""


@dataclass(frozen=True, eq=False)
class ComplexSignal:
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.complex128, copy=True).reshape(-1)
        if arr.size < 1:
            raise SpectralError("signal must have at least one sample")
        if not np.all(np.isfinite(arr)):
            raise SpectralError("signal contains NaN or Inf")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def length(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.length


SignalLike = ComplexSignal | Sequence[complex] | np.ndarray


def as_signal(x: SignalLike) -> ComplexSignal:
    return x if isinstance(x, ComplexSignal) else ComplexSignal(np.asarray(x))


def _roots(n: int, sign: int) -> np.ndarray:
    return np.exp(sign * 2j * np.pi * np.arange(n) / n)


# -----------------------------------------------------------------------------
# Transforms
# -----------------------------------------------------------------------------
def dft(x: SignalLike, convention: FourierConvention = CLASSICAL) -> ComplexSignal:
    """c_k = factor * sum_j x_j * w**(j*k), evaluated directly in O(N^2)."""
    sig = as_signal(x)
    n = sig.length
    roots = _roots(n, convention.sign)
    j = np.arange(n)
    out = np.empty(n, dtype=np.complex128)
    # Row blocks keep the exponent table small for N in the thousands.
    for start in range(0, n, _DFT_ROW_BLOCK):
        k = np.arange(start, min(start + _DFT_ROW_BLOCK, n))
        out[start : start + k.size] = roots[np.outer(k, j) % n] @ sig.values
    return ComplexSignal(out * convention.normalization.factor(n))


def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros_like(idx)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft(x: SignalLike, convention: FourierConvention = CLASSICAL) -> ComplexSignal:
    """Iterative radix-2 decimation-in-time FFT. Length must be a power of two."""
    sig = as_signal(x)
    n = sig.length
    if n & (n - 1):
        raise SpectralError(
            f"fft needs a power-of-two length (got {n}); zero-pad to {1 << n.bit_length()} explicitly "
            "or use dft()"
        )
    data = sig.values[_bit_reverse(n)].copy()
    m = 2
    while m <= n:
        half = m // 2
        twiddle = np.exp(convention.sign * 2j * np.pi * np.arange(half) / m)
        blocks = data.reshape(-1, m)
        top = blocks[:, :half].copy()
        bottom = blocks[:, half:] * twiddle
        blocks[:, :half] = top + bottom
        blocks[:, half:] = top - bottom
        m <<= 1
    return ComplexSignal(data * convention.normalization.factor(n))


def inverse_dft(c: SignalLike, convention: FourierConvention = CLASSICAL) -> ComplexSignal:
    """
    Undo dft(., convention). `convention` names the FORWARD transform being undone;
    the inverse runs with the opposite sign and the complementary scale. The classical
    default therefore applies 1/N: inverse_dft([4, 0, 0, 0]) == [1, 1, 1, 1].
    """
    return dft(c, convention.inverse())


def power_spectrum(x: SignalLike, convention: FourierConvention = CLASSICAL) -> np.ndarray:
    """|fft(x)|**2 per bin."""
    return np.abs(fft(x, convention).values) ** 2


# -----------------------------------------------------------------------------
# 4-point sparse factorization
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class FactorizationReport:
    u1: np.ndarray
    u2: np.ndarray
    f4: np.ndarray
    u2_u1_holds: bool
    u1_u2_holds: bool
    nonzeros: tuple[int, int]
    matches_oracle: bool
    unitary_after_scaling: bool

    @property
    def holding_order(self) -> str | None:
        if self.u2_u1_holds:
            return "U2*U1"
        if self.u1_u2_holds:
            return "U1*U2"
        return None

    @property
    def ok(self) -> bool:
        return self.holding_order is not None and self.matches_oracle and self.unitary_after_scaling

    def summary(self) -> str:
        return (
            f"F4 = {self.holding_order or 'neither order'}; nonzeros U1={self.nonzeros[0]} U2={self.nonzeros[1]}; "
            f"oracle match={self.matches_oracle}; unitary after 1/2 scaling={self.unitary_after_scaling}"
        )


def sparse_factorization_check() -> FactorizationReport:
    """
    Build the two printed 4x4 sparse factors and the printed F4 (rows 1, i, -1, -i, i.e.
    sign=+1, plain scaling) from Gaussian integers and test both products exactly.
    """
    i = 1j
    u1 = np.array(
        [
            [1, 0, 1, 0],
            [0, 1, 0, 1],
            [1, 0, i**2, 0],
            [0, 1, 0, i**2],
        ],
        dtype=np.complex128,
    )
    u2 = np.array(
        [
            [1, 1, 0, 0],
            [0, 0, 1, i],
            [1, i**2, 0, 0],
            [0, 0, 1, i**3],
        ],
        dtype=np.complex128,
    )
    f4 = np.array(
        [
            [1, 1, 1, 1],
            [1, i, -1, -i],
            [1, -1, 1, -1],
            [1, -i, -1, i],
        ],
        dtype=np.complex128,
    )
    # Integer-valued complex products are exact in binary floating point.
    u2_u1 = bool(np.array_equal(u2 @ u1, f4))
    u1_u2 = bool(np.array_equal(u1 @ u2, f4))

    plus_plain = FourierConvention(sign=1)
    oracle = np.column_stack([dft(col, plus_plain).values for col in np.eye(4)])
    matches = bool(np.max(np.abs(oracle - f4)) < 1e-12)

    scaled = f4 / 2.0
    unitary = bool(np.max(np.abs(scaled.conj().T @ scaled - np.eye(4))) < 1e-12)

    return FactorizationReport(
        u1=u1,
        u2=u2,
        f4=f4,
        u2_u1_holds=u2_u1,
        u1_u2_holds=u1_u2,
        nonzeros=(int(np.count_nonzero(u1)), int(np.count_nonzero(u2))),
        matches_oracle=matches,
        unitary_after_scaling=unitary,
    )
