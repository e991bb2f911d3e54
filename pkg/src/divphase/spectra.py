"""Frequency grids and FFT-domain multiplier operators.

Frequencies are in cycles/sample in standard DFT ordering (zero bin first,
negative frequencies in the upper half). For even lengths the Nyquist bin
carries the frequency -1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "FrequencyGrid",
    "frequency_grid",
    "hilbert_multiplier",
    "riesz_multiplier",
    "apply_multiplier",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Per-axis signed DFT frequencies for a grid of the given shape."""

    shape: tuple[int, ...]
    freqs: tuple[np.ndarray, ...]

    @property
    def ndim(self) -> int:
        return len(self.shape)

    def mesh(self) -> list[np.ndarray]:
        """Broadcastable per-axis frequency arrays (``indexing='ij'``)."""
        return np.meshgrid(*self.freqs, indexing="ij", sparse=True)


def frequency_grid(shape) -> FrequencyGrid:
    """Build the frequency grid for a field of ``shape``.

    Raises
    ------
    InvalidInputError
        If ``shape`` is empty or any axis has fewer than one sample.
    """
    shape = tuple(int(n) for n in np.atleast_1d(shape))
    if not shape or any(n < 1 for n in shape):
        raise InvalidInputError(f"every axis needs at least one sample, got shape {shape}")
    freqs = []
    for n in shape:
        f = np.fft.fftfreq(n)
        f.setflags(write=False)
        freqs.append(f)
    return FrequencyGrid(shape=shape, freqs=tuple(freqs))


def hilbert_multiplier(grid: FrequencyGrid) -> np.ndarray:
    """Hilbert symbol ``-i sign(xi)`` on a one-dimensional grid.

    The zero bin and, for even lengths, the Nyquist bin are set to 0 so
    that the operator maps real signals to real signals and squares to
    ``-I`` on signals without DC or Nyquist content.
    """
    if grid.ndim != 1:
        raise InvalidInputError(f"Hilbert multiplier needs a 1D grid, got {grid.ndim}D")
    (f,) = grid.freqs
    m = -1j * np.sign(f)
    n = grid.shape[0]
    if n % 2 == 0:
        m[n // 2] = 0
    return m


def riesz_multiplier(j: int, grid: FrequencyGrid) -> np.ndarray:
    """Riesz symbol ``-i xi_j / |xi|`` for axis ``j``; zero at ``xi = 0``.

    Nyquist bins are kept (the ratio is well defined there), which is why in
    1D this differs from :func:`hilbert_multiplier` at the Nyquist bin only.
    """
    if not 0 <= j < grid.ndim:
        raise InvalidInputError(f"axis {j} out of range for a {grid.ndim}D grid")
    mesh = grid.mesh()
    radius = np.sqrt(sum(k**2 for k in mesh))
    xi_j = np.broadcast_to(mesh[j], grid.shape)
    m = np.zeros(grid.shape, dtype=complex)
    nz = radius > 0
    m[nz] = -1j * xi_j[nz] / radius[nz]
    return m


def apply_multiplier(field, m) -> np.ndarray:
    """Real part of ``ifftn(m * fftn(field))``."""
    field = np.asarray(field, dtype=float)
    m = np.asarray(m)
    if field.shape != m.shape:
        raise InvalidInputError(
            f"multiplier shape {m.shape} does not match field shape {field.shape}"
        )
    return np.fft.ifftn(m * np.fft.fftn(field)).real
