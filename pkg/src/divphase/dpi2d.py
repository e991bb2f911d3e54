"""Divergence Phase Index fields, region means, and blockwise comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .phase1d import bounded_mean, wrap_difference
from .riesznd import check_same_shape, phase_vector

__all__ = [
    "DPIMatrix",
    "BinaryMask",
    "dpi_vector_field",
    "dpi_norm_field",
    "mean_dpi",
    "partition_blocks",
    "blockwise_dpi",
    "elbow_threshold",
    "binarize",
]


@dataclass(frozen=True)
class DPIMatrix:
    """Mean DPI per block of an ``ns x ns`` partition.

    ``block_bounds[i][j]`` is ``(row0, row1, col0, col1)`` (half-open).
    """

    ns: int
    values: np.ndarray
    block_bounds: tuple


@dataclass(frozen=True)
class BinaryMask:
    ns: int
    flags: np.ndarray
    threshold: float


def dpi_vector_field(f, g) -> np.ndarray:
    """Per-axis phase differences wrapped to (-pi, pi], shape ``(n, *f.shape)``."""
    f, g = check_same_shape(f, g)
    return wrap_difference(phase_vector(f), phase_vector(g))


def dpi_norm_field(f, g) -> np.ndarray:
    """Pointwise Euclidean norm of :func:`dpi_vector_field`."""
    return np.sqrt(np.sum(dpi_vector_field(f, g) ** 2, axis=0))


def mean_dpi(f, g) -> float:
    return bounded_mean(dpi_norm_field(f, g))


def _split(n: int, parts: int) -> list[tuple[int, int]]:
    base, extra = divmod(n, parts)
    edges = [0]
    for k in range(parts):
        edges.append(edges[-1] + base + (1 if k < extra else 0))
    return list(zip(edges[:-1], edges[1:]))


def partition_blocks(height: int, width: int, ns: int) -> tuple:
    """Uniform ``ns x ns`` tiling; leading blocks absorb the remainder pixels.

    Returns a nested tuple ``bounds[i][j] = (row0, row1, col0, col1)``.
    """
    if ns < 1 or ns > min(height, width):
        raise InvalidInputError(
            f"ns={ns} must be between 1 and min(height, width)={min(height, width)}"
        )
    rows, cols = _split(height, ns), _split(width, ns)
    return tuple(tuple((r0, r1, c0, c1) for c0, c1 in cols) for r0, r1 in rows)


def blockwise_dpi(f, g, ns: int) -> DPIMatrix:
    """Mean DPI of ``f`` and ``g`` restricted to each block of a uniform partition.

    Riesz transforms are applied to every block independently, so each cell
    depends only on the pixels inside it.
    """
    f, g = check_same_shape(f, g, ndim=2)
    bounds = partition_blocks(f.shape[0], f.shape[1], ns)
    values = np.empty((ns, ns))
    for i, row in enumerate(bounds):
        for j, (r0, r1, c0, c1) in enumerate(row):
            values[i, j] = mean_dpi(f[r0:r1, c0:c1], g[r0:r1, c0:c1])
    return DPIMatrix(ns=ns, values=values, block_bounds=bounds)


def elbow_threshold(values) -> float:
    """Elbow of the ascending value curve, by maximum distance to its chord.

    Ties go to the smallest index. A flat curve (spread below 1e-12)
    returns its maximum so that nothing exceeds it.
    """
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size < 2:
        raise InvalidInputError(f"elbow threshold needs at least 2 values, got {v.size}")
    if v[-1] - v[0] < 1e-12:
        return float(v[-1])
    idx = np.arange(v.size, dtype=float)
    dx, dy = idx[-1], v[-1] - v[0]
    # perpendicular distance up to the constant chord length
    dist = np.abs(dy * idx - dx * (v - v[0]))
    return float(v[int(np.argmax(dist))])


def binarize(m: DPIMatrix) -> BinaryMask:
    """Flag cells strictly above the elbow threshold of the matrix."""
    t = elbow_threshold(m.values)
    return BinaryMask(ns=m.ns, flags=m.values > t, threshold=t)
