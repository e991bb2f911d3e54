"""Riesz transforms and pointwise phase vectors of n-dimensional fields.

Fields are plain float arrays with 1 to 3 axes. A Riesz field or phase
vector field is stacked along a new leading axis, so component ``j``
(``out[j]``) belongs to array axis ``j``.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .phase1d import principal_angle, wrap_difference
from .spectra import apply_multiplier, frequency_grid, riesz_multiplier

__all__ = [
    "as_field",
    "riesz_transform",
    "phase_vector",
    "steered_riesz",
    "steered_phase_difference",
    "rotate_grid",
]

MAX_DIM = 3


def as_field(values, ndim=None) -> np.ndarray:
    """Validate and convert ``values`` to a float64 field."""
    f = np.asarray(values, dtype=float)
    if not 1 <= f.ndim <= MAX_DIM:
        raise InvalidInputError(f"fields must have 1 to {MAX_DIM} axes, got {f.ndim}")
    if ndim is not None and f.ndim != ndim:
        raise InvalidInputError(f"expected a {ndim}D field, got {f.ndim}D")
    if f.size == 0:
        raise InvalidInputError(f"field has an empty axis: shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise InvalidInputError("field contains non-finite values")
    return f


def check_same_shape(f, g, ndim=None):
    f, g = as_field(f, ndim), as_field(g, ndim)
    if f.shape != g.shape:
        raise InvalidInputError(f"field shapes differ: {f.shape} vs {g.shape}")
    return f, g


def riesz_transform(f) -> np.ndarray:
    """All Riesz components of ``f``, shape ``(f.ndim, *f.shape)``."""
    f = as_field(f)
    out = np.zeros((f.ndim,) + f.shape)
    if np.all(f == f.flat[0]):
        # only DC content, which every multiplier zeroes; skip FFT roundoff
        return out
    grid = frequency_grid(f.shape)
    spectrum = np.fft.fftn(f)
    for j in range(f.ndim):
        out[j] = np.fft.ifftn(riesz_multiplier(j, grid) * spectrum).real
    return out


def phase_vector(f) -> np.ndarray:
    """Pointwise phases ``atan2(R_j f, f)`` per axis, each in (-pi, pi].

    Where ``R_j f == 0`` and ``f < 0`` the phase is pi, not 0.
    """
    f = as_field(f)
    return principal_angle(riesz_transform(f), f[np.newaxis])


def steered_riesz(f, theta: float) -> np.ndarray:
    """``cos(theta) R_1 f + sin(theta) R_2 f`` for a 2D field."""
    f = as_field(f, ndim=2)
    if np.all(f == f.flat[0]):
        return np.zeros(f.shape)
    grid = frequency_grid(f.shape)
    r1 = apply_multiplier(f, riesz_multiplier(0, grid))
    r2 = apply_multiplier(f, riesz_multiplier(1, grid))
    return np.cos(theta) * r1 + np.sin(theta) * r2


def steered_phase_difference(f, g, theta: float) -> float:
    """RMS over the grid of the wrapped difference of steered phases."""
    f, g = check_same_shape(f, g, ndim=2)
    phi_f = principal_angle(steered_riesz(f, theta), f)
    phi_g = principal_angle(steered_riesz(g, theta), g)
    return float(np.sqrt(np.mean(wrap_difference(phi_f, phi_g) ** 2)))


def rotate_grid(f, quarter_turns: int) -> np.ndarray:
    """Rotate a square 2D array counterclockwise by ``90 * quarter_turns`` degrees.

    Pure index permutation; works on stacked component arrays too (the
    last two axes are rotated).
    """
    f = np.asarray(f)
    if f.shape[-1] != f.shape[-2] and quarter_turns % 2:
        raise InvalidInputError(f"odd quarter turns need a square grid, got {f.shape[-2:]}")
    return np.rot90(f, k=quarter_turns % 4, axes=(-2, -1))
