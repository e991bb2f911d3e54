"""Rotation estimation by matching Riesz vector fields.

Rotating an image rotates its Riesz vector field the same way: the field is
carried to the new positions and its two components are turned by the same
angle. Given a reference and a rotated target, we rotate the reference's
Riesz field over a grid of angles and keep the angle whose field correlates
best with the target's.

Conventions: arrays are indexed ``(row, col)``; positive angles rotate
counterclockwise as displayed (row 0 at the top), matching ``np.rot90``.
Riesz component ``j`` belongs to array axis ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidInputError
from .riesznd import as_field, riesz_transform

__all__ = [
    "RotationEstimate",
    "circular_mask",
    "rotate_field",
    "rotate_riesz_field",
    "estimate_rotation",
]


@dataclass(frozen=True)
class RotationEstimate:
    angle_deg: float
    score: float
    curve: tuple[tuple[float, float], ...]

    @property
    def angles(self) -> np.ndarray:
        return np.array([a for a, _ in self.curve])

    @property
    def scores(self) -> np.ndarray:
        return np.array([s for _, s in self.curve])


def disk(shape) -> np.ndarray:
    """Boolean inscribed disk: centre at the grid centre, radius ``min(H, W)/2``."""
    h, w = shape
    r = np.arange(h)[:, None] - (h - 1) / 2
    c = np.arange(w)[None, :] - (w - 1) / 2
    return r**2 + c**2 <= (min(h, w) / 2) ** 2


def circular_mask(f) -> tuple[np.ndarray, np.ndarray]:
    """Zero ``f`` outside its inscribed disk; returns ``(masked, mask)``."""
    f = as_field(f, ndim=2)
    mask = disk(f.shape)
    return np.where(mask, f, 0.0), mask


def _quarter_turns(angle_deg: float):
    k = angle_deg / 90.0
    return int(k) % 4 if k == int(k) else None


def rotate_field(f, angle_deg: float) -> np.ndarray:
    """Rotate a 2D field counterclockwise about its centre.

    Bilinear interpolation. Samples whose source lies outside the pixel
    footprint ``[-0.5, N - 0.5]`` are 0; sources within half a pixel of the
    outer samples take the edge value. Multiples of 90 degrees on square
    grids (and of 180 on any grid) are exact index permutations.
    """
    f = as_field(f, ndim=2)
    return _rotate(f, float(angle_deg))


def _source_coords(angle_deg: float, h: int, w: int, dr, dc):
    """Inverse map of a counterclockwise rotation: output offsets -> source position."""
    t = np.deg2rad(angle_deg)
    cos, sin = np.cos(t), np.sin(t)
    return (h - 1) / 2 + cos * dr + sin * dc, (w - 1) / 2 - sin * dr + cos * dc


def _bilinear(stack: np.ndarray, sr, sc) -> np.ndarray:
    """Sample every plane of ``stack`` (shape ``(..., H, W)``) at ``(sr, sc)``.

    The domain is the pixel footprint: sources within half a pixel of the
    outer samples take the edge value, sources beyond it give 0.
    """
    h, w = stack.shape[-2:]
    inside = (sr >= -0.5) & (sr <= h - 0.5) & (sc >= -0.5) & (sc <= w - 0.5)
    sr = np.clip(sr, 0, h - 1)
    sc = np.clip(sc, 0, w - 1)
    r0 = np.minimum(np.floor(sr).astype(np.intp), max(h - 2, 0))
    c0 = np.minimum(np.floor(sc).astype(np.intp), max(w - 2, 0))
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)
    fr = sr - r0
    fc = sc - c0
    top = stack[..., r0, c0] * (1 - fc) + stack[..., r0, c1] * fc
    bottom = stack[..., r1, c0] * (1 - fc) + stack[..., r1, c1] * fc
    return (top * (1 - fr) + bottom * fr) * inside


def _rotate(f: np.ndarray, angle_deg: float) -> np.ndarray:
    # rotates the last two axes; leading axes are treated as a stack
    h, w = f.shape[-2:]
    k = _quarter_turns(angle_deg)
    if k is not None and (h == w or k % 2 == 0):
        return np.rot90(f, k=k, axes=(-2, -1)).copy()
    dr = np.arange(h)[:, None] - (h - 1) / 2
    dc = np.arange(w)[None, :] - (w - 1) / 2
    sr, sc = _source_coords(angle_deg, h, w, dr, dc)
    return _bilinear(f, sr, sc)


def _turn(moved: np.ndarray, angle_deg: float) -> np.ndarray:
    k = _quarter_turns(angle_deg)
    if k is not None:
        cos, sin = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k]
    else:
        t = np.deg2rad(angle_deg)
        cos, sin = np.cos(t), np.sin(t)
    return np.stack([cos * moved[0] - sin * moved[1], sin * moved[0] + cos * moved[1]])


def rotate_riesz_field(rf, angle_deg: float) -> np.ndarray:
    """Rotate a 2D Riesz field: move samples, then turn each vector.

    ``riesz_transform(rotate_field(f, a))`` equals
    ``rotate_riesz_field(riesz_transform(f), a)``: exactly for 90-degree
    multiples on square, Nyquist-free fields, up to interpolation error
    otherwise.
    """
    rf = np.asarray(rf, dtype=float)
    if rf.ndim != 3 or rf.shape[0] != 2:
        raise InvalidInputError(f"expected a (2, H, W) Riesz field, got shape {rf.shape}")
    return _turn(_rotate(rf, float(angle_deg)), float(angle_deg))


def angle_grid(step_deg: float) -> np.ndarray:
    n = int(np.ceil(360.0 / step_deg - 1e-9))
    angles = np.arange(n) * step_deg
    return angles[angles < 360.0]


def estimate_rotation(reference, target, step_deg: float = 1.0) -> RotationEstimate:
    """Find the counterclockwise angle that best maps ``reference`` onto ``target``.

    Both images are cut to their inscribed disk before the Riesz transform,
    so nothing outside the disk influences the result. For each angle on the
    grid ``0, step, 2*step, ... < 360`` the score is the normalized
    cross-correlation of the rotated reference field and the target field,
    both components stacked, over the disk. Ties go to the smallest angle.

    Raises
    ------
    InvalidInputError
        Non-square or mismatched shapes, or ``step_deg`` outside (0, 90].
    DegenerateInputError
        Either image is identically zero inside the disk.
    """
    reference = as_field(reference, ndim=2)
    target = as_field(target, ndim=2)
    if reference.shape != target.shape:
        raise InvalidInputError(f"shapes differ: {reference.shape} vs {target.shape}")
    if reference.shape[0] != reference.shape[1]:
        raise InvalidInputError(f"rotation estimation needs square images, got {reference.shape}")
    if not 0 < step_deg <= 90:
        raise InvalidInputError(f"step_deg must be in (0, 90], got {step_deg}")

    ref_masked, mask = circular_mask(reference)
    tgt_masked, _ = circular_mask(target)
    ref_field = riesz_transform(ref_masked)
    tgt_vec = riesz_transform(tgt_masked)[:, mask]
    tgt_norm = np.linalg.norm(tgt_vec)
    if tgt_norm == 0 or np.linalg.norm(ref_field[:, mask]) == 0:
        raise DegenerateInputError("Riesz field vanishes inside the circular mask")

    n = reference.shape[0]
    rows, cols = np.nonzero(mask)
    dr, dc = rows - (n - 1) / 2, cols - (n - 1) / 2
    angles = angle_grid(step_deg)
    scores = np.empty(angles.size)
    for i, a in enumerate(angles):
        # same as rotate_riesz_field(ref_field, a)[:, mask], sampled at the disk only
        k = _quarter_turns(float(a))
        if k is not None:
            moved = np.rot90(ref_field, k=k, axes=(-2, -1))[:, mask]
        else:
            moved = _bilinear(ref_field, *_source_coords(a, n, n, dr, dc))
        vec = _turn(moved, float(a))
        norm = np.linalg.norm(vec)
        s = np.vdot(vec, tgt_vec) / (norm * tgt_norm) if norm > 0 else 0.0
        scores[i] = min(1.0, max(-1.0, s))
    best = int(np.argmax(scores))
    curve = tuple((float(a), float(s)) for a, s in zip(angles, scores))
    return RotationEstimate(angle_deg=float(angles[best]), score=float(scores[best]), curve=curve)
