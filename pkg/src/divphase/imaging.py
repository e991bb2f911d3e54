"""Raster ingestion, intensity handling, and synthetic test images."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import ImageIOError, InvalidInputError
from .riesznd import as_field

__all__ = [
    "RasterImage",
    "to_grayscale",
    "scale_intensity",
    "load_image",
    "save_image",
    "field_to_image",
    "plane_wave",
    "gaussian_blobs",
    "filtered_noise",
    "radial_taper",
    "synth_texture",
    "TEXTURE_KINDS",
]

LUMA_BT601 = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class RasterImage:
    """Image with values in [0, 1], shape ``(H, W)`` or ``(H, W, 3)``."""

    values: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim == 3 and v.shape[2] == 1:
            v = v[:, :, 0]
        if v.ndim not in (2, 3) or (v.ndim == 3 and v.shape[2] != 3):
            raise InvalidInputError(f"unsupported image shape {v.shape}; need 1 or 3 channels")
        if min(v.shape[:2]) < 1:
            raise InvalidInputError(f"image has an empty axis: {v.shape}")
        if not np.all((v >= 0) & (v <= 1)):
            raise InvalidInputError("image values must lie in [0, 1]")
        if self.bit_depth not in (8, 16):
            raise InvalidInputError(f"bit depth must be 8 or 16, got {self.bit_depth}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.values.ndim == 2 else 3


def to_grayscale(img: RasterImage) -> np.ndarray:
    """BT.601 luma for RGB images; single-channel images pass through."""
    if img.channels == 1:
        return np.array(img.values)
    return img.values @ LUMA_BT601


def scale_intensity(f, lam: float) -> np.ndarray:
    if not lam > 0:
        raise InvalidInputError(f"intensity factor must be positive, got {lam}")
    return as_field(f) * lam


def load_image(path) -> RasterImage:
    """Read a PNG (or any Pillow-readable lossless raster) as values in [0, 1].

    8-bit and 16-bit grayscale and 8-bit RGB(A) are supported; alpha is dropped.
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(im, dtype=np.int64)
                if arr.min() < 0 or arr.max() > 65535:
                    raise ImageIOError(f"{path}: 32-bit integer images are not supported")
                return RasterImage(arr / 65535.0, bit_depth=16)
            if mode in ("1", "L", "P", "LA"):
                im = im.convert("L")
            elif mode in ("RGB", "RGBA", "CMYK", "YCbCr"):
                im = im.convert("RGB")
            else:
                raise ImageIOError(f"{path}: unsupported image mode {mode!r}")
            return RasterImage(np.asarray(im, dtype=float) / 255.0, bit_depth=8)
    except FileNotFoundError as exc:
        raise ImageIOError(f"{path}: no such file") from exc
    except ImageIOError:
        raise
    except (OSError, ValueError) as exc:
        raise ImageIOError(f"{path}: cannot read image ({exc})") from exc


def save_image(img: RasterImage, path) -> None:
    """Write a PNG at the image's bit depth (16-bit only for grayscale)."""
    path = Path(path)
    v = img.values
    if img.bit_depth == 16:
        if img.channels != 1:
            raise InvalidInputError("16-bit output is only supported for grayscale images")
        pil = Image.fromarray(np.round(v * 65535).astype(np.uint16))
    else:
        pil = Image.fromarray(np.round(v * 255).astype(np.uint8))
    try:
        pil.save(path, format="PNG")
    except OSError as exc:
        raise ImageIOError(f"{path}: cannot write image ({exc})") from exc


def field_to_image(f, bit_depth: int = 16) -> RasterImage:
    """Affinely map a field's range onto [0, 1]; constant fields map to 0."""
    f = as_field(f, ndim=2)
    lo, hi = f.min(), f.max()
    v = (f - lo) / (hi - lo) if hi > lo else np.zeros_like(f)
    return RasterImage(np.clip(v, 0.0, 1.0), bit_depth=bit_depth)


def _shape2(shape) -> tuple[int, int]:
    shape = tuple(int(n) for n in np.atleast_1d(shape))
    if len(shape) == 1:
        shape = shape * 2
    if len(shape) != 2 or min(shape) < 1:
        raise InvalidInputError(f"texture shape must be two positive sizes, got {shape}")
    return shape


def plane_wave(shape, wavevector=(8, 0), phase: float = 0.0) -> np.ndarray:
    """``cos(2 pi (k_1 x_1 / N_1 + k_2 x_2 / N_2) + phase)``."""
    h, w = _shape2(shape)
    k1, k2 = wavevector
    x1 = np.arange(h)[:, None]
    x2 = np.arange(w)[None, :]
    return np.cos(2 * np.pi * (k1 * x1 / h + k2 * x2 / w) + phase)


def gaussian_blobs(shape, n_blobs: int = 12, sigma: float = 4.0, seed=None) -> np.ndarray:
    h, w = _shape2(shape)
    if n_blobs < 1 or not sigma > 0:
        raise InvalidInputError("gaussian_blobs needs n_blobs >= 1 and sigma > 0")
    rng = np.random.default_rng(seed)
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    out = np.zeros((h, w))
    for r, c, a in zip(rng.uniform(0, h, n_blobs), rng.uniform(0, w, n_blobs),
                       rng.uniform(0.5, 1.0, n_blobs)):
        out += a * np.exp(-((rows - r) ** 2 + (cols - c) ** 2) / (2 * sigma**2))
    return out


def radial_taper(shape, inner: float = 0.8) -> np.ndarray:
    """Raised-cosine window: 1 inside ``inner`` of the inscribed radius, 0 beyond it."""
    h, w = _shape2(shape)
    if not 0 <= inner < 1:
        raise InvalidInputError(f"taper inner radius must be in [0, 1), got {inner}")
    r = np.hypot(np.arange(h)[:, None] - (h - 1) / 2, np.arange(w)[None, :] - (w - 1) / 2)
    r = r / (min(h, w) / 2)
    ramp = 0.5 * (1 + np.cos(np.pi * np.clip((r - inner) / (1 - inner), 0, 1)))
    return np.where(r < 1, ramp, 0.0)


def filtered_noise(shape, cutoff: float = 0.1, seed=None, taper=None) -> np.ndarray:
    """White noise with every bin at radial frequency above ``cutoff`` removed.

    Scaled to zero mean and unit standard deviation. With ``taper`` set, the
    result is multiplied by ``radial_taper(shape, taper)`` so that it fades to
    zero before the inscribed circle.
    """
    h, w = _shape2(shape)
    if not 0 < cutoff < 0.5:
        raise InvalidInputError(f"cutoff must be in (0, 0.5) cycles/sample, got {cutoff}")
    rng = np.random.default_rng(seed)
    spectrum = np.fft.fft2(rng.standard_normal((h, w)))
    radius = np.hypot(np.fft.fftfreq(h)[:, None], np.fft.fftfreq(w)[None, :])
    spectrum[radius > cutoff] = 0
    spectrum[0, 0] = 0
    out = np.fft.ifft2(spectrum).real
    std = out.std()
    if std == 0:
        raise InvalidInputError(f"cutoff {cutoff} leaves no energy on a {h}x{w} grid")
    out /= std
    return out if taper is None else out * radial_taper((h, w), taper)


TEXTURE_KINDS = {
    "plane_wave": plane_wave,
    "gaussian_blobs": gaussian_blobs,
    "filtered_noise": filtered_noise,
}


def synth_texture(kind: str, shape=(128, 128), seed=None, **params) -> np.ndarray:
    """Deterministic synthetic 2D field of the given kind.

    ``plane_wave`` takes ``wavevector`` and ``phase``; ``gaussian_blobs``
    takes ``n_blobs`` and ``sigma``; ``filtered_noise`` takes ``cutoff`` and
    ``taper``.
    """
    try:
        gen = TEXTURE_KINDS[kind]
    except KeyError:
        raise InvalidInputError(
            f"unknown texture kind {kind!r}; choose from {sorted(TEXTURE_KINDS)}"
        ) from None
    if kind != "plane_wave":
        params["seed"] = seed
    try:
        return gen(shape, **params)
    except TypeError as exc:
        raise InvalidInputError(f"bad parameters for {kind}: {exc}") from None
