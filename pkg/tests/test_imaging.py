import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from divphase.dpi2d import blockwise_dpi, mean_dpi
from divphase.errors import ImageIOError, InvalidInputError
from divphase.imaging import (
    RasterImage,
    field_to_image,
    filtered_noise,
    gaussian_blobs,
    load_image,
    plane_wave,
    radial_taper,
    save_image,
    scale_intensity,
    synth_texture,
    to_grayscale,
)

from oracles import dft_matrix, signed_bin


class TestRasterImage:
    def test_channels(self):
        assert RasterImage(np.zeros((3, 4))).channels == 1
        img = RasterImage(np.zeros((3, 4, 3)))
        assert (img.height, img.width, img.channels) == (3, 4, 3)
        assert RasterImage(np.zeros((3, 4, 1))).channels == 1

    @pytest.mark.parametrize(
        "values, depth",
        [(np.full((2, 2), 1.5), 8), (np.zeros((2, 2, 2)), 8), (np.zeros((0, 2)), 8),
         (np.zeros((2, 2)), 12), (np.zeros(4), 8)],
    )
    def test_rejects(self, values, depth):
        with pytest.raises(InvalidInputError):
            RasterImage(values, bit_depth=depth)


class TestGrayscale:
    @pytest.mark.parametrize(
        "rgb, gray", [((1, 1, 1), 1.0), ((0, 0, 0), 0.0), ((1, 0, 0), 0.299), ((0, 1, 0), 0.587)]
    )
    def test_examples(self, rgb, gray):
        img = RasterImage(np.broadcast_to(np.array(rgb, float), (2, 3, 3)))
        np.testing.assert_allclose(to_grayscale(img), gray, atol=1e-15)

    def test_gray_passes_through(self, rng):
        v = rng.uniform(0, 1, (5, 6))
        np.testing.assert_array_equal(to_grayscale(RasterImage(v)), v)

    @given(arrays(np.float64, (4, 5, 3), elements=st.floats(0, 1)))
    def test_range(self, v):
        g = to_grayscale(RasterImage(v))
        assert np.all((g >= 0) & (g <= 1 + 1e-15))

    @given(arrays(np.float64, (4, 5, 3), elements=st.floats(0, 1)), st.floats(0.01, 1))
    def test_commutes_with_scaling(self, v, lam):
        a = scale_intensity(to_grayscale(RasterImage(v)), lam)
        b = to_grayscale(RasterImage(v * lam))
        assert np.max(np.abs(a - b)) <= 1e-15


class TestScaleIntensity:
    def test_examples(self, rng):
        f = rng.standard_normal((4, 4))
        np.testing.assert_array_equal(scale_intensity(f, 1), f)
        np.testing.assert_array_equal(scale_intensity(np.ones((3, 3)), 0.5), 0.5)

    @pytest.mark.parametrize("lam", [0, -1, np.nan])
    def test_rejects_nonpositive(self, lam):
        with pytest.raises(InvalidInputError):
            scale_intensity(np.ones((2, 2)), lam)

    def test_half_intensity_copy_has_zero_dpi(self, rng):
        f = rng.uniform(0, 1, (40, 40))
        np.testing.assert_array_equal(blockwise_dpi(f, scale_intensity(f, 0.5), 5).values, 0)

    def test_tenth_intensity_copy_zero_to_rounding(self, rng):
        # 0.1 is not a power of two, so the scaled copy differs in the last bits
        f = rng.uniform(0, 1, (40, 40))
        assert np.max(blockwise_dpi(f, scale_intensity(f, 0.1), 5).values) < 1e-12


class TestImageIO:
    def test_8bit_round_trip(self, tmp_path, rng):
        v = rng.integers(0, 256, (7, 9)) / 255
        save_image(RasterImage(v, 8), tmp_path / "a.png")
        back = load_image(tmp_path / "a.png")
        assert back.bit_depth == 8 and back.channels == 1
        np.testing.assert_array_equal(back.values, v)

    def test_8bit_quantization(self, tmp_path, rng):
        v = rng.uniform(0, 1, (7, 9))
        save_image(RasterImage(v, 8), tmp_path / "a.png")
        assert np.max(np.abs(load_image(tmp_path / "a.png").values - v)) <= 0.5 / 255 + 1e-12

    def test_16bit_round_trip(self, tmp_path, rng):
        v = rng.integers(0, 65536, (6, 5)) / 65535
        save_image(RasterImage(v, 16), tmp_path / "b.png")
        back = load_image(tmp_path / "b.png")
        assert back.bit_depth == 16
        np.testing.assert_array_equal(back.values, v)

    def test_rgb(self, tmp_path, rng):
        data = rng.integers(0, 256, (4, 6, 3), dtype=np.uint8)
        Image.fromarray(data).save(tmp_path / "c.png")
        img = load_image(tmp_path / "c.png")
        assert img.channels == 3
        np.testing.assert_array_equal(img.values, data / 255)
        save_image(img, tmp_path / "d.png")
        np.testing.assert_array_equal(load_image(tmp_path / "d.png").values, img.values)

    def test_rgba_drops_alpha(self, tmp_path):
        Image.new("RGBA", (3, 2), (255, 0, 0, 10)).save(tmp_path / "e.png")
        img = load_image(tmp_path / "e.png")
        assert img.channels == 3
        np.testing.assert_array_equal(img.values[..., 0], 1.0)

    def test_16bit_rgb_rejected(self, tmp_path):
        with pytest.raises(InvalidInputError):
            save_image(RasterImage(np.zeros((2, 2, 3)), 16), tmp_path / "f.png")

    def test_missing_file_names_path(self, tmp_path):
        path = tmp_path / "nope.png"
        with pytest.raises(ImageIOError, match="nope.png"):
            load_image(path)

    def test_not_an_image(self, tmp_path):
        path = tmp_path / "junk.png"
        path.write_text("hello")
        with pytest.raises(ImageIOError, match="junk.png"):
            load_image(path)

    def test_normalization_does_not_change_dpi(self, tmp_path, rng):
        a = rng.integers(0, 65536, (32, 32))
        b = rng.integers(0, 65536, (32, 32))
        for name, arr in (("a", a), ("b", b)):
            Image.fromarray(arr.astype(np.uint16)).save(tmp_path / f"{name}.png")
        fa, fb = load_image(tmp_path / "a.png").values, load_image(tmp_path / "b.png").values
        raw = mean_dpi(a.astype(float), b.astype(float))
        assert abs(mean_dpi(fa, fb) - raw) < 1e-12
        assert np.max(np.abs(blockwise_dpi(fa, fb, 4).values
                             - blockwise_dpi(a.astype(float), b.astype(float), 4).values)) < 1e-12


class TestFieldToImage:
    def test_range(self, rng):
        img = field_to_image(rng.standard_normal((5, 5)))
        assert img.values.min() == 0 and img.values.max() == 1
        assert img.bit_depth == 16

    def test_constant(self):
        np.testing.assert_array_equal(field_to_image(np.full((3, 3), 4.0)).values, 0)


class TestSynthesis:
    def test_plane_wave_exact(self):
        x1 = np.arange(64)[:, None]
        expected = np.cos(2 * np.pi * 8 * x1 / 64) * np.ones((1, 64))
        np.testing.assert_array_equal(plane_wave(64, (8, 0)), expected)
        np.testing.assert_array_equal(synth_texture("plane_wave", (64, 64), wavevector=(8, 0)),
                                      expected)

    @pytest.mark.parametrize("kind", ["gaussian_blobs", "filtered_noise"])
    def test_deterministic(self, kind):
        a = synth_texture(kind, (32, 40), seed=7)
        np.testing.assert_array_equal(a, synth_texture(kind, (32, 40), seed=7))
        assert not np.array_equal(a, synth_texture(kind, (32, 40), seed=8))
        assert a.shape == (32, 40) and np.all(np.isfinite(a))

    @pytest.mark.parametrize("shape", [(16, 16), (15, 12)])
    def test_filtered_noise_band_limit_against_dft_oracle(self, shape):
        f = filtered_noise(shape, cutoff=0.1, seed=3)
        spectrum = dft_matrix(shape) @ f.ravel()
        radius = np.array([np.hypot(signed_bin(k1, shape[0]), signed_bin(k2, shape[1]))
                           for k1 in range(shape[0]) for k2 in range(shape[1])])
        energy = np.abs(spectrum) ** 2
        assert energy[radius > 0.1].sum() < 1e-10 * energy.sum()

    def test_filtered_noise_normalized(self):
        f = filtered_noise(64, seed=1)
        assert abs(f.mean()) < 1e-12 and abs(f.std() - 1) < 1e-12

    def test_taper(self):
        f = filtered_noise(64, seed=1, taper=0.8)
        w = radial_taper(64, 0.8)
        assert w[32, 32] == 1 and w[0, 0] == 0
        np.testing.assert_allclose(f, filtered_noise(64, seed=1) * w, atol=0)

    def test_blobs_positive(self):
        assert gaussian_blobs(32, n_blobs=3, seed=0).min() > 0

    @pytest.mark.parametrize(
        "kind, params",
        [("nope", {}), ("filtered_noise", {"cutoff": 0.7}), ("filtered_noise", {"bogus": 1}),
         ("gaussian_blobs", {"sigma": 0})],
    )
    def test_invalid(self, kind, params):
        with pytest.raises(InvalidInputError):
            synth_texture(kind, (16, 16), seed=0, **params)

    def test_empty_shape(self):
        with pytest.raises(InvalidInputError):
            synth_texture("plane_wave", (0, 5))

    def test_too_small_cutoff(self):
        with pytest.raises(InvalidInputError):
            filtered_noise(4, cutoff=0.01, seed=0)
