"""Transform core: oracle agreement, round trips, symmetry, energy."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freqmerge import (
    ImagePlane,
    Spectrum,
    dft1d_direct,
    energy,
    fft1d,
    forward2d,
    inverse2d,
    shift_center,
)

from conftest import random_plane


def dft2_double_sum(pixels: np.ndarray) -> np.ndarray:
    """Literal nested double sum; the oracle forward2d is checked against."""
    rows, cols = pixels.shape
    out = np.zeros((rows, cols), dtype=complex)
    for u in range(rows):
        for v in range(cols):
            acc = 0.0 + 0.0j
            for x in range(rows):
                for y in range(cols):
                    acc += pixels[x, y] * np.exp(-2j * np.pi * (u * x / rows + v * y / cols))
            out[u, v] = acc
    return out


class TestDft1dDirect:
    def test_delta_gives_constant_spectrum(self):
        assert np.allclose(dft1d_direct([1, 0, 0, 0]), np.ones(4), atol=1e-12)

    def test_constant_gives_dc_only(self):
        out = dft1d_direct([1, 1, 1, 1])
        assert np.allclose(out, [4, 0, 0, 0], atol=1e-12)

    def test_inverse_round_trip_length7(self):
        rng = np.random.default_rng(7001)
        for _ in range(20):
            x = rng.standard_normal(7) + 1j * rng.standard_normal(7)
            back = dft1d_direct(dft1d_direct(x), inverse=True)
            assert np.max(np.abs(back - x)) < 1e-12

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            dft1d_direct([])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            dft1d_direct([1.0, np.nan])


class TestFft1d:
    @pytest.mark.parametrize("length", [8, 16])
    def test_matches_direct_oracle(self, length):
        rng = np.random.default_rng(1200 + length)
        for _ in range(100):
            x = rng.standard_normal(length) + 1j * rng.standard_normal(length)
            fast = fft1d(x)
            slow = dft1d_direct(x)
            assert np.max(np.abs(fast - slow)) <= 1e-9 * np.max(np.abs(slow))

    def test_delta_length8(self):
        assert np.allclose(fft1d([1, 0, 0, 0, 0, 0, 0, 0]), np.ones(8), atol=1e-12)

    def test_non_power_of_two_is_bitwise_direct(self):
        rng = np.random.default_rng(61)
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert np.array_equal(fft1d(x), dft1d_direct(x))
        assert np.array_equal(fft1d(x, inverse=True), dft1d_direct(x, inverse=True))

    def test_inverse_round_trip(self):
        rng = np.random.default_rng(62)
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        assert np.max(np.abs(fft1d(fft1d(x), inverse=True) - x)) < 1e-12

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fft1d([])


class TestForward2d:
    def test_origin_delta(self):
        spec = forward2d(ImagePlane([[1, 0], [0, 0]]))
        assert np.allclose(spec.coeffs, np.ones((2, 2)), atol=1e-12)
        assert spec.shifted is False

    def test_constant_image(self):
        c = 0.37
        spec = forward2d(ImagePlane(np.full((2, 2), c)))
        assert abs(spec.coeffs[0, 0] - 4 * c) < 1e-12
        rest = np.delete(spec.coeffs.ravel(), 0)
        assert np.max(np.abs(rest)) < 1e-12

    @pytest.mark.parametrize("shape", [(4, 4), (8, 8), (4, 8), (3, 5), (6, 4)])
    def test_double_sum_oracle(self, shape, rng):
        plane = random_plane(rng, *shape)
        expected = dft2_double_sum(plane.pixels)
        assert np.max(np.abs(forward2d(plane).coeffs - expected)) < 1e-10

    def test_hermitian_symmetry_for_real_input(self, rng):
        spec = forward2d(random_plane(rng, 8, 6)).coeffs
        mirrored = np.conj(np.roll(np.flip(spec), (1, 1), axis=(0, 1)))
        assert np.max(np.abs(spec - mirrored)) < 1e-9


class TestInverse2d:
    def test_round_trip_identity(self, rng):
        plane = random_plane(rng, 8, 8)
        back = inverse2d(forward2d(plane))
        assert np.max(np.abs(back.pixels - plane.pixels)) < 1e-10

    def test_round_trip_non_pow2(self, rng):
        plane = random_plane(rng, 6, 10)
        back = inverse2d(forward2d(plane))
        assert np.max(np.abs(back.pixels - plane.pixels)) < 1e-10

    def test_zero_spectrum(self):
        plane = inverse2d(Spectrum(np.zeros((3, 4))))
        assert np.array_equal(plane.pixels, np.zeros((3, 4)))

    def test_dc_only_gives_constant(self):
        grid = np.zeros((4, 4), complex)
        grid[0, 0] = 4 * 4 * 0.5
        plane = inverse2d(Spectrum(grid))
        assert np.max(np.abs(plane.pixels - 0.5)) < 1e-12

    def test_shifted_spectrum_rejected(self, rng):
        spec = shift_center(forward2d(random_plane(rng, 4, 4)))
        with pytest.raises(ValueError):
            inverse2d(spec)

    def test_imag_tol_enforced(self):
        # deliberately non-Hermitian: inverse has a large imaginary part
        grid = np.zeros((4, 4), complex)
        grid[1, 0] = 1j
        with pytest.raises(ValueError):
            inverse2d(Spectrum(grid), imag_tol=1e-6)


class TestShiftCenter:
    def test_2x2_swap(self):
        spec = Spectrum([[1, 2], [3, 4]])
        shifted = shift_center(spec)
        assert np.array_equal(shifted.coeffs, [[4, 3], [2, 1]])
        assert shifted.shifted is True

    def test_involution_even_dims(self, rng):
        spec = forward2d(random_plane(rng, 4, 6))
        again = shift_center(shift_center(spec))
        assert np.array_equal(again.coeffs, spec.coeffs)
        assert again.shifted is False

    def test_dc_lands_center_4x4(self):
        grid = np.zeros((4, 4), complex)
        grid[0, 0] = 7.0
        shifted = shift_center(Spectrum(grid))
        assert shifted.coeffs[2, 2] == 7.0
        assert np.count_nonzero(shifted.coeffs) == 1


class TestEnergy:
    def test_zero_plane(self):
        assert energy(ImagePlane(np.zeros((4, 4)))) == 0.0

    def test_constant_plane(self):
        assert energy(ImagePlane(np.ones((8, 8)))) == pytest.approx(64.0)

    def test_parseval(self, rng):
        plane = random_plane(rng, 8, 8)
        spatial = energy(plane)
        spectral = energy(forward2d(plane))
        assert abs(spatial - spectral) <= 1e-9 * spatial


@settings(max_examples=30, deadline=None)
@given(
    a=st.floats(min_value=-2, max_value=2, allow_nan=False),
    b=st.floats(min_value=-2, max_value=2, allow_nan=False),
)
def test_linearity(a, b):
    rng = np.random.default_rng(555)
    p = rng.random((8, 8))
    q = rng.random((8, 8))
    combined = forward2d(ImagePlane(a * p + b * q)).coeffs
    separate = a * forward2d(ImagePlane(p)).coeffs + b * forward2d(ImagePlane(q)).coeffs
    assert np.max(np.abs(combined - separate)) < 1e-9


def test_image_plane_validation():
    with pytest.raises(ValueError):
        ImagePlane(np.zeros((0, 4)))
    with pytest.raises(ValueError):
        ImagePlane([[np.inf, 0.0]])
    with pytest.raises(ValueError):
        ImagePlane(np.zeros(4))  # 1D


def test_spectrum_validation():
    with pytest.raises(ValueError):
        Spectrum(np.zeros((2, 0)))
    with pytest.raises(ValueError):
        Spectrum([[np.nan + 0j]])


def test_values_are_immutable(rng):
    plane = random_plane(rng, 4, 4)
    with pytest.raises(ValueError):
        plane.pixels[0, 0] = 2.0
