import numpy as np
import pytest

from framelets.mask import mask_1d
from framelets.pipeline import demo
from framelets.transform import (
    analyze,
    convolve_demo,
    energy_split,
    padded_shape,
    synthesize,
    truncation_error,
)
from framelets.uep import FilterBank

BANKS_2D = ["ex1", "ex2", "ex3", "cor26"]


@pytest.mark.parametrize("name", BANKS_2D)
def test_energy_and_round_trip(banks, name, rng):
    b = banks(name)
    f = rng.standard_normal((32, 32))
    dec = analyze(b, f, 3)
    assert dec.energy() == pytest.approx(np.sum(f**2), rel=1e-12)
    assert np.abs(synthesize(b, dec) - f).max() < 1e-12


def test_one_dimensional(banks, rng):
    b = banks("d4")
    f = rng.standard_normal(64)
    dec = analyze(b, f, 4)
    assert dec.energy() == pytest.approx(np.sum(f**2), rel=1e-12)
    assert np.abs(synthesize(b, dec) - f).max() < 1e-12


def test_delta_and_constant(banks):
    b = banks("ex1")
    f = np.zeros((16, 16))
    f[5, 7] = 1.0
    assert analyze(b, f, 2).energy() == pytest.approx(1.0)
    dec = analyze(b, np.full((16, 16), 3.0), 2)
    # constants live in the low-pass channel only
    assert max(np.abs(d).max() for d in dec.details) < 1e-13
    np.testing.assert_allclose(dec.residual, 3.0 * 4.0)


def test_zero_decomposition(banks):
    b = banks("ex2")
    dec = analyze(b, np.ones((8, 8)), 1)
    assert np.all(synthesize(b, dec.zeros_like()) == 0)


def test_padding_and_crop(banks, rng):
    b = banks("ex1")
    f = rng.standard_normal((13, 10))
    dec = analyze(b, f, 2)
    assert dec.padded_shape == (16, 12) == padded_shape(f.shape, 2)
    assert synthesize(b, dec).shape == f.shape
    assert np.abs(synthesize(b, dec) - f).max() < 1e-12


def test_shift_covariance(banks, rng):
    b = banks("ex3")
    f = rng.standard_normal((16, 16))
    d0 = analyze(b, f, 1)
    d1 = analyze(b, np.roll(f, (2, 4), axis=(0, 1)), 1)
    np.testing.assert_allclose(d1.details[0], np.roll(d0.details[0], (1, 2), axis=(1, 2)), atol=1e-13)


def test_truncation_bounds(banks, rng):
    b = banks("ex3")
    sigma = b.metadata["error_constant"]
    for _ in range(5):
        f = rng.standard_normal((32, 32))
        e = truncation_error(b, range(8), f, 2)
        assert -1e-12 <= e <= sigma + 1e-12
    assert truncation_error(b, range(len(b)), f, 2) == pytest.approx(0.0, abs=1e-12)
    assert truncation_error(b, [], np.zeros((8, 8)), 1) == 0.0


def test_energy_split(banks, rng):
    b = banks("ex1")
    f = rng.standard_normal((16, 16))
    dec = analyze(b, f, 2)
    kept, dropped, res = energy_split(dec, [0, 1])
    assert kept + dropped + res == pytest.approx(np.sum(f**2))
    with pytest.raises(IndexError):
        energy_split(dec, [8])


def test_convolve_demo_edge():
    h = mask_1d([-0.5, 0.0, 0.5], first=-1)
    f = np.r_[np.zeros(8), np.ones(8)]
    g = convolve_demo(h, f)
    assert g[7] == pytest.approx(0.5) and g[8] == pytest.approx(0.5)
    assert np.abs(g[1:6]).max() == 0


def test_convolve_demo_orientation():
    # offset (1, 0) reads the pixel one column to the right
    from framelets.mask import FilterMask, OffsetGrid

    m = FilterMask(OffsetGrid.from_offsets([(1, 0)]), [1.0])
    f = np.arange(16.0).reshape(4, 4)
    np.testing.assert_array_equal(convolve_demo(m, f), np.roll(f, -1, axis=1))
    m = FilterMask(OffsetGrid.from_offsets([(0, 1)]), [1.0])
    np.testing.assert_array_equal(convolve_demo(m, f), np.roll(f, 1, axis=0))


def test_errors(banks):
    b = banks("ex1")
    with pytest.raises(ValueError, match="levels"):
        analyze(b, np.ones((8, 8)), 4)
    with pytest.raises(ValueError):
        analyze(b, np.ones((8, 8)), 0)
    with pytest.raises(ValueError, match="2-D"):
        analyze(b, np.ones(8), 1)
    with pytest.raises(ValueError, match="finite"):
        analyze(b, np.full((8, 8), np.nan), 1)
    with pytest.raises(ValueError, match="no high-pass"):
        analyze(FilterBank(b.lowpass, ()), np.ones((8, 8)), 1)
    dec = analyze(b, np.ones((8, 8)), 1)
    with pytest.raises(ValueError, match="mismatch"):
        synthesize(banks("ex2"), dec) if len(banks("ex2")) != len(b) else synthesize(demo("cor26"), dec)
