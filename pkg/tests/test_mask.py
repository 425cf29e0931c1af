import numpy as np
import pytest

from framelets.errors import DesignError
from framelets.mask import (
    FilterMask,
    OffsetGrid,
    delta,
    devectorize,
    evaluate,
    half_shifts,
    mask_1d,
    tensor_product,
    vectorize,
)
from framelets.spline import bspline_lowpass


def test_vectorize_lowpass_matrix():
    h = np.array([[1, 2, 1], [2, 4, 2], [1, 2, 1]]) / 16
    m = vectorize(h)
    np.testing.assert_allclose(m.coeffs, np.array([1, 2, 1, 2, 4, 2, 1, 2, 1]) / 16)
    assert m.grid == OffsetGrid.box([-1, -1], [1, 1])


def test_vectorize_zero_matrix():
    assert not np.any(vectorize(np.zeros((3, 3))).coeffs)


def test_vectorize_vertical_difference():
    m = vectorize([[0, 1, 0], [0, 0, 0], [0, -1, 0]])
    nz = {tuple(o): b for o, b in zip(m.offsets.tolist(), m.coeffs) if b}
    assert nz == {(0, -1): -1.0, (0, 1): 1.0}


def test_order_is_bottom_row_first():
    h = np.arange(9.0).reshape(3, 3)
    m = vectorize(h)
    np.testing.assert_array_equal(m.coeffs, h[::-1].ravel())


def test_offcenter_anchor():
    m = vectorize([[1.0, -1.0]], anchor=(0, 0))
    assert m.offsets.tolist() == [[0, 0], [1, 0]]


def test_vectorize_rejects_wrong_target_grid():
    with pytest.raises(DesignError, match="dimension mismatch"):
        vectorize(np.zeros((3, 3)), grid=OffsetGrid.box([-2, -2], [2, 2]))


def test_devectorize_roundtrip():
    h = np.random.default_rng(0).standard_normal((3, 5))
    mat, anchor = devectorize(vectorize(h))
    np.testing.assert_array_equal(mat, h)
    assert anchor == (1, 2)


def test_evaluate_basics():
    lp = bspline_lowpass(2, 2)
    assert evaluate(lp, [0.0, 0.0]) == pytest.approx(1.0)
    assert abs(evaluate(lp, [0.5, 0.0])) < 1e-15
    unit = FilterMask(OffsetGrid(np.array([[1, 0]])), [1.0])
    assert evaluate(unit, [0.25, 0.0]) == pytest.approx(1j)


def test_evaluate_batch_shape():
    lp = bspline_lowpass(2, 2)
    g = np.zeros((4, 3, 2))
    assert evaluate(lp, g).shape == (4, 3)


def test_tensor_product_spline():
    one = mask_1d([1, 2, 1], first=-1).scaled(0.25)
    np.testing.assert_allclose(tensor_product(one, one).coeffs, np.array([1, 2, 1, 2, 4, 2, 1, 2, 1]) / 16)


def test_tensor_with_delta_embeds():
    m = mask_1d([0.25, 0.5, 0.25], first=-1)
    t = tensor_product(m, delta(1))
    assert t.dim == 2
    np.testing.assert_array_equal(t.offsets[:, 1], 0)
    np.testing.assert_allclose(t.coeffs, m.coeffs)


def test_tensor_order4_center():
    one = mask_1d([1, 4, 6, 4, 1], first=-2).scaled(1 / 16)
    t = tensor_product(one, one)
    assert t.coeffs.sum() == pytest.approx(1.0)
    assert t.coeffs[t.grid.index((0, 0))] == pytest.approx(36 / 256)


def test_tensor_factorizes():
    rng = np.random.default_rng(1)
    m1 = mask_1d(rng.standard_normal(3), first=-1)
    m2 = mask_1d(rng.standard_normal(4), first=0)
    g = rng.random((5, 2))
    np.testing.assert_allclose(
        evaluate(tensor_product(m1, m2), g), evaluate(m1, g[:, :1]) * evaluate(m2, g[:, 1:]), atol=1e-13
    )


def test_grid_validation():
    with pytest.raises(ValueError, match="distinct"):
        OffsetGrid.from_offsets([[0, 0], [0, 0]])
    with pytest.raises(ValueError, match="canonical"):
        OffsetGrid(np.array([[0, 1], [0, 0]]))
    assert list(half_shifts(2)[0]) == [0.0, 0.0]
    assert len(half_shifts(3)) == 8


def test_on_grid_rejects_outside_support():
    m = vectorize(np.ones((5, 5)))
    with pytest.raises(DesignError, match="outside the grid"):
        m.on_grid(OffsetGrid.box([-1, -1], [1, 1]))


def test_masks_are_immutable():
    m = vectorize(np.eye(3))
    with pytest.raises(ValueError):
        m.coeffs[0] = 5.0
