import numpy as np
import pytest

from framelets.catalog import DIFF3_BANK_B, SVD_BANK_B
from framelets.errors import NotParsevalError
from framelets.mask import FilterMask, OffsetGrid, delta
from framelets.spline import bspline_lowpass, sqrt_vector
from framelets.uep import (
    FilterBank,
    assemble_bank,
    check_diagonal_uep,
    check_general_uep,
    gram,
    parseval_defect,
)


def printed_bank(B):
    lp = bspline_lowpass(2, 2)
    return FilterBank(lp, tuple(FilterMask(lp.grid, r) for r in B))


def test_gram_of_printed_svd_bank_is_diag_a():
    lp = bspline_lowpass(2, 2)
    M = gram(lp.coeffs, SVD_BANK_B)
    np.testing.assert_allclose(M, np.diag(lp.coeffs), atol=2e-3)


def test_gram_trivial():
    np.testing.assert_array_equal(gram([1.0], np.zeros((0, 1))), [[1.0]])


def test_gram_shape_mismatch():
    with pytest.raises(ValueError, match="columns"):
        gram(np.ones(3), np.ones((2, 4)))


def test_d4_gram_pattern(banks):
    b = banks("d4")
    M = gram(b.a, b.B)
    for k, t in [(0, 2), (0, 3), (1, 2), (1, 3)]:
        assert abs(M[k, t]) < 1e-12
    assert M[0, 1] == pytest.approx(-M[2, 3], abs=1e-12)
    assert abs(M[0, 1]) > 0.1


def test_printed_svd_bank_passes_at_print_precision():
    assert check_diagonal_uep(printed_bank(SVD_BANK_B), 2e-3).passed


def test_zero_highpass_fails_with_known_deviation():
    lp = bspline_lowpass(2, 2)
    rep = check_diagonal_uep(FilterBank(lp, ()), 1e-10)
    assert not rep.passed
    a = lp.coeffs
    assert rep.diag_dev == pytest.approx(np.max(a - a**2))


def test_located_offdiagonal(banks):
    b = banks("ex1")
    B = b.B.copy()
    B[2, 4] += 0.05
    rep = check_diagonal_uep(FilterBank(b.lowpass, tuple(FilterMask(b.grid, r) for r in B)))
    assert not rep.passed
    assert 4 in rep.offdiag_at


def test_general_check_d4(banks):
    b = banks("d4")
    assert check_general_uep(b.lowpass, b.highpass, 64).deviation <= 1e-12
    assert not check_diagonal_uep(b).passed


def test_general_check_printed_ex3():
    b = printed_bank(DIFF3_BANK_B)
    assert check_general_uep(b.lowpass, b.highpass, 32).deviation <= 5e-3


def test_general_check_delta_fails():
    rep = check_general_uep(delta(2), [], 8)
    shifted = [v for q, v in rep.per_shift.items() if any(q)]
    assert min(shifted) == pytest.approx(1.0)
    assert rep.per_shift[(0.0, 0.0)] == pytest.approx(0.0)


def test_general_rejects_small_grid():
    with pytest.raises(ValueError):
        check_general_uep(delta(1), [], 1)


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "ex4", "cor26"])
def test_checks_agree(banks, name):
    b = banks(name)
    d = check_diagonal_uep(b)
    g = check_general_uep(b.lowpass, b.highpass, 32 if b.dim == 2 else 64)
    assert d.deviation <= 1e-10
    assert g.deviation <= max(10 * d.deviation, 1e-14)


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "ex4", "cor26"])
def test_highpass_sums_vanish(banks, name):
    b = banks(name)
    assert np.abs(b.B.sum(axis=1)).max() <= 1e-10
    assert len(b) + 1 >= len(b.grid)


def test_assemble_rejects_non_parseval():
    lp = bspline_lowpass(2, 2)
    c = sqrt_vector(lp)
    with pytest.raises(NotParsevalError, match="Parseval"):
        assemble_bank(c, np.zeros((8, 9)), lp)
    with pytest.raises(NotParsevalError, match="unit"):
        assemble_bank(2 * c, np.zeros((8, 9)), lp)


def test_assemble_trivial_n1():
    grid = OffsetGrid(np.zeros((1, 1), dtype=int))
    bank = assemble_bank([1.0], np.zeros((0, 1)), FilterMask(grid, [1.0]))
    assert len(bank) == 0


def test_assemble_haar():
    lp = bspline_lowpass(1, 1)
    c = sqrt_vector(lp)
    bank = assemble_bank(c, [[-c[1], c[0]]], lp)
    np.testing.assert_allclose(bank.B, [[-0.5, 0.5]])
    assert check_diagonal_uep(bank, 1e-14).passed


def test_bank_rejects_bad_provenance():
    lp = bspline_lowpass(1, 1)
    with pytest.raises(ValueError, match="provenance"):
        FilterBank(lp, (lp,), ("invented",))


def test_parseval_defect_identity():
    assert parseval_defect(np.eye(4)) == 0.0
