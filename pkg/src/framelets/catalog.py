"""Reference filter data used by the demo designs and the test-suite.

Matrices are written as printed: row 0 is the top of the filter and the
center cell is offset (0, 0).  Printed values carry 3 to 4 significant
figures.
"""

from __future__ import annotations

import numpy as np

SQRT3 = np.sqrt(3.0)

# SVD-only bank on the order-2 tensor spline, 3 significant figures.
SVD_BANK_B = 1e-2 * np.array(
    [
        [-8.84, 31.8, -1.77, -3.54, -7.07, -3.54, -1.77, -3.54, -1.77],
        [-6.25, -2.5, 23.8, -2.5, -5, -2.5, -1.25, -2.5, -1.25],
        [-8.84, -3.54, -1.77, 31.8, -7.07, -3.54, -1.77, -3.54, -1.77],
        [-12.5, -5, -2.5, -5, 40, -5, -2.5, -5, -2.5],
        [-8.84, -3.54, -1.77, -3.54, -7.07, 31.8, -1.77, -3.54, -1.77],
        [-6.25, -2.5, -1.25, -2.5, -5, -2.5, 23.8, -2.5, -1.25],
        [-8.84, -3.54, -1.77, -3.54, -7.07, -3.54, -1.77, 31.8, -1.77],
        [-6.25, -2.5, -1.25, -2.5, -5, -2.5, -1.25, -2.5, 23.8],
    ]
)

# Four first-order and four second-order finite differences on a 3x3 support.
DIFF3 = [
    np.array([[0, 0, 1], [0, 0, 0], [-1, 0, 0]], dtype=float),
    np.array([[0, 1, 0], [0, 0, 0], [0, -1, 0]], dtype=float),
    np.array([[1, 0, 0], [0, 0, 0], [0, 0, -1]], dtype=float),
    np.array([[0, 0, 0], [-1, 0, 1], [0, 0, 0]], dtype=float),
    np.array([[0, 0, 1], [0, -2, 0], [1, 0, 0]], dtype=float),
    np.array([[0, 1, 0], [0, -2, 0], [0, 1, 0]], dtype=float),
    np.array([[1, 0, 0], [0, -2, 0], [0, 0, 1]], dtype=float),
    np.array([[0, 0, 0], [1, -2, 1], [0, 0, 0]], dtype=float),
]

# Weights reported alongside DIFF3 (multipliers of the divided rows as printed).
DIFF3_LAMBDA_PRINTED = np.array([0.0442, 0.0884, 0.0442, 0.0884, 0.0234, 0.0293, 0.0088, 0.0316])

# The 12-filter bank built on DIFF3 (rows 1-8 designed, 9-12 completion).
DIFF3_BANK_B = 1e-2 * np.array(
    [
        [-17.7, 0, 0, 0, 0, 0, 0, 0, 17.7],
        [0, -25, 0, 0, 0, 0, 0, 25, 0],
        [0, 0, -17.7, 0, 0, 0, 17.7, 0, 0],
        [0, 0, 0, -25, 0, 25, 0, 0, 0],
        [0, 0, 0, -6.63, 13.26, -6.63, 0, 0, 0],
        [0, 0, -11.75, 0, 23.5, 0, -11.75, 0, 0],
        [0, -2.5, 0, 0, 5, 0, 0, -2.5, 0],
        [-12.65, 0, 0, 0, 25.3, 0, 0, 0, -12.65],
        [0.002, 0, 0.001, 0.0003, -0.008, 0.0003, 0.001, 0, 0.002],
        [-8.52, 0.0288, 9.59, 0.233, -2.66, 0.233, 9.59, 0.0288, -8.52],
        [5.46, -0.939, 5.69, -19, 17.5, -19, 5.69, -0.939, 5.46],
        [3.39, -21.5, 3.4, 8.1, 13.2, 8.1, 3.4, -21.5, 3.39],
    ]
)

# Oriented differences on the 5x5 support of the order-4 tensor spline.
ORIENTED5_PRINTED = [
    np.array(
        [[0, 0, 0, -1, 0], [0, 0, -1, 0, 1], [0, -1, 0, 1, 0], [-1, 0, 1, 0, 0], [0, 1, 0, 0, 0]],
        dtype=float,
    ),
    np.array(
        [[0, 0, -1, 0, 1], [0, 0, 0, 0, 0], [0, -1, 0, 1, 0], [0, 0, 0, 0, 0], [-1, 0, 1, 0, 0]],
        dtype=float,
    ),
    np.array([[0, -1, 0, 1, 0]] * 5, dtype=float),
    np.array(
        [[-1, 0, 1, 0, 0], [0, 0, 0, 0, 0], [0, -1, 0, 1, 0], [0, 0, 0, 0, 0], [0, 0, -1, 0, 1]],
        dtype=float,
    ),
    np.array(
        [[0, 0, 0, 1, -1], [0, 0, 1, -2, 1], [0, 1, -2, 1, 0], [1, -2, 1, 0, 0], [-1, 1, 0, 0, 0]],
        dtype=float,
    ),
    np.array(
        [[0, 0, 1, -2, 1], [0, 0, 0, 0, 0], [0, 1, -2, 1, 0], [0, 0, 0, 0, 0], [1, -2, 1, 0, 0]],
        dtype=float,
    ),
    np.array([[0, 1, -2, 1, 0]] * 5, dtype=float),
    np.array(
        [[1, -2, 1, 0, 0], [0, 0, 0, 0, 0], [0, 1, -2, 1, 0], [0, 0, 0, 0, 0], [0, 0, 1, -2, 1]],
        dtype=float,
    ),
]
# positions of the printed matrices among the 24 generated ones (0-based)
ORIENTED5_PRINTED_INDEX = [0, 1, 2, 3, 12, 13, 14, 15]

# 3x3 high-pass with vanishing moments along (0, 1), 4 decimals.
FOUR_DVM_FILTER = np.array(
    [
        [0.1655, -0.2372, 0.0718],
        [-0.0073, 0.0146, -0.0073],
        [-0.0207, 0.0414, -0.0207],
    ]
)

# Daubechies D4 pair normalized to sum 1, offsets 0..3.
D4_A = np.array([1 + SQRT3, 3 + SQRT3, 3 - SQRT3, 1 - SQRT3]) / 8.0
D4_B = np.array([1 - SQRT3, SQRT3 - 3, 3 + SQRT3, -1 - SQRT3]) / 8.0

# Central-line lead points on the 5x5 grid, (x, y), swept counter-clockwise
# from the main diagonal.
_LEADS = [(2, 2), (1, 2), (0, 2), (-1, 2), (-2, 2), (-2, 1), (-2, 0), (-2, -1)]


def _line_points(lead, radius):
    g = np.gcd(abs(lead[0]), abs(lead[1]))
    step = np.array(lead) // g
    return [tuple(int(v) for v in t * step) for t in range(-g, g + 1)]


def _shifts(lead):
    x, y = lead
    primary = (1, 0) if y == 2 else (0, 1)
    # steep and shallow lines admit both neighbouring bands
    alternate = (0, 1) if primary == (1, 0) else (1, 0)
    return primary, (alternate if abs(x) != abs(y) and x != 0 and y != 0 else None)


def _to_matrix(values: dict, radius: int) -> np.ndarray:
    n = 2 * radius + 1
    h = np.zeros((n, n))
    for (x, y), v in values.items():
        h[radius - y, x + radius] += v
    return h


def _first(points, e, radius):
    inside = lambda p: max(abs(p[0]), abs(p[1])) <= radius
    vals = {}
    for p in points:
        for sgn in (+1, -1):
            q = (p[0] + sgn * e[0], p[1] + sgn * e[1])
            if inside(q):
                vals[q] = vals.get(q, 0.0) + sgn
    return vals


def _second(points, e, radius):
    inside = lambda p: max(abs(p[0]), abs(p[1])) <= radius
    vals = {}
    for p in points:
        for sgn in (+1, -1):
            q = (p[0] + sgn * e[0], p[1] + sgn * e[1])
            if inside(q):
                vals[q] = vals.get(q, 0.0) + 1.0
                vals[p] = vals.get(p, 0.0) - 1.0
    return vals


def oriented_differences(radius: int = 2) -> list[np.ndarray]:
    """First- and second-order differences across 12 oriented central bands.

    A central band is the set of lattice points on a line through the
    origin and a lead point on the top or left edge of the grid.  The
    difference acts across the band towards its nearest parallel
    neighbours: horizontally for bands led from the top edge, vertically
    for bands led from the left edge.  Bands of slope +-2 and +-1/2 also
    get the other neighbour pair.  Returns the 12 first-order matrices
    followed by the 12 second-order ones.
    """
    if radius != 2:
        raise ValueError("the band layout is defined for the 5x5 grid")
    bands = []
    for lead in _LEADS:
        primary, _ = _shifts(lead)
        bands.append((lead, primary))
    for lead in _LEADS:
        _, alt = _shifts(lead)
        if alt is not None:
            bands.append((lead, alt))
    first = [_to_matrix(_first(_line_points(l, radius), e, radius), radius) for l, e in bands]
    second = [_to_matrix(_second(_line_points(l, radius), e, radius), radius) for l, e in bands]
    return first + second
