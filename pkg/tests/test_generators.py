from __future__ import annotations

import math

import pytest

from circleLib.errors import GeometryError
from circleLib.generators import (
    GENERATORS,
    carpet,
    generate,
    points,
    random_l2,
    regular_polygon,
    round_packing,
    thin_rectangles,
)
from circleLib.geometry import diameter, l2_diameters


@pytest.mark.parametrize("level, count", [(0, 0), (1, 1), (2, 9), (3, 73)])
def test_carpet_counts(level: int, count: int) -> None:
    packing = carpet(level)
    assert len(packing) == count
    assert packing.label == f"carpet-{level}"
    assert [K.id for K in packing] == list(range(1, count + 1))


def test_carpet_geometry() -> None:
    packing = carpet(2)
    packing.check()
    # the central square of side 1/3 comes first
    central = packing[0]
    assert central.kind == "polygon"
    assert sorted((z.real, z.imag) for z in central.vertices) == pytest.approx(
        [(-1 / 6, -1 / 6), (-1 / 6, 1 / 6), (1 / 6, -1 / 6), (1 / 6, 1 / 6)]
    )
    assert all(K.chart_diameter() == pytest.approx(math.sqrt(2) / 9) for K in packing[1:])


def test_carpet_l2_diameters() -> None:
    (middle,) = carpet(1)
    assert diameter(middle, "chart") == pytest.approx(math.sqrt(2) / 3)
    # level k adds 8^(k-1) squares of squared diameter 2 * 9^-k, summing to 2
    partial = math.fsum(8 ** (k - 1) * 2 * 9.0**-k for k in range(1, 5))
    assert l2_diameters(carpet(4), "chart") ** 2 == pytest.approx(partial, abs=1e-12)
    assert partial < 2
    assert 2 - partial == pytest.approx(2 * (8 / 9) ** 4)


def test_carpet_negative_level() -> None:
    with pytest.raises(ValueError, match="non-negative"):
        carpet(-1)


def test_random_l2() -> None:
    packing = random_l2(seed=3, count=20)
    assert len(packing) == 20
    packing.check()
    kinds = {K.kind for K in packing}
    assert kinds == {"disk", "polygon"}
    diameters = [diameter(K) for K in packing]
    assert diameters == sorted(diameters, reverse=True)
    assert math.isfinite(l2_diameters(packing))


def test_random_l2_long_sequence() -> None:
    packing = random_l2(seed=7, exponent=0.75, count=200)
    assert packing.min_pairwise_distance() > 0
    assert math.isfinite(l2_diameters(packing))


def test_random_l2_is_reproducible() -> None:
    assert random_l2(seed=1, count=10) == random_l2(seed=1, count=10)
    assert random_l2(seed=1, count=10) != random_l2(seed=2, count=10)


def test_random_l2_exponent() -> None:
    with pytest.raises(GeometryError, match="exponent"):
        random_l2(seed=0, exponent=0.5)


def test_round_packing() -> None:
    packing = round_packing(seed=0, count=8)
    packing.check()
    assert all(K.kind == "disk" for K in packing)
    assert packing.label == "round-0"


def test_points() -> None:
    packing = points(seed=0, count=6)
    packing.check()
    assert len(packing) == 6
    assert all(K.is_degenerate for K in packing)
    assert packing.min_pairwise_distance() > 0


def test_thin_rectangles() -> None:
    packing = thin_rectangles((1, 10, 100))
    packing.check()
    assert len(packing) == 3
    # ids follow decreasing diameter, the square first
    assert packing[0].chart_diameter() > packing[2].chart_diameter()
    with pytest.raises(GeometryError, match="at least 1"):
        thin_rectangles((0.5,))


def test_regular_polygon() -> None:
    hexagon = regular_polygon(1, 1j, 0.5, 6)
    assert len(hexagon.vertices) == 6
    assert all(abs(z - 1j) == pytest.approx(0.5) for z in hexagon.vertices)
    with pytest.raises(GeometryError):
        regular_polygon(1, 0j, 1.0, 2)


def test_generate() -> None:
    assert set(GENERATORS) == {"carpet", "random_l2", "round", "points", "thin"}
    assert generate("carpet", level=2) == carpet(2)
    assert generate("points", seed=4, count=3) == points(4, 3)
    with pytest.raises(GeometryError, match="unknown packing kind"):
        generate("apollonian")
