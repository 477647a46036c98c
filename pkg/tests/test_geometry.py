from __future__ import annotations

import math

import numpy as np
import pytest

from circleLib.constants import DISK_FATNESS_BASELINE
from circleLib.errors import GeometryError
from circleLib.generators import thin_rectangles
from circleLib.geometry import (
    ball_intersection_area,
    coarea_check,
    continua_intersect,
    count_large_intersecting,
    diameter,
    distance_to,
    estimate_fatness,
    hausdorff_distance,
    hausdorff_limit_fatness_check,
    is_fat,
    l2_diameters,
    maximal_inequality_check,
    mobius_fatness_check,
    radial_hit_check,
    random_mobius,
    relative_distance,
    set_distance,
)
from circleLib.objects import Packing, PeripheralContinuum
from circleLib.sphere import spherical_distance, spherical_distances


@pytest.fixture
def small_disk() -> PeripheralContinuum:
    return PeripheralContinuum.from_planar_circle(1, 0.2 + 0.1j, 0.15)


@pytest.fixture
def unit_square() -> PeripheralContinuum:
    return PeripheralContinuum.polygon(2, [0j, 1 + 0j, 1 + 1j, 1j])


def test_diameter_of_disks() -> None:
    assert diameter(PeripheralContinuum.disk(1, 0j, 0.3)) == pytest.approx(0.6)
    assert diameter(PeripheralContinuum.disk(1, 0j, 2.0)) == pytest.approx(math.pi)
    disk = PeripheralContinuum.from_planar_circle(1, 3 + 0j, 0.5)
    assert diameter(disk, "chart") == pytest.approx(1.0)
    assert diameter(PeripheralContinuum.point(2, 1j)) == 0.0


def test_diameter_of_polygons(unit_square: PeripheralContinuum) -> None:
    small = PeripheralContinuum.polygon(1, [0j, 0.01 + 0j, 0.01 + 0.01j, 0.01j])
    assert diameter(small) == pytest.approx(spherical_distance(0, 0.01 + 0.01j), rel=1e-4)
    assert diameter(unit_square, "chart") == pytest.approx(math.sqrt(2))


def test_diameter_of_point_sets() -> None:
    assert diameter(np.array([0j, 1 + 0j])) == pytest.approx(math.pi / 2)
    assert diameter([0j, 3 + 4j], "chart") == pytest.approx(5)
    assert diameter([1j]) == 0.0
    with pytest.raises(ValueError, match="unknown metric"):
        diameter([0j], "taxicab")  # type: ignore[arg-type]


def test_l2_diameters(two_disks: Packing) -> None:
    d = diameter(two_disks[0])
    assert l2_diameters(two_disks) == pytest.approx(math.sqrt(2) * d)
    assert l2_diameters(Packing()) == 0.0


def test_continua_intersect(unit_square: PeripheralContinuum) -> None:
    touching = PeripheralContinuum.polygon(3, [1 + 0j, 2 + 0j, 2 + 1j, 1 + 1j])
    assert continua_intersect(unit_square, touching)
    near = PeripheralContinuum.from_planar_circle(4, 2 + 0.5j, 0.9)
    assert not continua_intersect(unit_square, near)
    overlapping = PeripheralContinuum.from_planar_circle(4, 2 + 0.5j, 1.1)
    assert continua_intersect(unit_square, overlapping)
    assert continua_intersect(PeripheralContinuum.point(5, 0.5 + 0.5j), unit_square)


def test_distance_to(unit_square: PeripheralContinuum) -> None:
    z = np.array([0.5 + 0.5j, 2 + 0.5j])
    chart = distance_to(z, unit_square, "chart")
    assert chart.tolist() == pytest.approx([0.0, 1.0])
    spherical = distance_to(z, unit_square)
    assert spherical[0] == 0.0
    edge = 1 + 1j * np.linspace(0, 1, 100001)
    nearest = float(np.min(spherical_distances(2 + 0.5j, edge)))
    assert spherical[1] == pytest.approx(nearest, rel=1e-6)


def test_set_distance(two_disks: Packing) -> None:
    A, B = two_disks
    assert set_distance(A, B, "chart") == pytest.approx(3.0)
    assert set_distance(A, A) == 0.0
    assert set_distance([0j], [1 + 0j]) == pytest.approx(math.pi / 2)
    # a point against a disk
    assert set_distance([-1 + 0j], A, "chart") == pytest.approx(0.5)


def test_hausdorff_distance(small_disk: PeripheralContinuum) -> None:
    assert hausdorff_distance(small_disk, small_disk) == 0.0
    A = PeripheralContinuum.from_planar_circle(1, 0j, 0.5)
    B = PeripheralContinuum.from_planar_circle(2, 1 + 0j, 0.25)
    assert hausdorff_distance(A, B, "chart") == pytest.approx(1.25)
    square = PeripheralContinuum.polygon(3, [0j, 0.5 + 0j, 0.5 + 0.5j, 0.5j])
    shifted = PeripheralContinuum.polygon(4, [0.1 + 0j, 0.6 + 0j, 0.6 + 0.5j, 0.1 + 0.5j])
    assert hausdorff_distance(square, shifted, "chart") == pytest.approx(0.1, rel=1e-3)


def test_hausdorff_distance_of_concentric_disks() -> None:
    inner = PeripheralContinuum.from_planar_circle(1, 0.3j, 0.2)
    outer = PeripheralContinuum.from_planar_circle(2, 0.3j, 0.5)
    assert hausdorff_distance(inner, outer, "chart") == pytest.approx(0.3)
    assert hausdorff_distance(outer, inner, "chart") == pytest.approx(0.3)
    assert hausdorff_distance(
        PeripheralContinuum.disk(1, 0j, 0.3), PeripheralContinuum.disk(2, 0j, 0.7)
    ) == pytest.approx(0.4)


def test_relative_distance(two_disks: Packing) -> None:
    assert relative_distance(*two_disks) == pytest.approx(3.0)
    with pytest.raises(GeometryError, match="non-degenerate"):
        relative_distance(two_disks[0], PeripheralContinuum.point(3, 5j))


def test_relative_distance_threshold() -> None:
    E = PeripheralContinuum.from_planar_circle(1, 0j, 0.5)
    F = PeripheralContinuum.from_planar_circle(2, 13 + 0j, 0.5)
    assert relative_distance(E, F) == pytest.approx(12.0)


def test_count_large_intersecting(carpet_2: Packing) -> None:
    everything = PeripheralContinuum.polygon(99, [-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])
    assert count_large_intersecting(carpet_2, everything, 1e-3) == 9
    # only the central square reaches a tenth of the window diagonal
    assert count_large_intersecting(carpet_2, everything, 0.1, "chart") == 1
    assert count_large_intersecting(carpet_2, np.array([0j]), 1.0) == 1
    assert count_large_intersecting(carpet_2, everything, 1e6) == 0
    with pytest.raises(ValueError):
        count_large_intersecting(carpet_2, everything, 0)


def test_ball_intersection_area(small_disk: PeripheralContinuum) -> None:
    center, _ = small_disk.planar_circle
    assert ball_intersection_area(small_disk, center, 0.05) == pytest.approx(
        2 * math.pi * (1 - math.cos(0.05)), rel=1e-2
    )
    assert ball_intersection_area(small_disk, 10 + 0j, 0.01) == 0.0
    assert ball_intersection_area(small_disk, 10 + 0j, 0.5) is None


def test_fatness(small_disk: PeripheralContinuum, unit_square: PeripheralContinuum) -> None:
    disk = estimate_fatness(small_disk, centers=12, radii=6)
    assert disk.tau_hat >= DISK_FATNESS_BASELINE
    assert disk.evaluated > 0
    assert disk.witness_center is not None

    square = estimate_fatness(unit_square, centers=12, radii=6).tau_hat
    thin = PeripheralContinuum.polygon(3, [0j, 0.5 + 0j, 0.5 + 0.005j, 0.005j])
    assert estimate_fatness(thin, centers=12, radii=6).tau_hat < 0.1 < square
    assert not is_fat(thin, 0.1, centers=12, radii=6)

    point = estimate_fatness(PeripheralContinuum.point(4, 0j))
    assert point.is_degenerate
    assert point.tau_hat == math.inf


def test_square_fatness_lies_between_corner_bounds() -> None:
    side = 0.05
    square = PeripheralContinuum.polygon(5, [0j, side + 0j, side + side * 1j, side * 1j])
    tau = estimate_fatness(square, centers=12, radii=6).tau_hat
    # corner balls capture a quarter disk at r = side and half of r^2 near the diagonal
    assert 0.45 < tau < math.pi / 4 + 0.05


def test_fatness_decreases_with_aspect() -> None:
    _, moderate, thin = thin_rectangles((1, 10, 100))
    tau_10 = estimate_fatness(moderate, centers=12, radii=6).tau_hat
    tau_100 = estimate_fatness(thin, centers=12, radii=6).tau_hat
    assert tau_100 < tau_10


def test_fatness_is_reproducible(unit_square: PeripheralContinuum) -> None:
    first = estimate_fatness(unit_square, centers=9, radii=4, seed=5)
    second = estimate_fatness(unit_square, centers=9, radii=4, seed=5)
    assert first == second


def test_random_mobius() -> None:
    rng = np.random.default_rng(0)
    for _ in range(10):
        T = random_mobius(rng)
        assert T.a * T.d - T.b * T.c == pytest.approx(1)


def test_hausdorff_limit_fatness(small_disk: PeripheralContinuum) -> None:
    check = hausdorff_limit_fatness_check(small_disk, centers=8, radii=4)
    assert check.passed
    assert check.values["hausdorff_4"] < check.values["hausdorff_0"]


def test_mobius_fatness(small_disk: PeripheralContinuum) -> None:
    check = mobius_fatness_check(small_disk, maps=4, centers=8, radii=4)
    assert check.passed
    assert check.values["tau_min"] > 0


def test_radial_hit(small_disk: PeripheralContinuum) -> None:
    check = radial_hit_check(small_disk, samples=10, radii=4)
    assert check.passed
    assert check.values["balls"] > 0
    with pytest.raises(GeometryError):
        radial_hit_check(PeripheralContinuum.point(3, 0j))


def test_coarea() -> None:
    check = coarea_check(instances=3, levels=200, circle_samples=256)
    assert check.passed
    # psi is a distance function, so the coarea integral equals the mass
    assert check.values["mean_lhs_over_mass"] == pytest.approx(1.0, rel=0.05)


def test_maximal_inequality() -> None:
    check = maximal_inequality_check(instances=2, cores=10)
    assert check.passed
    assert check.values["max_ratio"] >= 1.0
