from __future__ import annotations

import math

import pytest

from circleLib.errors import GeometryError
from circleLib.objects import Packing, PeripheralContinuum


def test_sequence_interface(two_disks: Packing) -> None:
    assert len(two_disks) == 2
    assert [K.id for K in two_disks] == [1, 2]
    assert two_disks[1].id == 2
    assert [K.id for K in two_disks[:1]] == [1]
    assert two_disks.by_id(2) is two_disks[1]
    with pytest.raises(KeyError):
        two_disks.by_id(3)


def test_first(two_disks: Packing) -> None:
    assert len(two_disks.first(0)) == 0
    head = two_disks.first(1)
    assert [K.id for K in head] == [1]
    assert head.label == two_disks.label
    # the original is left alone
    assert len(two_disks) == 2
    with pytest.raises(GeometryError, match="n must lie in"):
        two_disks.first(3)


def test_check(two_disks: Packing, square_and_point: Packing) -> None:
    two_disks.check()
    square_and_point.check()


def test_check_overlap() -> None:
    packing = Packing(
        [
            PeripheralContinuum.from_planar_circle(1, 0j, 1.0),
            PeripheralContinuum.from_planar_circle(2, 1.5 + 0j, 1.0),
        ]
    )
    with pytest.raises(GeometryError, match="intersect"):
        packing.check()


def test_check_duplicate_ids() -> None:
    packing = Packing([PeripheralContinuum.point(1, 0j), PeripheralContinuum.point(1, 1j)])
    with pytest.raises(GeometryError, match="not unique"):
        packing.check()


def test_check_tail(two_disks: Packing) -> None:
    growing = Packing(
        [
            PeripheralContinuum.from_planar_circle(1, 0j, 0.1),
            PeripheralContinuum.from_planar_circle(2, 2 + 0j, 0.5),
        ]
    )
    with pytest.raises(GeometryError, match="diameters increase"):
        growing.check()
    growing.tail_index = 2
    growing.check()


def test_check_sphere_radius(two_disks: Packing) -> None:
    two_disks.sphere_radius = 2.0
    with pytest.raises(GeometryError, match="sphere radius"):
        two_disks.check()


def test_min_pairwise_distance(two_disks: Packing) -> None:
    assert Packing().min_pairwise_distance() == math.inf
    assert two_disks.first(1).min_pairwise_distance() == math.inf
    # the caps are nearest across infinity, at 2.5 and -2.5
    expected = 2 * math.pi - 4 * math.atan(2.5)
    assert two_disks.min_pairwise_distance() == pytest.approx(expected, rel=1e-6)


def test_bounds(square_and_point: Packing) -> None:
    assert square_and_point.getBounds() == (-1, -1, 3, 3)
    assert Packing().getBounds() is None


def test_pen_draws_polygons() -> None:
    packing = Packing()
    pen = packing.getPen()
    pen.moveTo((0, 0))
    pen.lineTo((1, 0))
    pen.lineTo((0, 1))
    pen.closePath()
    pen.moveTo((2, 2))
    pen.lineTo((3, 2))
    pen.lineTo((3, 3))
    pen.closePath()
    assert [K.id for K in packing] == [1, 2]
    assert packing[0].kind == "polygon"
    assert packing[0].vertices == (0j, 1 + 0j, 1j)


def test_pen_rejects_curves() -> None:
    pen = Packing().getPen()
    pen.moveTo((0, 0))
    pen.curveTo((1, 0), (1, 1), (0, 1))
    with pytest.raises(GeometryError, match="segment type"):
        pen.closePath()
