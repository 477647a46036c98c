from __future__ import annotations

import pytest

from circleLib.generators import carpet
from circleLib.objects import Packing, PeripheralContinuum


@pytest.fixture
def two_disks() -> Packing:
    return Packing(
        [
            PeripheralContinuum.from_planar_circle(1, -2 + 0j, 0.5),
            PeripheralContinuum.from_planar_circle(2, 2 + 0j, 0.5),
        ],
        "two-disks",
    )


@pytest.fixture
def square_and_point() -> Packing:
    return Packing(
        [
            PeripheralContinuum.polygon(1, [-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j]),
            PeripheralContinuum.point(2, 3 + 3j),
        ],
        "square-and-point",
    )


@pytest.fixture
def carpet_2() -> Packing:
    return carpet(2)
