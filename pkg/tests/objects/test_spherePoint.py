from __future__ import annotations

import math

import pytest

from circleLib.objects import SpherePoint


@pytest.mark.parametrize(
    "value, expected",
    [
        ("inf", SpherePoint.infinity()),
        (" Infinity ", SpherePoint.infinity()),
        ("∞", SpherePoint.infinity()),
        (complex(math.inf, 0), SpherePoint.infinity()),
        (2, SpherePoint(2 + 0j)),
        ("0.5+2j", SpherePoint(0.5 + 2j)),
        ("0.5 - 2j", SpherePoint(0.5 - 2j)),
        (SpherePoint(1j), SpherePoint(1j)),
    ],
)
def test_coerce(value: object, expected: SpherePoint) -> None:
    assert SpherePoint.coerce(value) == expected  # type: ignore[arg-type]


def test_coerce_rejects_garbage() -> None:
    with pytest.raises(ValueError):
        SpherePoint.coerce("north pole")


def test_poles() -> None:
    assert SpherePoint(0j).to_vector() == (0.0, 0.0, -1.0)
    assert SpherePoint.infinity().to_vector() == (0.0, 0.0, 1.0)
    assert SpherePoint.from_vector((0.0, 0.0, 1.0)).infinite
    assert SpherePoint.from_vector((0.0, 0.0, -2.0)) == SpherePoint(0j)


@pytest.mark.parametrize("z", [1 + 0j, -0.25 + 3j, 1e6 - 1e6j, 1e-9j])
def test_vector_round_trip(z: complex) -> None:
    x, y, h = SpherePoint(z).to_vector()
    assert x * x + y * y + h * h == pytest.approx(1.0)
    back = SpherePoint.from_vector((x, y, h))
    assert not back.infinite
    assert back.value == pytest.approx(z, rel=1e-9, abs=1e-15)


def test_str() -> None:
    assert str(SpherePoint.infinity()) == "inf"
    assert str(SpherePoint(1 + 2j)) == "(1+2j)"
