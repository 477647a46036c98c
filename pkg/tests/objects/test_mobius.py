from __future__ import annotations

import cmath

import numpy as np
import pytest

from circleLib.errors import GeometryError
from circleLib.objects import MobiusTransform, SpherePoint
from circleLib.objects.mobius import circumcircle


@pytest.fixture
def transform() -> MobiusTransform:
    return MobiusTransform.from_coefficients(2, 1j, 1, 3)


def test_normalized_determinant(transform: MobiusTransform) -> None:
    a, b, c, d = transform.coefficients
    assert a * d - b * c == pytest.approx(1)


def test_unnormalized_coefficients_rejected() -> None:
    with pytest.raises(GeometryError, match="determinant 1"):
        MobiusTransform(2 + 0j, 0j, 0j, 2 + 0j)


def test_degenerate_coefficients() -> None:
    with pytest.raises(GeometryError, match="degenerate"):
        MobiusTransform.from_coefficients(1, 2, 2, 4)


@pytest.mark.parametrize(
    "points",
    [
        (0.5 + 0.5j, -1 + 0j, 2j),
        ("inf", 0, 1),
        (0, "inf", 1),
        (0, 1, "inf"),
    ],
)
def test_from_points(points: tuple) -> None:
    T = MobiusTransform.from_points(*points)
    z1, z2, z3 = (SpherePoint.coerce(p) for p in points)
    assert abs(T(z1).value) < 1e-12 and not T(z1).infinite
    assert T(z2).value == pytest.approx(1)
    assert T(z3).infinite or abs(T(z3).value) > 1e12


def test_from_points_coincident() -> None:
    with pytest.raises(GeometryError, match="coincide"):
        MobiusTransform.from_points(1, 1, "inf")


def test_compose_and_inverse(transform: MobiusTransform) -> None:
    z = np.array([0.25 + 1j, -3 + 0.5j, 10j])
    other = MobiusTransform.from_coefficients(1, -0.5, 0.5j, 1)
    composed = transform.compose(other)
    assert composed.apply(z) == pytest.approx(transform.apply(other.apply(z)))
    assert transform.inverse().apply(transform.apply(z)) == pytest.approx(z)


def test_apply_at_infinity_and_pole(transform: MobiusTransform) -> None:
    w = transform.apply(np.array([complex(np.inf, 0), 1j]))
    assert w[0] == pytest.approx(2)
    assert w[1] == pytest.approx((2j + 1j) / (1j + 3))
    assert transform.pole().value == pytest.approx(-3)
    assert transform(SpherePoint.infinity()).value == pytest.approx(2)


def test_spherical_derivative_matches_vectorized(transform: MobiusTransform) -> None:
    z = np.array([0j, 1 + 1j, complex(np.inf, np.inf)])
    expected = [
        transform.spherical_derivative(0j),
        transform.spherical_derivative(1 + 1j),
        transform.spherical_derivative("inf"),
    ]
    assert transform.spherical_derivatives(z) == pytest.approx(expected)


def test_rotations() -> None:
    assert MobiusTransform.identity().is_rotation()
    R = MobiusTransform.rotation_to_origin(2 - 1j)
    assert R.is_rotation()
    assert abs(R(2 - 1j).value) < 1e-12
    # isometries have unit spherical derivative everywhere
    assert R.spherical_derivatives(np.array([0j, 5 + 5j])) == pytest.approx([1, 1])
    assert not MobiusTransform.from_coefficients(2, 0, 0, 0.5).is_rotation()
    assert MobiusTransform.rotation_to_origin("inf")(SpherePoint.infinity()) == SpherePoint(0j)


def test_image_of_circle() -> None:
    T = MobiusTransform.from_coefficients(0, 1, 1, 0)
    center, radius = T.image_of_circle(3 + 0j, 1.0)
    # 1/z maps the circle through 2 and 4 to the one through 1/2 and 1/4
    assert center == pytest.approx(0.375)
    assert radius == pytest.approx(0.125)
    with pytest.raises(GeometryError, match="pole"):
        T.image_of_circle(0.5 + 0j, 1.0)


def test_circumcircle() -> None:
    center, radius = circumcircle(1 + 0j, 1j, -1 + 0j)
    assert abs(center) < 1e-12
    assert radius == pytest.approx(1)
    with pytest.raises(GeometryError, match="collinear"):
        circumcircle(0j, 1 + 1j, 2 + 2j)
    assert cmath.isclose(circumcircle(2 + 0j, 1 + 1j, 0j)[0], 1 + 0j)
