from __future__ import annotations

import math

import numpy as np
import pytest

from circleLib.errors import ConvergenceError, GeometryError
from circleLib.generators import carpet, points
from circleLib.objects import (
    MobiusTransform,
    Packing,
    PeripheralContinuum,
    SampledSet,
    SpherePoint,
)
from circleLib.uniformize import (
    as_domain_map,
    circle_deviation,
    conformality_identity_check,
    default_normalization,
    derivative_l2,
    evaluate,
    exterior_riemann_map,
    inverse_evaluate,
    is_connected,
    koebe_iterate,
    output_circles_equivalent,
    pushforward_set,
)


def test_one_disk_is_translated() -> None:
    packing = Packing([PeripheralContinuum.from_planar_circle(1, 0j, 0.5)])
    M = koebe_iterate(packing, zeta_inf="inf", zeta_0=2, zeta_1=3)
    assert M.report.converged
    assert M.report.sweeps == 1
    (circle,) = M.circles
    assert circle.id == 1
    center, radius = circle.planar_circle
    assert center == pytest.approx(-2 + 0j, abs=1e-6)
    assert radius == pytest.approx(0.5, abs=1e-6)
    assert evaluate(M, 2.5).value == pytest.approx(0.5 + 0j, abs=1e-6)
    assert evaluate(M, "inf").infinite


def test_circle_domain_is_fixed(two_disks: Packing) -> None:
    M = koebe_iterate(two_disks, zeta_inf="inf", zeta_0=0, zeta_1=1)
    assert M.report.converged
    assert [c.id for c in M.circles] == [1, 2]
    assert circle_deviation(M.circles, two_disks.continua) < 1e-6
    assert M.report.sweeps <= 2
    assert M.report.residuals[-1] <= 1e-10


def test_single_square() -> None:
    M = koebe_iterate(carpet(1))
    assert M.report.converged
    assert M.report.sweeps == 1
    assert M.circles[0].kind == "disk"
    zeta_inf, zeta_0, zeta_1 = M.normalization
    assert zeta_inf.infinite
    assert evaluate(M, zeta_0).value == pytest.approx(0j, abs=1e-9)
    assert evaluate(M, zeta_1).value == pytest.approx(1 + 0j, abs=1e-9)


def test_inverse_evaluate() -> None:
    M = koebe_iterate(carpet(1))
    z = 0.4 + 0.3j
    w = evaluate(M, z)
    assert inverse_evaluate(M, w).value == pytest.approx(z, abs=1e-8)


def test_points_only() -> None:
    packing = points(seed=0, count=3)
    M = koebe_iterate(packing)
    assert M.report.converged
    assert M.report.sweeps == 0
    assert all(c.is_degenerate for c in M.circles)
    # with no continua the map is a single Möbius transform
    zeta_inf, zeta_0, zeta_1 = M.normalization
    T = MobiusTransform.from_points(zeta_0, zeta_1, zeta_inf)
    for K, c in zip(packing, M.circles):
        assert T(K.center).value == pytest.approx(c.center, abs=1e-9)


def test_empty_domain_normalization() -> None:
    assert default_normalization(Packing()) == (
        SpherePoint.infinity(),
        SpherePoint(0j),
        SpherePoint(1 + 0j),
    )


def test_default_normalization_avoids_continua(carpet_2: Packing) -> None:
    zeta_inf, zeta_0, zeta_1 = default_normalization(carpet_2)
    assert zeta_inf.infinite
    for K in carpet_2:
        assert not K.contains(zeta_0.value)
        assert not K.contains(zeta_1.value)
    assert zeta_0 != zeta_1


def test_component_cap() -> None:
    with pytest.raises(GeometryError, match="component cap"):
        koebe_iterate(carpet(3))


def test_normalization_point_in_continuum(two_disks: Packing) -> None:
    with pytest.raises(GeometryError, match="lies in continuum 1"):
        koebe_iterate(two_disks, zeta_inf="inf", zeta_0=-2, zeta_1=1)


def test_evaluate_outside_domain(two_disks: Packing) -> None:
    M = koebe_iterate(two_disks, zeta_inf="inf", zeta_0=0, zeta_1=1)
    with pytest.raises(GeometryError, match="inside a peripheral continuum"):
        evaluate(M, -2)
    with pytest.raises(GeometryError, match="inside an output circle"):
        inverse_evaluate(M, M.circles[1].planar_circle[0])


def test_exterior_riemann_map_rejects_points() -> None:
    with pytest.raises(GeometryError, match="no exterior map"):
        exterior_riemann_map(PeripheralContinuum.point(1, 0j))


def test_derivative_l2_of_mobius_maps() -> None:
    assert derivative_l2(as_domain_map(MobiusTransform())) == pytest.approx(4 * math.pi)
    T = MobiusTransform.from_coefficients(2, 0, 0, 1)
    assert derivative_l2(as_domain_map(T)) == pytest.approx(4 * math.pi, rel=1e-2)


def test_conformality_identity() -> None:
    T = MobiusTransform.from_coefficients(2, 0, 0, 1)
    assert conformality_identity_check(T).passed
    region = PeripheralContinuum.from_planar_circle(9, 0.3 + 0j, 0.2)
    check = conformality_identity_check(T, region)
    assert check.passed
    assert check.values["ratio"] == pytest.approx(1, rel=0.02)


def test_conformality_identity_on_polygonal_domain() -> None:
    M = koebe_iterate(carpet(1))
    region = PeripheralContinuum.from_planar_circle(9, 0.8 + 0j, 0.2)
    check = conformality_identity_check(M, region)
    assert check.passed
    assert check.values["ratio"] == pytest.approx(1, rel=0.02)


def test_conformality_region_meets_continuum(two_disks: Packing) -> None:
    M = koebe_iterate(two_disks, zeta_inf="inf", zeta_0=0, zeta_1=1)
    region = PeripheralContinuum.from_planar_circle(9, -1.5 + 0j, 0.2)
    with pytest.raises(GeometryError, match="meets continuum 1"):
        conformality_identity_check(M, region)


def test_pushforward_and_connectivity(two_disks: Packing) -> None:
    M = koebe_iterate(two_disks, zeta_inf="inf", zeta_0=0, zeta_1=1)
    E = SampledSet([-1.4 + 0j, -1.45 + 0j], [1])
    image = pushforward_set(M, E)
    assert [c.id for c in image.circles] == [1]
    assert len(image.points) == 2
    assert is_connected(image, 0.1)
    assert not is_connected(image, 0.01)


def test_is_connected_points() -> None:
    S = SampledSet([0j, 0.1 + 0j, 0.2 + 0j])
    assert is_connected(S, 0.15)
    assert not is_connected(S, 0.05)
    assert not is_connected(SampledSet(), 1.0)


def test_output_circles_equivalent(two_disks: Packing) -> None:
    A = koebe_iterate(two_disks, zeta_inf="inf", zeta_0=0, zeta_1=1)
    # the same domain moved by a Möbius map, normalized at the moved points
    T = MobiusTransform.from_coefficients(2, 1, 1, 3)
    moved = Packing([K.transformed(T) for K in two_disks])
    B = koebe_iterate(moved, zeta_inf=T(SpherePoint.infinity()), zeta_0=T(0), zeta_1=T(1))
    assert [K.kind for K in moved] == ["disk", "disk"]
    assert circle_deviation(moved.continua, two_disks.continua) > 0.1
    assert output_circles_equivalent(A, B)
    assert circle_deviation(A.circles, A.circles[:1]) == math.inf


def test_domain_map_evaluates_arrays() -> None:
    M = koebe_iterate(carpet(1))
    z = np.array([2 + 0j, 0.8 + 0.8j])
    assert np.allclose(M.inverse(M(z)), z, atol=1e-8)


def test_polygons_reach_tolerance_on_true_images(carpet_2: Packing) -> None:
    M = koebe_iterate(carpet_2, n=3)
    report = M.report
    assert report.converged
    assert report.residuals[-1] <= report.tolerance
    assert report.fit_residuals[-1] <= report.tolerance
    # after the first sweep the residual only goes down
    assert all(b <= a for a, b in zip(report.residuals[1:], report.residuals[2:]))
    for K in M.domain:
        center, radius = M.circle(K.id).planar_circle
        w = M(K.boundary_samples(60))
        deviation = np.max(np.abs(np.abs(w - center) - radius)) / radius
        assert deviation <= 10 * report.tolerance


def test_single_square_boundary_on_circle() -> None:
    M = koebe_iterate(carpet(1))
    (K,) = M.domain
    center, radius = M.circles[0].planar_circle
    w = M(K.boundary_samples(100))
    assert np.max(np.abs(np.abs(w - center) - radius)) / radius <= 10 * M.report.tolerance


def test_unreachable_tolerance_stalls() -> None:
    with pytest.raises(ConvergenceError) as info:
        koebe_iterate(carpet(1), tol=1e-17, max_sweeps=30)
    report = info.value.report
    assert report["converged"] is False
    assert 1 < report["sweeps"] <= 30
