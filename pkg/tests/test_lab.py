from __future__ import annotations

from typing import List, Tuple

import numpy as np
import pytest

from circleLib.errors import GeometryError
from circleLib.generators import carpet, points
from circleLib.lab import (
    area_inequality_check,
    clustering_count,
    collect_sequence,
    degeneracy_check,
    equicontinuity_table,
    fatness_floor_check,
    hausdorff_cauchy_trend,
    l2_control_check,
    no_collision_check,
    nondegeneracy_table,
    random_curves,
    run_sequence,
    upper_gradient_spot_check,
)
from circleLib.objects import (
    CircleDomainMap,
    Packing,
    PeripheralContinuum,
    SampledSet,
    SequenceEntry,
    SequenceReport,
)

FAST = dict(fatness_centers=8, fatness_radii=4, derivative_nodes=1024)


@pytest.fixture
def sequence(two_disks: Packing) -> Tuple[SequenceReport, List[CircleDomainMap]]:
    return collect_sequence(two_disks, [1, 2], "inf", 0, 1, seed=3, **FAST)


def test_collect_sequence(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    report, maps = sequence
    assert report.ns == [1, 2]
    assert report.seed == 3
    assert [e.n for e in report.converged] == [1, 2]
    assert [M.n for M in maps] == [1, 2]
    assert [c.id for c in report.entry(2).circles] == [1, 2]
    assert report.diameters[1][1] == pytest.approx(report.diameters[1][2], abs=1e-6)
    assert report.diameters[2].keys() == {2}


def test_hausdorff_rows(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    report, _ = sequence
    first, second = report.hausdorff
    assert first.id == 1
    assert first.ns == [1, 2]
    assert first.deviation[0] < 1e-6
    assert second.ns == [2]
    assert hausdorff_cauchy_trend(report).passed


def test_property_checks(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    report, _ = sequence
    for check in (
        l2_control_check(report),
        no_collision_check(report),
        degeneracy_check(report),
        fatness_floor_check(report),
    ):
        assert check.passed, check.name
    assert degeneracy_check(report).name == "degenerate_iff_degenerate"


@pytest.mark.slow
def test_carpet_sequence() -> None:
    report, _ = collect_sequence(carpet(3), [1, 5, 10, 20, 40], seed=0, **FAST)
    assert [e.n for e in report.converged] == [1, 5, 10, 20, 40]
    for check in (
        l2_control_check(report),
        no_collision_check(report),
        degeneracy_check(report),
        hausdorff_cauchy_trend(report),
    ):
        assert check.passed, check.name


def test_failed_n_is_recorded(two_disks: Packing) -> None:
    # the second disk swallows zeta_0 once it is part of the domain
    report = run_sequence(two_disks, [1, 2], "inf", 2, 1, **FAST)
    assert [e.n for e in report.converged] == [1]
    failed = report.entry(2)
    assert not failed.converged
    assert "lies in continuum 2" in failed.error


def test_bad_ns(two_disks: Packing) -> None:
    with pytest.raises(GeometryError, match="increasing"):
        collect_sequence(two_disks, [2, 1])
    with pytest.raises(GeometryError, match="exceeds the packing size"):
        collect_sequence(two_disks, [3])


def test_points_stay_points() -> None:
    report, _ = collect_sequence(points(seed=0, count=3), [1, 3], **FAST)
    check = degeneracy_check(report)
    assert check.passed
    assert check.values["points[3]"] == 3.0
    assert report.entry(3).fatness == {}
    assert no_collision_check(report).passed


def test_nondegeneracy_table(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    report, maps = sequence
    check = nondegeneracy_table(report, 1)
    assert check.passed
    assert check.values["minimum"] > 0
    assert check.values["witness"] in (1.0, 2.0)

    E = SampledSet([0.5 + 0j, 1 + 0.5j])
    assert nondegeneracy_table(report, E, maps).passed
    with pytest.raises(ValueError):
        nondegeneracy_table(report, E)
    assert not nondegeneracy_table(report, 7).passed


def test_clustering_count(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    report, _ = sequence
    assert clustering_count(report) == 1
    A = PeripheralContinuum.from_planar_circle(1, 0j, 1.0)
    B = PeripheralContinuum.from_planar_circle(2, 0.5 + 0j, 1.0)
    assert clustering_count([A, B]) == 2
    assert clustering_count([]) == 0


def test_upper_gradient(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    _, maps = sequence
    M = maps[-1]
    crossing = np.array([-3 + 0j, -1 + 0j])
    (record,) = upper_gradient_spot_check(M, [crossing])
    assert record.crossed == [1]
    assert record.passed
    # a geodesic through the circle center: both sides agree
    assert record.lhs <= record.rhs * (1 + 1e-9)
    assert record.lhs == pytest.approx(record.rhs, rel=1e-6)

    bent = np.array([-3 + 0j, -2 + 0.3j, -1 + 0j])
    (record,) = upper_gradient_spot_check(M, [bent])
    assert record.crossed == [1]
    assert record.lhs < record.rhs

    records = upper_gradient_spot_check(M, count=50, seed=1)
    assert len(records) == 50
    assert all(r.passed or r.skipped for r in records)
    assert all(r.lhs <= r.rhs * (1 + 1e-9) for r in records if not r.skipped)


def test_upper_gradient_misses_circle(
    sequence: Tuple[SequenceReport, List[CircleDomainMap]]
) -> None:
    _, maps = sequence
    (record,) = upper_gradient_spot_check(maps[-1], [np.array([-3 + 1j, -1 + 1j])])
    assert record.crossed == []
    assert record.passed


def test_random_curves_start_and_end_in_domain(
    sequence: Tuple[SequenceReport, List[CircleDomainMap]]
) -> None:
    _, maps = sequence
    curves = random_curves(maps[-1], count=6, seed=2)
    assert len(curves) == 6
    for curve in curves:
        assert maps[-1].in_image(curve[[0, -1]], strict=False).all()


def test_equicontinuity(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    _, maps = sequence
    check = equicontinuity_table(maps[-1], deltas=(0.4, 0.2, 0.1))
    assert check.passed
    assert check.values["epsilon[0.4]"] > check.values["epsilon[0.1]"]


def test_area_inequality(sequence: Tuple[SequenceReport, List[CircleDomainMap]]) -> None:
    _, maps = sequence
    region = PeripheralContinuum.from_planar_circle(9, 0.3 + 0j, 0.2)
    assert area_inequality_check(maps[-1], [region]).passed


@pytest.mark.parametrize(
    "values, passed",
    [([0.95, 1.0], True), ([1.15, 1.0], True), ([1.5, 1.0], False), ([0.1, 1.0], False)],
    ids=["close", "above", "far-above", "far-below"],
)
def test_l2_control_bounds(values: List[float], passed: bool) -> None:
    entries = [
        SequenceEntry(n, converged=True, l2_diameter=value, derivative_l2=1.0)
        for n, value in enumerate(values, start=1)
    ]
    report = SequenceReport(ns=[e.n for e in entries], entries=entries)
    check = l2_control_check(report)
    assert check.passed is passed
    assert check.values["l2_diameter[1]"] == values[0]
