from __future__ import annotations

from pathlib import Path

import pytest

from circleLib.artifacts import write_artifact
from circleLib.errors import ArtifactError
from circleLib.generators import carpet, thin_rectangles
from circleLib.lab import collect_sequence
from circleLib.modulus import compute_modulus, square_problem
from circleLib.objects import (
    MapArtifact,
    ModulusArtifact,
    Packing,
    PeripheralContinuum,
    RunConfig,
    SequenceArtifact,
)
from circleLib.uniformize import koebe_iterate
from circleLib.verify import SUITES, run_suite, verify


def _map_artifact(P: Packing, *normalization: object) -> MapArtifact:
    config = RunConfig("uniformize")
    M = koebe_iterate(P, None, *normalization)  # type: ignore[arg-type]
    return MapArtifact(M, config.provenance(), config)


def test_suites() -> None:
    assert set(SUITES) == {
        "disjointness",
        "fatness",
        "normalization",
        "conformality",
        "upper_gradient",
        "sequence",
        "properties",
    }


def test_disjointness(carpet_2: Packing) -> None:
    (check,) = run_suite(carpet_2, "disjointness")
    assert check.passed
    assert check.values["min_distance"] > 0


def test_overlapping_packing_fails_without_raising(two_disks: Packing) -> None:
    inner = PeripheralContinuum.disk(5, two_disks[0].center, 0.1)
    overlapping = Packing([two_disks[0], inner])
    (check,) = run_suite(overlapping, "disjointness")
    assert not check.passed
    assert "intersect" in check.message


def test_thin_inputs_are_informational() -> None:
    report = verify(thin_rectangles((1, 100)), "fatness")
    assert report.passed
    failed = [c for c in report.checks if not c.passed]
    assert failed
    assert all(c.informational for c in failed)


def test_suite_kind_mismatch(carpet_2: Packing) -> None:
    with pytest.raises(ArtifactError, match="applies to"):
        run_suite(carpet_2, "normalization")
    with pytest.raises(ArtifactError, match="unknown suite"):
        run_suite(carpet_2, "nonsense")


def test_normalization() -> None:
    report = verify(_map_artifact(carpet(1)), "normalization")
    assert report.passed
    (check,) = report.checks
    assert check.values["error[0]"] <= 1e-8
    assert check.values["error[1]"] <= 1e-8


def test_map_fatness(two_disks: Packing) -> None:
    report = verify(_map_artifact(two_disks, "inf", 0, 1), "fatness")
    assert report.passed
    names = [c.name for c in report.checks]
    assert "circle_fatness[1]" in names
    assert "fatness[2]" in names


def test_conformality(two_disks: Packing) -> None:
    report = verify(_map_artifact(two_disks, "inf", 0, 1), "conformality")
    assert report.passed, [c for c in report.checks if not c.passed]


def test_sequence_suite(two_disks: Packing) -> None:
    report, maps = collect_sequence(
        two_disks, [1, 2], "inf", 0, 1, fatness_centers=6, fatness_radii=3
    )
    config = RunConfig("sequence", ns=[1, 2])
    artifact = SequenceArtifact(two_disks, report, config.provenance(), maps, config)
    result = verify(artifact, "sequence")
    assert result.passed
    assert {c.name for c in result.checks} >= {
        "l2_control",
        "no_collision",
        "degenerate_iff_degenerate",
        "fatness_floor",
        "hausdorff_cauchy_trend",
        "clustering",
    }
    assert verify(artifact, "normalization").passed


def test_modulus_properties(tmp_path: Path) -> None:
    problem = square_problem(16)
    config = RunConfig("modulus", resolution=16)
    artifact = ModulusArtifact(
        problem.setup, compute_modulus(problem), config.provenance(), 1.0, None, config
    )
    write_artifact(artifact, tmp_path / "square.json")
    report = verify(tmp_path / "square.json", "properties")
    assert report.passed
    assert report.source_hash == config.config_hash()
    assert report.provenance.config_hash != config.config_hash()
    names = {c.name for c in report.checks}
    assert names == {"modulus_positive", "modulus_gap", "grid_hash", "modulus_reference"}
