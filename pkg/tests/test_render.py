from __future__ import annotations

from pathlib import Path

import pytest

from circleLib.artifacts import write_artifact
from circleLib.errors import ArtifactError
from circleLib.generators import carpet
from circleLib.lab import collect_sequence
from circleLib.modulus import compute_modulus, discretize
from circleLib.objects import (
    ModulusArtifact,
    Packing,
    PeripheralContinuum,
    RunConfig,
    SequenceArtifact,
    VerifyReport,
)
from circleLib.render import CHART_SIZE, chart_bounds, figures, packing_drawing, render


def test_empty_packing_draws_a_frame_only() -> None:
    svg = packing_drawing([[]]).tostring()
    assert svg.count('class="frame"') == 1
    assert 'class="continuum"' not in svg
    assert f'width="{CHART_SIZE}"' in svg


def test_carpet_outlines() -> None:
    (svg,) = (dwg.tostring() for dwg in figures(carpet(3)).values())
    assert svg.count('class="continuum"') == 73


def test_points_are_crosses(square_and_point: Packing) -> None:
    svg = packing_drawing([square_and_point.continua]).tostring()
    assert svg.count('class="continuum"') == 1
    assert svg.count('class="puncture"') == 1


def test_chart_bounds_are_square() -> None:
    box = chart_bounds([[PeripheralContinuum.polygon(1, [0j, 4 + 0j, 4 + 1j, 1j])]])
    assert box.width == pytest.approx(box.height)
    assert box.width == pytest.approx(4.4)
    assert chart_bounds([[]]) == chart_bounds([])
    point = chart_bounds([[PeripheralContinuum.point(1, 2 + 2j)]])
    assert point.width == pytest.approx(1.1)


def test_render_writes_next_to_the_artifact(tmp_path: Path, carpet_2: Packing) -> None:
    write_artifact(carpet_2, tmp_path / "carpet.json")
    (path,) = render(tmp_path / "carpet.json")
    assert path == str(tmp_path / "carpet.svg")
    assert Path(path).read_text(encoding="utf-8").startswith("<svg")


def test_render_is_deterministic(tmp_path: Path, carpet_2: Packing) -> None:
    (first,) = render(carpet_2, tmp_path / "a")
    (second,) = render(carpet_2, tmp_path / "b")
    assert Path(first).read_bytes() == Path(second).read_bytes()
    assert Path(first).name == "packing.svg"


def test_sequence_figures_are_indexed(tmp_path: Path, two_disks: Packing) -> None:
    report, maps = collect_sequence(
        two_disks, [1, 2], "inf", 0, 1, fatness_centers=6, fatness_radii=3
    )
    config = RunConfig("sequence", ns=[1, 2])
    artifact = SequenceArtifact(two_disks, report, config.provenance(), maps, config)
    paths = render(artifact, tmp_path, stem="run")
    assert [Path(p).name for p in paths] == ["run-n1.svg", "run-n2.svg"]
    svg = Path(paths[1]).read_text(encoding="utf-8")
    assert svg.count('class="continuum"') == 4


def test_modulus_figure_draws_the_density() -> None:
    source = PeripheralContinuum.polygon(101, [-1 - 1j, 1 - 1j, 1 + 4j, -1 + 4j])
    target = PeripheralContinuum.polygon(102, [5 - 1j, 7 - 1j, 7 + 4j, 5 + 4j])
    packing = Packing([PeripheralContinuum.from_planar_circle(7, 3 + 1.5j, 0.6)])
    problem = discretize((0.0, 0.0, 6.0, 3.0), packing, 8, source=source, target=target)
    artifact = ModulusArtifact(
        problem.setup, compute_modulus(problem), RunConfig("modulus").provenance()
    )
    (dwg,) = figures(artifact).values()
    svg = dwg.tostring()
    assert 'class="density"' in svg
    assert svg.count('class="continuum"') == 1


def test_verify_reports_have_nothing_to_draw() -> None:
    report = VerifyReport("fatness", "packing", RunConfig("verify").provenance())
    with pytest.raises(ArtifactError, match="cannot render"):
        figures(report)
