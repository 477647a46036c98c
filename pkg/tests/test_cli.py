from __future__ import annotations

import json
from pathlib import Path
from typing import Any, List

import pytest

from circleLib.artifacts import load_artifact, write_artifact
from circleLib.cli import main
from circleLib.constants import OUTPUT_DIR_ENV
from circleLib.objects import (
    MapArtifact,
    ModulusArtifact,
    Packing,
    PeripheralContinuum,
    SequenceArtifact,
    VerifyReport,
)


def _run(capsys: Any, *argv: str) -> List[str]:
    assert main(list(argv)) == 0
    return capsys.readouterr().out.split()


def _error(capsys: Any, code: int, *argv: str) -> dict:
    assert main(list(argv)) == code
    payload = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert payload["exit_code"] == code
    return payload


@pytest.fixture(autouse=True)
def no_env_output_dir(monkeypatch: Any) -> None:
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)


def test_generate(tmp_path: Path, capsys: Any) -> None:
    (path,) = _run(capsys, "generate", "carpet", "--level", "2", "--output-dir", str(tmp_path))
    assert path == str(tmp_path / "carpet.json")
    packing = load_artifact(path)
    assert isinstance(packing, Packing)
    assert len(packing) == 9
    assert packing.provenance is not None
    assert packing.provenance.seed == 0


def test_generate_is_deterministic(tmp_path: Path, capsys: Any) -> None:
    for name in ("a.json", "b.json"):
        argv = ["generate", "random_l2", "--count", "8", "--seed", "2", "-o", name]
        _run(capsys, *argv, "--output-dir", str(tmp_path))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_output_dir_environment_wins(tmp_path: Path, capsys: Any, monkeypatch: Any) -> None:
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "env"))
    (path,) = _run(capsys, "generate", "points", "--output-dir", str(tmp_path / "flag"))
    assert path == str(tmp_path / "env" / "points.json")
    assert not (tmp_path / "flag").exists()


def test_usage_errors(capsys: Any) -> None:
    payload = _error(capsys, 1, "generate", "apollonian")
    assert payload["error"] == "UsageError"
    assert _error(capsys, 1)["message"] == "a command is required"
    _error(capsys, 1, "modulus", "packing")


def test_missing_input(tmp_path: Path, capsys: Any) -> None:
    payload = _error(capsys, 3, "uniformize", str(tmp_path / "missing.json"))
    assert payload["error"] == "ArtifactError"


def test_pipeline(tmp_path: Path, capsys: Any) -> None:
    out = ["--output-dir", str(tmp_path)]
    (packing,) = _run(capsys, "generate", "carpet", "--level", "1", *out)
    (map_path,) = _run(capsys, "uniformize", packing, *out)
    artifact = load_artifact(map_path)
    assert isinstance(artifact, MapArtifact)
    assert artifact.config is not None
    assert artifact.config.input_path == packing

    (report_path,) = _run(capsys, "verify", map_path, "--suite", "normalization", *out)
    assert Path(report_path).name == "map-normalization.json"
    report = load_artifact(report_path)
    assert isinstance(report, VerifyReport)
    assert report.passed
    assert report.source_hash == artifact.provenance.config_hash

    paths = _run(capsys, "render", map_path, *out)
    assert paths == [str(tmp_path / "map.svg")]


def test_normalization_point_in_continuum(tmp_path: Path, capsys: Any) -> None:
    out = ["--output-dir", str(tmp_path)]
    (packing,) = _run(capsys, "generate", "carpet", "--level", "1", *out)
    zetas = ["--zeta-inf", "inf", "--zeta-0", "0", "--zeta-1", "1"]
    payload = _error(capsys, 1, "uniformize", packing, *zetas, *out)
    assert payload["error"] == "GeometryError"
    _error(capsys, 1, "uniformize", packing, "--zeta-inf", "inf", *out)


def test_non_convergence(tmp_path: Path, capsys: Any) -> None:
    out = ["--output-dir", str(tmp_path)]
    (packing,) = _run(capsys, "generate", "carpet", "--level", "2", *out)
    payload = _error(capsys, 2, "uniformize", packing, "-n", "2", "--max-sweeps", "1", *out)
    assert payload["error"] == "ConvergenceError"
    assert payload["report"]["sweeps"] == 1


def test_failed_verification(tmp_path: Path, capsys: Any) -> None:
    disk = PeripheralContinuum.disk(1, 0j, 0.5)
    write_artifact(
        Packing([disk, PeripheralContinuum.disk(2, 0j, 0.2)]), tmp_path / "bad.json"
    )
    argv = ["verify", str(tmp_path / "bad.json"), "--suite", "disjointness"]
    assert main([*argv, "--output-dir", str(tmp_path)]) == 2
    report = load_artifact(tmp_path / "bad-disjointness.json")
    assert isinstance(report, VerifyReport)
    assert not report.passed


def test_suite_does_not_apply(tmp_path: Path, capsys: Any) -> None:
    out = ["--output-dir", str(tmp_path)]
    (packing,) = _run(capsys, "generate", "carpet", "--level", "1", *out)
    payload = _error(capsys, 3, "verify", packing, "--suite", "normalization", *out)
    assert "applies to" in payload["message"]


def test_modulus_square(tmp_path: Path, capsys: Any) -> None:
    (path,) = _run(
        capsys, "modulus", "square", "--resolution", "8", "--output-dir", str(tmp_path)
    )
    artifact = load_artifact(path)
    assert isinstance(artifact, ModulusArtifact)
    assert artifact.reference == 1.0
    assert artifact.result.mode == "plain"
    assert artifact.result.value > 0


def test_modulus_packing(tmp_path: Path, capsys: Any) -> None:
    out = ["--output-dir", str(tmp_path)]
    (packing,) = _run(capsys, "generate", "round", "--count", "4", *out)
    terminals = ["--source", "1", "--target", "2"]
    (path,) = _run(capsys, "modulus", "packing", packing, *terminals, "--resolution", "12", *out)
    artifact = load_artifact(path)
    assert isinstance(artifact, ModulusArtifact)
    assert artifact.result.mode == "transboundary"
    assert {K.id for K in artifact.setup.packing} == {3, 4}
    _error(capsys, 1, "modulus", "packing", packing, "--source", "1", "--target", "9", *out)


@pytest.mark.slow
def test_sequence(tmp_path: Path, capsys: Any) -> None:
    out = ["--output-dir", str(tmp_path)]
    (packing,) = _run(capsys, "generate", "round", "--count", "3", *out)
    (path,) = _run(capsys, "sequence", packing, "--ns", "1", "3", *out)
    artifact = load_artifact(path)
    assert isinstance(artifact, SequenceArtifact)
    assert artifact.report.ns == [1, 3]
    assert [M.n for M in artifact.maps] == [1, 3]
    assert artifact.report.config_hash == artifact.provenance.config_hash

    figures = _run(capsys, "render", path, *out)
    assert [Path(p).name for p in figures] == ["sequence-n1.svg", "sequence-n3.svg"]


@pytest.mark.parametrize(
    "argv, message",
    [
        (["uniformize", "in.json", "--degree", "-1"], "--degree: must be non-negative"),
        (["uniformize", "in.json", "--tol", "0"], "--tol: must be positive"),
        (["uniformize", "in.json", "--samples", "many"], "--samples: invalid number"),
        (["modulus", "square", "--resolution", "0"], "--resolution: must be positive"),
        (["generate", "carpet", "--level", "-2"], "--level: must be non-negative"),
        (["sequence", "in.json", "--ns", "1", "-3"], "--ns: must be non-negative"),
    ],
    ids=["degree", "tol", "samples", "resolution", "level", "ns"],
)
def test_invalid_numbers_are_usage_errors(capsys: Any, argv: List[str], message: str) -> None:
    payload = _error(capsys, 1, *argv)
    assert payload["error"] == "UsageError"
    assert message in payload["message"]


def test_error_report_without_orjson(
    tmp_path: Path, capsys: Any, monkeypatch: Any
) -> None:
    from circleLib.serde import json as json_backend

    monkeypatch.setattr(json_backend, "have_orjson", False)
    payload = _error(capsys, 3, "uniformize", str(tmp_path / "missing.json"))
    assert payload["error"] == "ArtifactError"
    assert list(payload) == sorted(payload)
