"""Verification suites run on artifacts.

A suite is a named list of property checks that applies to some artifact
kinds::

    report = verify("run/map.json", "normalization")
    assert report.passed

Checks that cannot be evaluated (a quadrature that does not settle, a point
the map rejects) are reported as failed checks with the reason in their
message rather than raised. Informational checks, like the fatness of the
input continua, never fail a suite.
"""

from __future__ import annotations

import logging
import math
import os
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from circleLib.artifacts import Artifact, load_artifact
from circleLib.constants import (
    DISK_FATNESS_BASELINE,
    MODULUS_TOLERANCE,
    QUADRATURE_TOLERANCE,
)
from circleLib.errors import ArtifactError, Error
from circleLib.geometry import (
    coarea_check,
    estimate_fatness,
    hausdorff_limit_fatness_check,
    maximal_inequality_check,
    mobius_fatness_check,
    radial_hit_check,
)
from circleLib.lab import (
    clustering_count,
    degeneracy_check,
    fatness_floor_check,
    hausdorff_cauchy_trend,
    l2_control_check,
    no_collision_check,
    upper_gradient_spot_check,
)
from circleLib.modulus import build_problem
from circleLib.objects.artifacts import (
    MapArtifact,
    ModulusArtifact,
    SequenceArtifact,
    VerifyReport,
)
from circleLib.objects.check import CheckResult
from circleLib.objects.circleDomainMap import CircleDomainMap
from circleLib.objects.config import Provenance, RunConfig
from circleLib.objects.packing import Packing
from circleLib.objects.spherePoint import SpherePoint
from circleLib.sphere import chordal_distance
from circleLib.typing import PathLike
from circleLib.uniformize import conformality_identity_check, derivative_l2, evaluate

__all__ = ["SUITES", "NORMALIZATION_TOLERANCE", "run_suite", "verify"]

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-8
"""Chordal distance allowed between ``f(ζ)`` and its prescribed image."""

UPPER_GRADIENT_CURVES = 50
PROPERTY_CONTINUA = 3
"""Number of non-degenerate continua the property suite samples."""

PROBE_SPREAD = 0.25

Suite = Callable[[Artifact, int, float], List[CheckResult]]


def _guarded(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        return check()
    except Error as exc:
        logger.warning("check %s could not be evaluated: %s", name, exc)
        return CheckResult(name, passed=False, message=str(exc))


def _maps(artifact: Artifact) -> List[Tuple[str, CircleDomainMap]]:
    if isinstance(artifact, MapArtifact):
        return [("", artifact.map)]
    if isinstance(artifact, SequenceArtifact):
        return [(f"[{M.n}]", M) for M in sorted(artifact.maps, key=lambda M: M.n)]
    return []


# disjointness


def _disjoint(name: str, continua: Sequence[Any]) -> CheckResult:
    distance = Packing(list(continua)).min_pairwise_distance()
    return CheckResult(name, passed=distance > 0, values={"min_distance": distance})


def disjointness_suite(
    artifact: Artifact, seed: int, tolerance: float
) -> List[CheckResult]:
    """Inputs and output circles are pairwise disjoint."""
    if isinstance(artifact, Packing):

        def packing_check() -> CheckResult:
            artifact.check()
            return _disjoint("disjoint_continua", artifact.continua)

        return [_guarded("disjoint_continua", packing_check)]
    checks = []
    for label, M in _maps(artifact):
        checks.append(_disjoint(f"disjoint_circles{label}", M.circles))
    return checks


# fatness


def _fatness(
    name: str, continua: Sequence[Any], seed: int, baseline: float, informational: bool
) -> List[CheckResult]:
    checks = []
    for K in continua:
        if K.is_degenerate:
            continue
        estimate = estimate_fatness(K, seed=seed)
        checks.append(
            CheckResult(
                f"{name}[{K.id}]",
                passed=estimate.tau_hat >= baseline,
                values={"tau_hat": estimate.tau_hat},
                informational=informational,
            )
        )
    return checks


def fatness_suite(
    artifact: Artifact, seed: int, tolerance: float
) -> List[CheckResult]:
    """Sampled fatness of every continuum.

    Input fatness is reported only: thin inputs are allowed. Output circles
    must reach the disk baseline.
    """
    if isinstance(artifact, Packing):
        return _fatness("fatness", artifact.continua, seed, DISK_FATNESS_BASELINE, True)
    if isinstance(artifact, SequenceArtifact):
        inputs = artifact.packing.first(max(artifact.report.ns, default=0))
        checks = _fatness("fatness", inputs, seed, DISK_FATNESS_BASELINE, True)
        checks.append(fatness_floor_check(artifact.report))
        return checks
    M = artifact.map  # type: ignore[union-attr]
    checks = _fatness("fatness", M.domain.continua, seed, DISK_FATNESS_BASELINE, True)
    checks.extend(
        _fatness("circle_fatness", M.circles, seed, DISK_FATNESS_BASELINE, False)
    )
    return checks


# normalization


def _normalization(label: str, M: CircleDomainMap) -> CheckResult:
    name = f"normalization{label}"
    targets = (SpherePoint.infinity(), SpherePoint(0j), SpherePoint(1 + 0j))
    values: Dict[str, float] = {}
    for key, zeta, target in zip(("inf", "0", "1"), M.normalization, targets):
        try:
            image = evaluate(M, zeta)
        except Error as exc:
            return CheckResult(name, passed=False, values=values, message=str(exc))
        values[f"error[{key}]"] = chordal_distance(image, target)
    passed = all(v <= NORMALIZATION_TOLERANCE for v in values.values())
    return CheckResult(name, passed=passed, values=values)


def normalization_suite(
    artifact: Artifact, seed: int, tolerance: float
) -> List[CheckResult]:
    """``f(ζ_∞) = ∞``, ``f(ζ_0) = 0`` and ``f(ζ_1) = 1``."""
    return [_normalization(label, M) for label, M in _maps(artifact)]


# conformality


def _derivative_bound(label: str, M: CircleDomainMap, tolerance: float) -> CheckResult:
    value = derivative_l2(M)
    bound = 4 * math.pi * (1 + tolerance)
    return CheckResult(
        f"derivative_l2{label}",
        passed=value <= bound,
        values={"derivative_l2": value, "bound": bound},
    )


def conformality_suite(
    artifact: Artifact, seed: int, tolerance: float
) -> List[CheckResult]:
    """``∫ |Dg|^2 dΣ`` over the domain equals its area and stays below
    ``4 pi``."""
    checks = []
    for label, M in _maps(artifact):
        identity = _guarded(
            f"conformality_identity{label}",
            lambda M=M: conformality_identity_check(M, None, tolerance),
        )
        identity.name = f"conformality_identity{label}"
        checks.append(identity)
        checks.append(
            _guarded(
                f"derivative_l2{label}",
                lambda M=M, label=label: _derivative_bound(label, M, tolerance),
            )
        )
    if isinstance(artifact, SequenceArtifact):
        checks.append(l2_control_check(artifact.report, tolerance))
    return checks


# upper gradient


def _upper_gradient(
    label: str, M: CircleDomainMap, seed: int, tolerance: float
) -> CheckResult:
    records = upper_gradient_spot_check(
        M, tolerance=tolerance, count=UPPER_GRADIENT_CURVES, seed=seed
    )
    tested = [r for r in records if not r.skipped]
    failed = [r.curve for r in tested if not r.passed]
    ratios = [r.lhs / r.rhs for r in tested if r.rhs > 0]
    return CheckResult(
        f"upper_gradient{label}",
        passed=not failed,
        values={
            "curves": float(len(records)),
            "skipped": float(len(records) - len(tested)),
            "failed": float(len(failed)),
            "worst_ratio": max(ratios, default=0.0),
        },
        message=f"failing curves {failed}" if failed else "",
    )


def upper_gradient_suite(
    artifact: Artifact, seed: int, tolerance: float
) -> List[CheckResult]:
    """Seeded polylines satisfy the transboundary upper gradient inequality."""
    return [
        _guarded(
            f"upper_gradient{label}",
            lambda label=label, M=M: _upper_gradient(label, M, seed, tolerance),
        )
        for label, M in _maps(artifact)
    ]


# sequence


def sequence_suite(
    artifact: Artifact, seed: int, tolerance: float
) -> List[CheckResult]:
    """Diameter control, separation, point correspondence, fatness floor and
    the Hausdorff trend of a sequence run."""
    R = artifact.report  # type: ignore[union-attr]
    checks = [
        l2_control_check(R, tolerance),
        no_collision_check(R),
        degeneracy_check(R),
        fatness_floor_check(R),
        hausdorff_cauchy_trend(R),
    ]
    if R.converged:
        checks.append(
            CheckResult(
                "clustering",
                passed=True,
                values={"clusters": float(clustering_count(R))},
                informational=True,
            )
        )
    failed = [e.n for e in R.entries if not e.converged]
    if failed:
        checks.append(
            CheckResult(
                "all_converged",
                passed=False,
                values={"failed": float(len(failed))},
                informational=True,
                message=f"no convergence at n = {failed}",
            )
        )
    return checks


# properties


def _packing_properties(P: Packing, seed: int) -> List[CheckResult]:
    round_ones = [K for K in P if not K.is_degenerate][:PROPERTY_CONTINUA]
    checks = []
    for K in round_ones:
        for name, check in (
            ("mobius_fatness", lambda K=K: mobius_fatness_check(K, seed=seed)),
            ("radial_hit", lambda K=K: radial_hit_check(K, seed=seed)),
            (
                "hausdorff_limit_fatness",
                lambda K=K: hausdorff_limit_fatness_check(K, seed=seed),
            ),
        ):
            result = _guarded(name, check)
            result.name = f"{result.name}[{K.id}]"
            checks.append(result)
    checks.append(_guarded("coarea", lambda: coarea_check(seed=seed)))
    checks.append(
        _guarded("maximal_inequality", lambda: maximal_inequality_check(seed=seed))
    )
    return checks


def _modulus_properties(artifact: ModulusArtifact) -> List[CheckResult]:
    result = artifact.result
    config = artifact.config
    target_gap = MODULUS_TOLERANCE if config is None else config.modulus_tolerance
    checks = [
        CheckResult(
            "modulus_positive",
            passed=result.value > 0,
            values={"value": result.value},
            message=result.message,
        ),
        CheckResult(
            "modulus_gap",
            passed=result.is_infinite or result.gap <= target_gap,
            values={"gap": result.gap, "lower": result.lower, "upper": result.upper},
        ),
    ]
    rebuilt = _guarded_hash(artifact)
    checks.append(
        CheckResult(
            "grid_hash",
            passed=rebuilt == result.grid_hash,
            message="" if rebuilt == result.grid_hash else f"grid rebuilt as {rebuilt}",
        )
    )
    if artifact.reference is not None:
        error = abs(result.value / artifact.reference - 1)
        checks.append(
            CheckResult(
                "modulus_reference",
                passed=error <= QUADRATURE_TOLERANCE,
                values={
                    "value": result.value,
                    "reference": artifact.reference,
                    "error": error,
                },
            )
        )
    if artifact.probes is not None and artifact.probes.rows:
        by_n = artifact.probes.minimum_by_n()
        final = by_n[max(by_n)]
        stable = final > 0 and all(
            abs(v - final) <= PROBE_SPREAD * final for v in by_n.values()
        )
        values = {f"minimum[{n}]": v for n, v in sorted(by_n.items())}
        checks.append(
            CheckResult(
                "probe_stability",
                passed=artifact.probes.minimum > 0 and stable,
                values=values,
            )
        )
    return checks


def _guarded_hash(artifact: ModulusArtifact) -> str:
    try:
        return build_problem(artifact.setup).grid_hash()
    except Error as exc:
        return f"error: {exc}"


def properties_suite(
    artifact: Artifact, seed: int, tolerance: float
) -> List[CheckResult]:
    """Sampled inequalities of fat sets on a packing, or the consistency of a
    modulus computation."""
    if isinstance(artifact, ModulusArtifact):
        return _modulus_properties(artifact)
    return _packing_properties(artifact, seed)  # type: ignore[arg-type]


SUITES: Dict[str, Tuple[Tuple[str, ...], Suite]] = {
    "disjointness": (("packing", "map", "sequence"), disjointness_suite),
    "fatness": (("packing", "map", "sequence"), fatness_suite),
    "normalization": (("map", "sequence"), normalization_suite),
    "conformality": (("map", "sequence"), conformality_suite),
    "upper_gradient": (("map", "sequence"), upper_gradient_suite),
    "sequence": (("sequence",), sequence_suite),
    "properties": (("packing", "modulus"), properties_suite),
}


def run_suite(
    artifact: Artifact,
    suite: str,
    seed: int = 0,
    tolerance: float = QUADRATURE_TOLERANCE,
) -> List[CheckResult]:
    """Runs one suite on a loaded artifact.

    Raises:
        ArtifactError: if the suite is unknown or does not apply to the
            artifact's kind.
    """
    try:
        kinds, run = SUITES[suite]
    except KeyError:
        raise ArtifactError(
            f"unknown suite {suite!r}, expected one of {sorted(SUITES)}"
        ) from None
    kind = getattr(artifact, "kind", None)
    if kind not in kinds:
        raise ArtifactError(
            f"suite {suite!r} applies to {', '.join(kinds)} artifacts, not {kind!r}"
        )
    checks = run(artifact, seed, tolerance)
    for check in checks:
        status = "ok" if check.passed else "FAILED"
        logger.debug("%s: %s %s", check.name, status, check.values)
    return checks


def verify(
    artifact: PathLike | Artifact,
    suite: str,
    seed: int = 0,
    tolerance: float = QUADRATURE_TOLERANCE,
    provenance: Optional[Provenance] = None,
) -> VerifyReport:
    """Runs a suite on an artifact (or the artifact file at a path) and
    gathers the outcome.

    Without ``provenance``, the report's own provenance is that of a
    ``verify`` run with the given suite, seed and tolerance.
    """
    input_path = None
    if isinstance(artifact, (str, bytes, os.PathLike)):
        input_path = os.fsdecode(artifact)
        artifact = load_artifact(input_path)
    checks = run_suite(artifact, suite, seed, tolerance)
    if provenance is None:
        config = RunConfig(
            "verify",
            input_path=input_path,
            seed=seed,
            quadrature_tolerance=tolerance,
            parameters=[f"suite={suite}"],
        )
        provenance = config.provenance()
    source = getattr(artifact, "provenance", None)
    report = VerifyReport.from_checks(
        suite,
        str(artifact.kind),
        provenance,
        checks,
        source.config_hash if source is not None else "",
    )
    logger.info(
        "suite %s on %s artifact: %s",
        suite,
        report.artifact_kind,
        "passed" if report.passed else "failed",
    )
    return report
