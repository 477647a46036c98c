"""Numerical evidence for the convergence of the uniformizations of the
first ``n`` continua of a packing as ``n`` grows.

:func:`run_sequence` uniformizes the first ``n`` continua of a packing for
several ``n`` with one normalization and records, for every ``n``, the output
circles and the quantities whose behaviour the limiting argument relies on:
Hausdorff deviation of each circle across ``n``, separation, fatness, the ℓ²
norm of the diameters and the ``L²`` norm of the inverse derivative. The
other functions turn a report (or a single map) into checks.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
import shapely

from circleLib.constants import (
    BOUNDARY_SAMPLES,
    COMPONENT_CAP,
    DISK_FATNESS_BASELINE,
    KOEBE_TOLERANCE,
    LAURENT_DEGREE,
    MAX_SWEEPS,
    QUADRATURE_TOLERANCE,
)
from circleLib.errors import ConvergenceError, GeometryError
from circleLib.geometry import (
    diameter,
    estimate_fatness,
    hausdorff_distance,
    l2_diameters,
)
from circleLib.objects.check import CheckResult
from circleLib.objects.circleDomainMap import CircleDomainMap
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.packing import Packing
from circleLib.objects.report import (
    HausdorffRow,
    SequenceEntry,
    SequenceReport,
    UpperGradientRecord,
)
from circleLib.objects.sampledSet import SampledSet
from circleLib.objects.spherePoint import SpherePoint
from circleLib.sphere import conformal_factor, spherical_distance
from circleLib.typing import ComplexArray
from circleLib.uniformize import (
    conformality_identity_check,
    default_normalization,
    derivative_l2,
    koebe_iterate,
    pushforward_set,
)

logger = logging.getLogger(__name__)

__all__ = [
    "collect_sequence",
    "run_sequence",
    "nondegeneracy_table",
    "clustering_count",
    "probe_grid",
    "vertex_probes",
    "random_curves",
    "upper_gradient_spot_check",
    "l2_control_check",
    "no_collision_check",
    "degeneracy_check",
    "fatness_floor_check",
    "equicontinuity_table",
    "area_inequality_check",
    "hausdorff_cauchy_trend",
]

Normalization = Tuple[SpherePoint, SpherePoint, SpherePoint]

# spread allowed for quantities asserted bounded across n
_SPREAD = 0.2

# curves passing this close to a puncture are skipped
_PUNCTURE_GAP = 1e-6


def _entry(
    P: Packing,
    M: CircleDomainMap,
    seed: int,
    fatness_centers: int,
    fatness_radii: int,
    derivative_nodes: int,
) -> SequenceEntry:
    circles = list(M.circles)
    return SequenceEntry(
        n=M.n,
        converged=M.report.converged,
        circles=circles,
        sweeps=M.report.sweeps,
        residual=M.report.residuals[-1] if M.report.residuals else 0.0,
        min_distance=Packing(circles).min_pairwise_distance(),
        fatness={
            c.id: estimate_fatness(c, fatness_centers, fatness_radii, seed).tau_hat
            for c in circles
            if not c.is_degenerate
        },
        l2_diameter=l2_diameters(circles),
        derivative_l2=derivative_l2(M, derivative_nodes),
        degenerate_inputs=[K.id for K in P.first(M.n) if K.is_degenerate],
        degenerate_outputs=[c.id for c in circles if c.is_degenerate],
    )


def _hausdorff_rows(entries: Sequence[SequenceEntry]) -> List[HausdorffRow]:
    converged = [entry for entry in entries if entry.converged]
    ids = sorted({c.id for entry in converged for c in entry.circles})
    rows = []
    for id in ids:
        circles = []
        ns = []
        for entry in converged:
            for c in entry.circles:
                if c.id == id:
                    circles.append(c)
                    ns.append(entry.n)
        distances = [[hausdorff_distance(a, b) for b in circles] for a in circles]
        deviation = [max(row[k + 1 :]) for k, row in enumerate(distances[:-1])]
        rows.append(HausdorffRow(id, ns, distances, deviation))
    return rows


def collect_sequence(
    P: Packing,
    ns: Sequence[int],
    zeta_inf: SpherePoint | complex | str | None = None,
    zeta_0: SpherePoint | complex | str | None = None,
    zeta_1: SpherePoint | complex | str | None = None,
    tol: float = KOEBE_TOLERANCE,
    max_sweeps: int = MAX_SWEEPS,
    degree: int = LAURENT_DEGREE,
    samples: int = BOUNDARY_SAMPLES,
    seed: int = 0,
    config_hash: str = "",
    fatness_centers: int = 16,
    fatness_radii: int = 6,
    derivative_nodes: int = 4096,
) -> Tuple[SequenceReport, List[CircleDomainMap]]:
    """Runs :func:`run_sequence` and also returns the map of every converged
    ``n``.

    Raises:
        GeometryError: if ``ns`` is not increasing or exceeds the packing or
            the component cap.
    """
    ns = [int(n) for n in ns]
    if not ns or any(a >= b for a, b in zip(ns, ns[1:])) or ns[0] < 0:
        raise GeometryError(f"ns must be increasing and non-negative, got {ns}")
    if ns[-1] > min(len(P), COMPONENT_CAP):
        raise GeometryError(
            f"n = {ns[-1]} exceeds the packing size {len(P)} or the cap {COMPONENT_CAP}"
        )
    if zeta_inf is None or zeta_0 is None or zeta_1 is None:
        # the largest domain's choice lies in every smaller one
        normalization: Normalization = default_normalization(P.first(ns[-1]))
    else:
        normalization = (
            SpherePoint.coerce(zeta_inf),
            SpherePoint.coerce(zeta_0),
            SpherePoint.coerce(zeta_1),
        )

    entries: List[SequenceEntry] = []
    maps: List[CircleDomainMap] = []
    for n in ns:
        try:
            M = koebe_iterate(P, n, *normalization, tol, max_sweeps, degree, samples)
        except (GeometryError, ConvergenceError) as exc:
            logger.warning("n = %d failed: %s", n, exc)
            entries.append(SequenceEntry(n, error=str(exc)))
            continue
        maps.append(M)
        entries.append(
            _entry(P, M, seed, fatness_centers, fatness_radii, derivative_nodes)
        )
        logger.info("n = %d: %d sweeps", n, M.report.sweeps)

    diameters: Dict[int, Dict[int, float]] = {K.id: {} for K in P.first(ns[-1])}
    for entry in entries:
        for c in entry.circles:
            diameters[c.id][entry.n] = diameter(c)

    report = SequenceReport(
        ns=ns,
        entries=entries,
        hausdorff=_hausdorff_rows(entries),
        diameters=diameters,
        config_hash=config_hash,
        seed=seed,
    )
    return report, maps


def run_sequence(
    P: Packing,
    ns: Sequence[int],
    zeta_inf: SpherePoint | complex | str | None = None,
    zeta_0: SpherePoint | complex | str | None = None,
    zeta_1: SpherePoint | complex | str | None = None,
    tol: float = KOEBE_TOLERANCE,
    **kwargs: int | float | str,
) -> SequenceReport:
    """Uniformizes the first ``n`` continua for every ``n`` in ``ns`` with one normalization.

    A failing ``n`` is recorded in its entry and does not stop the run.
    """
    report, _ = collect_sequence(
        P, ns, zeta_inf, zeta_0, zeta_1, tol, **kwargs  # type: ignore[arg-type]
    )
    return report


def _image_diameter(M: CircleDomainMap, E: SampledSet, samples: int = 128) -> float:
    image = pushforward_set(M, E)
    parts = [image.array]
    parts += [c.boundary_samples(samples) for c in image.circles]
    return diameter(np.concatenate(parts))


def nondegeneracy_table(
    R: SequenceReport,
    E: int | PeripheralContinuum | SampledSet,
    maps: Optional[Sequence[CircleDomainMap]] = None,
) -> CheckResult:
    """Smallest spherical diameter of the pushforward of ``E`` over the
    converged runs, with the witness ``n``.

    ``E`` is an input continuum (by id or value), whose image is its output
    circle, or a sampled set, which needs the ``maps``.
    """
    values: Dict[str, float] = {}
    for entry in R.converged:
        if isinstance(E, SampledSet):
            if maps is None:
                raise ValueError("sampled sets need the maps of the run")
            M = next(M for M in maps if M.n == entry.n)
            values[f"n={entry.n}"] = _image_diameter(M, E)
            continue
        id = E if isinstance(E, int) else E.id
        match = [c for c in entry.circles if c.id == id]
        if match:
            values[f"n={entry.n}"] = diameter(match[0])
    if not values:
        return CheckResult("nondegeneracy", passed=False, message="no run contains the set")
    witness = min(values, key=values.__getitem__)
    minimum = values[witness]
    values["minimum"] = minimum
    values["witness"] = float(witness[2:])
    return CheckResult("nondegeneracy", passed=minimum > 0, values=values)


def probe_grid(circles: Sequence[PeripheralContinuum], size: int = 256) -> ComplexArray:
    """A ``size`` x ``size`` grid of chart points over the circles."""
    bounds = Packing(list(circles)).getBounds()
    if bounds is None:
        return np.array([c.planar_circle[0] for c in circles], dtype=np.complex128)
    x = np.linspace(bounds.xMin, bounds.xMax, size)
    y = np.linspace(bounds.yMin, bounds.yMax, size)
    return (x[None, :] + 1j * y[:, None]).ravel()


def vertex_probes(circles: Sequence[PeripheralContinuum], samples: int = 64) -> ComplexArray:
    """Boundary samples of every circle, points included."""
    if not circles:
        return np.zeros(0, dtype=np.complex128)
    return np.concatenate([c.boundary_samples(samples) for c in circles])


def clustering_count(
    circles: SequenceReport | Sequence[PeripheralContinuum],
    probes: ComplexArray | None = None,
) -> int:
    """``max_x #{i : x in p_i}`` over probe points ``x``; 1 for disjoint
    circles. A report contributes the circles of its last converged run."""
    if isinstance(circles, SequenceReport):
        converged = circles.converged
        circles = converged[-1].circles if converged else []
    circles = list(circles)
    if not circles:
        return 0
    if probes is None:
        probes = np.concatenate([probe_grid(circles), vertex_probes(circles)])
    probes = np.asarray(probes, dtype=np.complex128)
    counts = np.zeros(probes.shape, dtype=np.int64)
    for c in circles:
        counts += c.contains(probes)
    return int(counts.max()) if counts.size else 0


def random_curves(
    M: CircleDomainMap,
    count: int = 20,
    seed: int = 0,
    vertices: int = 4,
) -> List[ComplexArray]:
    """Seeded random polylines of the image plane whose endpoints lie in the
    circle domain; inner vertices may fall inside circles."""
    rng = np.random.default_rng(seed)
    bounds = Packing(list(M.circles)).getBounds()
    if bounds is None:
        box = (-1.0, -1.0, 2.0, 2.0)
    else:
        margin = 0.25 * max(bounds.width, bounds.height, 1e-3)
        box = (
            bounds.xMin - margin,
            bounds.yMin - margin,
            bounds.width + 2 * margin,
            bounds.height + 2 * margin,
        )

    def draw(size: int) -> ComplexArray:
        return box[0] + box[2] * rng.random(size) + 1j * (box[1] + box[3] * rng.random(size))

    curves = []
    while len(curves) < count:
        points = draw(vertices)
        if M.in_image(points[[0, -1]], strict=False).all():
            curves.append(points)
    return curves


def _outside_pieces(
    start: complex, end: complex, circles: Sequence[Tuple[complex, float]]
) -> Tuple[List[Tuple[complex, complex]], List[int]]:
    """Sub-segments of ``[start, end]`` outside every circle, and the indices
    of the circles the segment meets."""
    d = end - start
    A = abs(d) ** 2
    inside: List[Tuple[float, float]] = []
    met = []
    for k, (center, radius) in enumerate(circles):
        offset = start - center
        B = 2 * (d.conjugate() * offset).real
        C = abs(offset) ** 2 - radius**2
        discriminant = B * B - 4 * A * C
        if discriminant < 0:
            continue
        root = math.sqrt(discriminant)
        t1, t2 = (-B - root) / (2 * A), (-B + root) / (2 * A)
        if t2 < 0 or t1 > 1:
            continue
        met.append(k)
        inside.append((max(t1, 0.0), min(t2, 1.0)))
    pieces, t = [], 0.0
    for t1, t2 in sorted(inside):
        if t1 > t:
            pieces.append((start + t * d, start + t1 * d))
        t = max(t, t2)
    if t < 1:
        pieces.append((start + t * d, end))
    return pieces, met


def _gradient_integral(M: CircleDomainMap, a: complex, b: complex, nodes: int) -> float:
    """``∫ |Dg| ds`` along the chart segment from ``a`` to ``b``."""
    x, weights = np.polynomial.legendre.leggauss(nodes)
    w = a + (b - a) * (x + 1) / 2
    gradient = 1 / M.spherical_derivative(M.inverse(w))
    return float(np.sum(weights * gradient * conformal_factor(w)) * abs(b - a) / 2)


def upper_gradient_spot_check(
    M: CircleDomainMap,
    curves: Sequence[ComplexArray] | None = None,
    P: Packing | None = None,
    tolerance: float = QUADRATURE_TOLERANCE,
    count: int = 20,
    seed: int = 0,
    nodes: int = 24,
) -> List[UpperGradientRecord]:
    """Checks the transboundary upper gradient inequality of ``g = f^-1``
    on polylines in the image plane:

        σ(g(a), g(b)) <= ∫_{γ ∩ X} |Dg| ds + Σ diam(K)

    the sum running over the continua ``K`` whose circles ``γ`` meets. Without
    ``curves``, :func:`random_curves` draws ``count`` of them with ``seed``.
    Diameters are taken from ``P``, the domain of the map by default.
    """
    if curves is None:
        curves = random_curves(M, count, seed)
    domain = P if P is not None else M.domain
    round_circles = [c for c in M.circles if not c.is_degenerate]
    punctures = np.array([c.planar_circle[0] for c in M.circles if c.is_degenerate])
    circles = [c.planar_circle for c in round_circles]

    records = []
    for k, curve in enumerate(curves):
        curve = np.asarray(curve, dtype=np.complex128)
        record = UpperGradientRecord(k, n=M.n)
        if len(curve) < 2 or np.all(curve == curve[0]):
            record.passed = True
            records.append(record)
            continue
        line = shapely.LineString(np.column_stack([curve.real, curve.imag]))
        if len(punctures) and np.min(
            shapely.distance(line, shapely.points(punctures.real, punctures.imag))
        ) < _PUNCTURE_GAP:
            logger.info("curve %d passes through a puncture, skipped", k)
            record.skipped = True
            records.append(record)
            continue
        a, b = M.inverse(curve[[0, -1]])
        record.lhs = spherical_distance(complex(a), complex(b))
        integral = 0.0
        crossed: Set[int] = set()
        for start, end in zip(curve, curve[1:]):
            if start == end:
                continue
            pieces, met = _outside_pieces(complex(start), complex(end), circles)
            crossed.update(round_circles[j].id for j in met)
            for p, q in pieces:
                if p != q:
                    integral += _gradient_integral(M, p, q, nodes)
        record.crossed = sorted(crossed)
        record.rhs = integral + math.fsum(diameter(domain.by_id(i)) for i in record.crossed)
        record.passed = bool(record.lhs <= record.rhs * (1 + tolerance))
        records.append(record)
    return records


def l2_control_check(R: SequenceReport, tolerance: float = QUADRATURE_TOLERANCE) -> CheckResult:
    """The ℓ² norm of the output diameters stays within a factor 1.2 of its
    final value, in both directions, and ``∫ |Dg|^2 dΣ <= 4 pi (1 + tolerance)`` for every ``n``."""
    entries = R.converged
    values: Dict[str, float] = {}
    for entry in entries:
        values[f"l2_diameter[{entry.n}]"] = entry.l2_diameter
        values[f"derivative_l2[{entry.n}]"] = entry.derivative_l2
    if not entries:
        return CheckResult("l2_control", passed=False, message="no converged run")
    final = entries[-1].l2_diameter
    bounded = all(
        final / (1 + _SPREAD) <= e.l2_diameter <= (1 + _SPREAD) * final for e in entries
    )
    derivative = all(e.derivative_l2 <= 4 * math.pi * (1 + tolerance) for e in entries)
    return CheckResult("l2_control", passed=bounded and derivative, values=values)


def no_collision_check(R: SequenceReport) -> CheckResult:
    """Output circles stay apart: the smallest pairwise distance is positive
    and, across ``n``, within 20% of its final value."""
    entries = [e for e in R.converged if math.isfinite(e.min_distance)]
    values = {f"min_distance[{e.n}]": e.min_distance for e in entries}
    if not entries:
        return CheckResult("no_collision", passed=True, values=values, informational=True)
    final = entries[-1].min_distance
    passed = final > 0 and all(e.min_distance >= (1 - _SPREAD) * final for e in entries)
    return CheckResult("no_collision", passed=passed, values=values)


def degeneracy_check(R: SequenceReport) -> CheckResult:
    """Point inputs come out as points and only they, at every ``n``."""
    mismatched = [e.n for e in R.converged if e.degenerate_inputs != e.degenerate_outputs]
    return CheckResult(
        "degenerate_iff_degenerate",
        passed=not mismatched,
        values={f"points[{e.n}]": float(len(e.degenerate_outputs)) for e in R.converged},
        message=f"mismatch at n = {mismatched}" if mismatched else "",
    )


def fatness_floor_check(
    R: SequenceReport, baseline: float = DISK_FATNESS_BASELINE
) -> CheckResult:
    """Every non-degenerate output circle is at least ``baseline`` fat."""
    values = {
        f"tau_min[{e.n}]": min(e.fatness.values(), default=math.inf) for e in R.converged
    }
    passed = all(v >= baseline for v in values.values())
    return CheckResult("fatness_floor", passed=passed, values=values)


def hausdorff_cauchy_trend(R: SequenceReport) -> CheckResult:
    """For every circle, the largest Hausdorff distance to its later positions
    does not increase with ``n``."""
    violations = [row.id for row in R.hausdorff if not row.is_nonincreasing]
    values = {
        f"deviation[{row.id}]": row.deviation[0] for row in R.hausdorff if row.deviation
    }
    return CheckResult(
        "hausdorff_cauchy_trend",
        passed=not violations,
        values=values,
        message=f"increasing deviation for ids {violations}" if violations else R.caveat,
    )


def equicontinuity_table(
    M: CircleDomainMap,
    deltas: Sequence[float] = (0.2, 0.1, 0.05, 0.025),
    samples: int = 32,
) -> CheckResult:
    """``ε(δ)``: the largest spherical image diameter of chart disks of
    diameter ``δ`` centered on a ``δ``-grid and contained in the domain.

    Passes when ``ε`` does not increase as ``δ`` decreases.
    """
    bounds = M.domain.getBounds()
    if bounds is None:
        bounds_box = (-1.0, -1.0, 1.0, 1.0)
    else:
        margin = max(bounds.width, bounds.height, 1.0) / 4
        bounds_box = (
            bounds.xMin - margin,
            bounds.yMin - margin,
            bounds.xMax + margin,
            bounds.yMax + margin,
        )
    t = np.exp(2j * np.pi * np.arange(samples) / samples)
    values: Dict[str, float] = {}
    epsilons = []
    for delta in sorted(deltas, reverse=True):
        x = np.arange(bounds_box[0], bounds_box[2], delta)
        y = np.arange(bounds_box[1], bounds_box[3], delta)
        centers = (x[None, :] + 1j * y[:, None]).ravel()
        disks = centers[:, None] + delta / 2 * t[None, :]
        keep = M.in_domain(disks.ravel(), strict=False).reshape(disks.shape).all(axis=1)
        keep &= M.in_domain(centers, strict=False)
        worst = 0.0
        for ring in disks[keep]:
            worst = max(worst, diameter(M(ring)))
        values[f"epsilon[{delta:g}]"] = worst
        epsilons.append(worst)
    passed = all(a >= b - 1e-12 for a, b in zip(epsilons, epsilons[1:]))
    return CheckResult("equicontinuity", passed=passed, values=values)


def area_inequality_check(
    M: CircleDomainMap,
    regions: Sequence[PeripheralContinuum],
    tolerance: float = QUADRATURE_TOLERANCE,
) -> CheckResult:
    """``∫_{g^-1(E)} |Dg|^2 dΣ <= Σ(E)`` for test regions ``E`` in the domain
    (conformal stages have distortion 1)."""
    values: Dict[str, float] = {}
    passed = True
    for k, region in enumerate(regions):
        check = conformality_identity_check(M, region, tolerance)
        values[f"lhs[{k}]"] = check.values["lhs"]
        values[f"rhs[{k}]"] = check.values["rhs"]
        passed &= check.values["lhs"] <= check.values["rhs"] * (1 + tolerance)
    return CheckResult("area_inequality", passed=bool(passed), values=values)
