"""Conformal maps of finitely connected domains onto circle domains.

:func:`koebe_iterate` maps the sphere minus the first ``n`` continua of a
packing onto a circle domain normalized at three points. The
map is built as a chain of elementary stages: a chart Möbius map sending the
point ``zeta_inf`` to infinity, one exterior map per component and sweep,
and a final affine normalization.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import shapely

from circleLib.constants import (
    BOUNDARY_SAMPLES,
    COMPONENT_CAP,
    KOEBE_TOLERANCE,
    LAURENT_DEGREE,
    MAX_SWEEPS,
    QUADRATURE_TOLERANCE,
    STALL_SWEEPS,
)
from circleLib.converters import unstructure
from circleLib.errors import ConvergenceError, GeometryError
from circleLib.geometry import continua_intersect, distance_to, hausdorff_distance
from circleLib.objects.check import CheckResult
from circleLib.objects.circleDomainMap import (
    CircleDomainMap,
    KoebeIterationReport,
    Stage,
)
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.exteriorMap import ExteriorMap
from circleLib.objects.misc import fit_circle
from circleLib.objects.mobius import MobiusTransform
from circleLib.objects.packing import Packing
from circleLib.objects.sampledSet import SampledSet
from circleLib.objects.spherePoint import SpherePoint
from circleLib.sphere import (
    area_element,
    fibonacci_nodes,
    mobius_normalize,
    spherical_area,
)
from circleLib.typing import ComplexArray

logger = logging.getLogger(__name__)

__all__ = [
    "exterior_riemann_map",
    "default_normalization",
    "koebe_iterate",
    "evaluate",
    "inverse_evaluate",
    "pushforward_set",
    "is_connected",
    "derivative_l2",
    "conformality_identity_check",
    "output_circles_equivalent",
    "as_domain_map",
]

Normalization = Tuple[SpherePoint, SpherePoint, SpherePoint]


def _interior_point(curve: ComplexArray) -> complex:
    polygon = shapely.Polygon(np.column_stack([curve.real, curve.imag]))
    point = polygon.centroid
    if not polygon.contains(point):
        point = polygon.representative_point()
    return complex(point.x, point.y)


def exterior_riemann_map(
    curve: PeripheralContinuum | ComplexArray,
    degree: int = LAURENT_DEGREE,
    boundary_samples: int = BOUNDARY_SAMPLES,
) -> ExteriorMap:
    """Fits the exterior map of a disk or polygon, or of a closed curve given
    by counter-clockwise chart samples.

    Polygons are sampled with extra points graded toward their corners, where
    the fit places clustered poles.

    Raises:
        GeometryError: for point continua, non-simple curves or fewer than
            ``4 * degree`` samples.
        ConvergenceError: if the least squares system is ill-conditioned.
    """
    if isinstance(curve, PeripheralContinuum):
        if curve.is_degenerate:
            raise GeometryError("a point has no exterior map")
        samples, corners = curve.graded_boundary_samples(boundary_samples)
    else:
        samples, corners = np.asarray(curve, dtype=np.complex128), []
    return ExteriorMap.fit(samples, _interior_point(samples), degree, corners)


def default_normalization(domain: Packing, grid: int = 24) -> Normalization:
    """``(inf, zeta_0, zeta_1)`` with ``zeta_0`` and ``zeta_1`` chosen on a grid
    around the continua as far from them as possible, ``zeta_1`` at least half
    the box diagonal away from ``zeta_0``."""
    if not len(domain):
        return SpherePoint.infinity(), SpherePoint(0j), SpherePoint(1 + 0j)
    bounds = domain.getBounds()
    assert bounds is not None
    diagonal = math.hypot(bounds.width, bounds.height)
    box = bounds.expanded(max(0.25 * diagonal, 0.5))
    x = np.linspace(box.xMin, box.xMax, grid)
    y = np.linspace(box.yMin, box.yMax, grid)
    candidates = (x[None, :] + 1j * y[:, None]).ravel()
    score = np.min([distance_to(candidates, K, "chart") for K in domain], axis=0)
    first = int(np.argmax(score))
    zeta_0 = candidates[first]
    far = np.abs(candidates - zeta_0) >= math.hypot(box.width, box.height) / 2
    second = int(np.argmax(np.where(far, score, -np.inf)))
    return SpherePoint.infinity(), SpherePoint(zeta_0), SpherePoint(candidates[second])


def _collision_check(
    boundaries: Dict[int, ComplexArray],
    marked: Dict[int, complex],
    report: KoebeIterationReport,
) -> None:
    circles = {i: fit_circle(curve)[:2] for i, curve in boundaries.items()}
    values = [c for c, _ in circles.values()] + list(marked.values())
    if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in values):
        raise ConvergenceError("non-finite values during Koebe iteration", unstructure(report))
    ids = list(circles)
    for k, i in enumerate(ids):
        ci, ri = circles[i]
        for j in ids[k + 1 :]:
            cj, rj = circles[j]
            if abs(ci - cj) <= ri + rj:
                raise ConvergenceError(
                    f"components {i} and {j} collided during Koebe iteration",
                    unstructure(report),
                )
        for j, p in marked.items():
            if abs(p - ci) <= ri:
                raise ConvergenceError(
                    f"point {j} fell into component {i} during Koebe iteration",
                    unstructure(report),
                )


def koebe_iterate(
    P: Packing,
    n: Optional[int] = None,
    zeta_inf: SpherePoint | complex | str | None = None,
    zeta_0: SpherePoint | complex | str | None = None,
    zeta_1: SpherePoint | complex | str | None = None,
    tol: float = KOEBE_TOLERANCE,
    max_sweeps: int = MAX_SWEEPS,
    degree: int = LAURENT_DEGREE,
    samples: int = BOUNDARY_SAMPLES,
) -> CircleDomainMap:
    """Maps the complement of the first ``n`` continua onto a circle domain.

    Components are circularized one after the other in index order, each by
    the exterior map fitted to its current boundary samples, which is then
    applied to everything else, its own samples included. The first fit of a
    polygon uses samples and poles graded toward its corners. Sweeps repeat
    until both the largest circularity residual of the boundary images and
    the largest fit residual of the sweep are at most ``tol``. Point continua
    are carried along as marked points and come out as points.

    Without a full normalization triple, :func:`default_normalization` is
    used.

    Raises:
        GeometryError: if the packing is invalid, ``n`` exceeds the component
            cap, or a normalization point is not in the domain.
        ConvergenceError: on the sweep cap, a collision, or when the residual
            has not improved for ``STALL_SWEEPS`` sweeps; the partial report
            is attached.
    """
    n = len(P) if n is None else n
    if n > COMPONENT_CAP:
        raise GeometryError(f"n = {n} exceeds the component cap {COMPONENT_CAP}")
    domain = P.first(n)
    domain.check()
    if zeta_inf is None or zeta_0 is None or zeta_1 is None:
        normalization = default_normalization(domain)
    else:
        normalization = (
            SpherePoint.coerce(zeta_inf),
            SpherePoint.coerce(zeta_0),
            SpherePoint.coerce(zeta_1),
        )
    for point in normalization:
        if point.infinite:
            continue
        for K in domain:
            if K.contains(point.value):
                raise GeometryError(f"normalization point {point} lies in continuum {K.id}")
    mobius_normalize(*normalization)
    z_inf, z_0, z_1 = normalization

    if z_inf.infinite:
        chart = MobiusTransform.identity()
    else:
        chart = MobiusTransform.from_coefficients(0, 1, 1, -z_inf.value)
    stages: List[Stage] = [Stage(0, mobius=chart)]
    boundaries: Dict[int, ComplexArray] = {}
    corners: Dict[int, List[int]] = {}
    marked: Dict[int, complex] = {}
    for K in domain:
        if K.is_degenerate:
            marked[K.id] = complex(chart.apply(K.planar_circle[0]))
        else:
            points, corners[K.id] = K.graded_boundary_samples(samples)
            boundaries[K.id] = chart.apply(points)
    anchors = chart.apply(np.array([z_0.value, z_1.value]))

    report = KoebeIterationReport(tolerance=tol)
    best, since_best = math.inf, 0
    for sweep in range(1, max_sweeps + 1) if boundaries else ():
        worst_fit = 0.0
        for i in list(boundaries):
            curve = boundaries[i]
            try:
                # corner poles only for the first fit, later curves are smooth
                phi = ExteriorMap.fit(
                    curve, _interior_point(curve), degree, corners.pop(i, ()), target=tol / 4
                )
            except GeometryError as e:
                raise ConvergenceError(
                    f"sweep {sweep}, component {i}: {e}", unstructure(report)
                ) from e
            worst_fit = max(worst_fit, phi.residual)
            for j in boundaries:
                boundaries[j] = phi(boundaries[j])
            marked = {j: complex(phi(p)) for j, p in marked.items()}
            anchors = phi(anchors)
            stages.append(Stage(i, exterior=phi))
        residual = max(fit_circle(curve)[2] for curve in boundaries.values())
        report.residuals.append(residual)
        report.fit_residuals.append(worst_fit)
        report.sweeps = sweep
        logger.debug("sweep %d: residual %.3g, fit residual %.3g", sweep, residual, worst_fit)
        _collision_check(boundaries, marked, report)
        error = max(residual, worst_fit)
        if error <= tol:
            report.converged = True
            break
        if error < best:
            best, since_best = error, 0
            continue
        since_best += 1
        if since_best >= STALL_SWEEPS:
            raise ConvergenceError(
                f"Koebe iteration stalled at residual {best:.3g} after {sweep} sweeps "
                f"(tolerance {tol:g})",
                unstructure(report),
            )
    else:
        if boundaries:
            raise ConvergenceError(
                f"Koebe iteration did not reach {tol:g} within {max_sweeps} sweeps "
                f"(residual {report.residuals[-1]:.3g})",
                unstructure(report),
            )
        report.converged = True

    w_0, w_1 = complex(anchors[0]), complex(anchors[1])
    normalize = MobiusTransform.from_coefficients(1, -w_0, 0, w_1 - w_0)
    stages.append(Stage(0, mobius=normalize))
    circles = []
    for K in domain:
        if K.is_degenerate:
            circles.append(PeripheralContinuum.point(K.id, normalize(marked[K.id]).value))
        else:
            center, radius, _ = fit_circle(boundaries[K.id])
            circles.append(
                PeripheralContinuum.from_planar_circle(
                    K.id, *normalize.image_of_circle(center, radius)
                )
            )
    logger.info(
        "uniformized %d continua in %d sweeps (residual %.3g)",
        n,
        report.sweeps,
        report.residuals[-1] if report.residuals else 0.0,
    )
    return CircleDomainMap(stages, circles, normalization, report, domain)


def as_domain_map(T: MobiusTransform) -> CircleDomainMap:
    """A Möbius map as a one-stage map of the whole sphere."""
    return CircleDomainMap(
        [Stage(0, mobius=T)],
        normalization=(T.inverse()(SpherePoint.infinity()), T.inverse()(0j), T.inverse()(1)),
        report=KoebeIterationReport(converged=True),
    )


def evaluate(M: CircleDomainMap, z: SpherePoint | complex | str) -> SpherePoint:
    """The image ``f(z)`` of a domain point ``z``; punctures are allowed.

    Raises:
        GeometryError: if ``z`` lies inside an input continuum.
    """
    z = SpherePoint.coerce(z)
    value = complex(np.inf, np.inf) if z.infinite else z.value
    if not M.in_domain(np.array([value]))[0]:
        raise GeometryError(f"{z} lies inside a peripheral continuum")
    w = complex(M(np.array([value]))[0])
    return SpherePoint.infinity() if not np.isfinite(w) else SpherePoint(w)


def inverse_evaluate(M: CircleDomainMap, w: SpherePoint | complex | str) -> SpherePoint:
    """The preimage ``f^-1(w)`` of a point ``w`` of the circle domain.

    Raises:
        GeometryError: if ``w`` lies inside an output circle.
        ConvergenceError: if Newton inversion of a stage fails.
    """
    w = SpherePoint.coerce(w)
    value = complex(np.inf, np.inf) if w.infinite else w.value
    if not M.in_image(np.array([value]))[0]:
        raise GeometryError(f"{w} lies inside an output circle")
    z = complex(M.inverse(np.array([value]))[0])
    return SpherePoint.infinity() if not np.isfinite(z) else SpherePoint(z)


def pushforward_set(M: CircleDomainMap, E: SampledSet) -> SampledSet:
    """The set function ``f^*``: the image of the part of ``E`` in the domain plus the output
    circles of the continua ``E`` touches."""
    z = E.array
    keep = M.in_domain(z) if len(z) else np.zeros(0, bool)
    images = M(z[keep]) if len(z) else z
    circles = [c for c in M.circles if c.id in E.touched]
    return SampledSet(images.tolist(), E.touched, circles)


def is_connected(S: SampledSet, tolerance: float) -> bool:
    """Whether the sample, joined at ``tolerance`` to itself and to its
    circles, forms one connected cluster."""
    graph = nx.Graph()
    z = S.array
    graph.add_nodes_from(("p", k) for k in range(len(z)))
    graph.add_nodes_from(("c", c.id) for c in S.circles)
    if len(z):
        close = np.abs(z[:, None] - z[None, :]) <= tolerance
        graph.add_edges_from(
            (("p", int(a)), ("p", int(b))) for a, b in zip(*np.nonzero(np.triu(close, 1)))
        )
        for c in S.circles:
            near = np.nonzero(distance_to(z, c, "chart") <= tolerance)[0]
            graph.add_edges_from((("c", c.id), ("p", int(k))) for k in near)
    return graph.number_of_nodes() > 0 and nx.is_connected(graph)


def derivative_l2(M: CircleDomainMap, nodes: int = 4096) -> float:
    """``∫ |Dg|^2 dΣ`` of the inverse map ``g`` over the circle domain, by
    equal-weight quadrature on Fibonacci nodes of the sphere with the output
    circles masked out."""
    w = fibonacci_nodes(nodes)
    w = w[M.in_image(w, strict=False)]
    if not len(w):
        return 0.0
    derivative = 1 / M.spherical_derivative(M.inverse(w))
    return 4 * math.pi / nodes * float(np.sum(derivative**2))


def _domain_area(M: CircleDomainMap) -> float:
    return 4 * math.pi - math.fsum(spherical_area(K) for K in M.domain)


def _boundary_parametrization(
    region: PeripheralContinuum, count: int
) -> Tuple[ComplexArray, ComplexArray]:
    """Boundary points and their derivatives in a parameter on ``[0, 2 pi)``."""
    phi = 2 * np.pi * np.arange(count) / count
    if region.kind == "disk":
        center, radius = region.planar_circle
        z = center + radius * np.exp(1j * phi)
        return z, 1j * (z - center)
    verts = np.asarray(region.vertices, dtype=np.complex128)
    edges = np.roll(verts, -1) - verts
    cumulative = np.concatenate([[0.0], np.cumsum(np.abs(edges))])
    s = cumulative[-1] * phi / (2 * np.pi)
    k = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, len(verts) - 1)
    z = verts[k] + edges[k] * (s - cumulative[k]) / np.abs(edges[k])
    return z, edges[k] / np.abs(edges[k]) * cumulative[-1] / (2 * np.pi)


def _region_integral(
    M: CircleDomainMap, region: PeripheralContinuum, radial: int, angular: int
) -> float:
    """``∫_{f(E)} |Dg|^2 dΣ`` in polar coordinates around ``f(anchor)``.

    The polar angle is parametrized by the boundary parameter of ``E``, so
    the outer quadrature is a periodic trapezoid rule in that parameter.
    """
    z, dz = _boundary_parametrization(region, angular)
    boundary = M(z)
    center = complex(M(np.array([region.anchor()]))[0])
    offsets = boundary - center
    turning = np.imag(M.derivative(z) * dz / offsets)
    if np.any(turning <= 0):
        raise ConvergenceError("image of the test region is not star-shaped")
    nodes, weights = np.polynomial.legendre.leggauss(radial)
    s = (nodes + 1) / 2
    w = center + s[:, None] * offsets[None, :]
    r = s[:, None] * np.abs(offsets)[None, :]
    integrand = (1 / M.spherical_derivative(M.inverse(w.ravel()))).reshape(w.shape) ** 2
    integrand = integrand * area_element(w) * r
    # dr = |offset| / 2 ds on [-1, 1]
    radial_sums = np.sum(weights[:, None] * integrand, axis=0) * np.abs(offsets) / 2
    return float(np.sum(radial_sums * turning) * 2 * math.pi / angular)


def conformality_identity_check(
    M: CircleDomainMap | MobiusTransform,
    region: PeripheralContinuum | None = None,
    tolerance: float = QUADRATURE_TOLERANCE,
    nodes: int = 4096,
) -> CheckResult:
    """Checks ``∫_{g^-1(E)} |Dg|^2 dΣ = Σ(E)`` for a test region ``E`` in
    the domain: a disk or polygon, or the whole domain when ``region`` is None.

    The left side is integrated over the image ``f(E)`` at two refinement
    levels. For the whole domain the right side is ``4 pi`` minus the areas
    of the continua.

    Raises:
        GeometryError: if the region meets a continuum.
        ConvergenceError: if the two refinement levels disagree by more than
            ``tolerance``.
    """
    if isinstance(M, MobiusTransform):
        M = as_domain_map(M)
    if region is None:
        coarse = derivative_l2(M, nodes)
        lhs = derivative_l2(M, 4 * nodes)
        rhs = _domain_area(M)
    else:
        if region.is_degenerate:
            raise GeometryError("the test region must have interior")
        zeta_inf = M.normalization[0]
        if not zeta_inf.infinite and region.contains(zeta_inf.value):
            raise GeometryError("the test region contains the point sent to infinity")
        for K in M.domain:
            if continua_intersect(region, K):
                raise GeometryError(f"test region meets continuum {K.id}")
        coarse = _region_integral(M, region, 16, 128)
        lhs = _region_integral(M, region, 32, 256)
        rhs = spherical_area(region)
    if abs(lhs - coarse) > tolerance * abs(lhs):
        raise ConvergenceError(
            f"quadrature did not converge: {coarse:.6g} against {lhs:.6g}"
        )
    ratio = lhs / rhs
    return CheckResult(
        "conformality_identity",
        abs(ratio - 1) <= tolerance,
        {"lhs": lhs, "rhs": rhs, "ratio": ratio},
    )


def circle_deviation(
    first: Sequence[PeripheralContinuum], second: Sequence[PeripheralContinuum]
) -> float:
    """Largest spherical Hausdorff distance between same-id circles."""
    by_id = {c.id: c for c in second}
    if sorted(by_id) != sorted(c.id for c in first):
        return math.inf
    return max((hausdorff_distance(c, by_id[c.id]) for c in first), default=0.0)


def output_circles_equivalent(
    A: CircleDomainMap, B: CircleDomainMap, tolerance: float = 1e-6
) -> bool:
    """Whether two maps produced the same output circles, e.g. after running
    on Möbius-transformed inputs with correspondingly transformed
    normalization points."""
    return circle_deviation(A.circles, B.circles) <= tolerance
