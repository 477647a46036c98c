"""Set functionals of packings: diameters, distances, fatness, counting, and
sampled checks of the inequalities fat sets satisfy.

Most functions take a ``metric`` argument: ``"spherical"`` (the default,
great-circle distance) or ``"chart"`` (Euclidean distance in the plane chart).
Point sets can be given as continua or as arrays of chart points.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, List, Literal, Sequence, Tuple, Union

import numpy as np
import shapely

from circleLib.constants import (
    FATNESS_CENTERS,
    FATNESS_RADII,
    HAUSDORFF_REFINEMENT,
    MAXIMAL_INEQUALITY_CONSTANT,
    MOBIUS_FATNESS_BASELINE,
    RADIAL_HIT_CONSTANT,
)
from circleLib.errors import GeometryError
from circleLib.objects.check import CheckResult
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.fatness import FatnessEstimate
from circleLib.objects.mobius import MobiusTransform
from circleLib.objects.packing import Packing
from circleLib.sphere import (
    area_element,
    spherical_cap_to_circle,
    spherical_disk_area,
    spherical_distance,
    spherical_distances,
    spherical_polygon_area,
)
from circleLib.typing import ComplexArray, FloatArray

logger = logging.getLogger(__name__)

Metric = Literal["spherical", "chart"]
PointSet = Union[PeripheralContinuum, Sequence[complex], np.ndarray]

_REFINE_GRID = 9
_MAX_SAMPLES = 1 << 16


def _check_metric(metric: str) -> None:
    if metric not in ("spherical", "chart"):
        raise ValueError(f"unknown metric {metric!r}")


def _pairwise(z: ComplexArray, w: ComplexArray, metric: Metric) -> FloatArray:
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    if metric == "chart":
        return np.abs(z[:, None] - w[None, :])
    return spherical_distances(z[:, None], w[None, :])


def _is_round(K: PeripheralContinuum) -> bool:
    return K.kind in ("point", "disk")


def _cap(K: PeripheralContinuum) -> Tuple[complex, float]:
    assert K.center is not None
    return K.center, 0.0 if K.radius is None else K.radius


def _boundary_curve(K: PeripheralContinuum) -> Callable[[np.ndarray], np.ndarray]:
    """Periodic arc-length parametrization ``t -> z`` of the boundary, t in [0, 1)."""
    if K.kind == "point":
        z0 = K.planar_circle[0]
        return lambda t: np.full(np.shape(t), z0, dtype=np.complex128)
    if K.kind == "disk":
        center, radius = K.planar_circle
        return lambda t: center + radius * np.exp(2j * np.pi * np.asarray(t))
    verts = np.asarray(K.vertices, dtype=np.complex128)
    edges = np.roll(verts, -1) - verts
    cumulative = np.concatenate([[0.0], np.cumsum(np.abs(edges))])
    cumulative /= cumulative[-1]

    def curve(t: np.ndarray) -> np.ndarray:
        t = np.mod(np.asarray(t, dtype=np.float64), 1.0)
        k = np.clip(np.searchsorted(cumulative, t, side="right") - 1, 0, len(verts) - 1)
        frac = (t - cumulative[k]) / (cumulative[k + 1] - cumulative[k])
        return verts[k] + edges[k] * frac

    return curve


def _extreme_pair(
    A: PeripheralContinuum,
    B: PeripheralContinuum,
    maximize: bool,
    metric: Metric = "spherical",
    samples: int = 256,
    candidates: int = 6,
) -> float:
    """Extreme distance between boundary points of A and B, refined locally
    around the best sampled pairs."""
    curve_a, curve_b = _boundary_curve(A), _boundary_curve(B)
    t = np.arange(samples) / samples
    distances = _pairwise(curve_a(t), curve_b(t), metric)
    sign = -1.0 if maximize else 1.0
    flat = np.argsort(sign * distances, axis=None, kind="stable")[:candidates]
    best = float(distances.flat[flat[0]])
    offsets = np.linspace(-1.0, 1.0, _REFINE_GRID)
    for index in flat:
        i, j = np.unravel_index(index, distances.shape)
        s, u = float(t[i]), float(t[j])
        value = float(distances[i, j])
        width = 1.0 / samples
        for _ in range(200):
            ss = s + width * offsets
            uu = u + width * offsets
            local = _pairwise(curve_a(ss), curve_b(uu), metric)
            k = int(np.argmin(sign * local))
            ki, kj = divmod(k, _REFINE_GRID)
            s, u = float(ss[ki]), float(uu[kj])
            value = float(local[ki, kj])
            if ki == _REFINE_GRID // 2 and kj == _REFINE_GRID // 2:
                width /= 4
            if width < 1e-14:
                break
        best = max(best, value) if maximize else min(best, value)
    return best


def _as_points(E: PointSet) -> np.ndarray:
    return np.atleast_1d(np.asarray(E, dtype=np.complex128))


def diameter(K: PointSet, metric: Metric = "spherical") -> float:
    """Diameter of a continuum or of a finite point set.

    Disks have spherical diameter ``min(2 r, pi)``; polygon diameters are
    found on the boundary by sampling plus local refinement.
    """
    _check_metric(metric)
    if not isinstance(K, PeripheralContinuum):
        z = _as_points(K)
        if len(z) < 2:
            return 0.0
        return float(np.max(_pairwise(z, z, metric)))
    if K.kind == "point":
        return 0.0
    if K.kind == "disk":
        if metric == "chart":
            return 2 * K.planar_circle[1]
        return min(2 * _cap(K)[1], math.pi)
    if metric == "chart":
        return K.chart_diameter()
    return _extreme_pair(K, K, maximize=True)


def l2_diameters(P: Packing | Sequence[PeripheralContinuum], metric: Metric = "spherical") -> float:
    """The ℓ² norm of the diameter sequence, ``sqrt(sum diam^2)``."""
    return math.sqrt(math.fsum(diameter(K, metric) ** 2 for K in P))


def continua_intersect(A: PeripheralContinuum, B: PeripheralContinuum) -> bool:
    """Whether the closed continua meet, by exact chart predicates."""
    if A.kind == "polygon" and B.kind == "polygon":
        return bool(A.to_shapely().intersects(B.to_shapely()))
    if A.kind == "polygon" or B.kind == "polygon":
        poly, other = (A, B) if A.kind == "polygon" else (B, A)
        center, radius = other.planar_circle
        gap = poly.to_shapely().distance(shapely.Point(center.real, center.imag))
        return bool(gap <= radius)
    (c1, r1), (c2, r2) = A.planar_circle, B.planar_circle
    return abs(c1 - c2) <= r1 + r2


def distance_to(
    z: ComplexArray, K: PeripheralContinuum, metric: Metric = "spherical"
) -> FloatArray:
    """Distance from each chart point to the closed continuum K."""
    z = _as_points(z)
    if K.kind != "polygon":
        if metric == "chart":
            center, radius = K.planar_circle
            return np.maximum(np.abs(z - center) - radius, 0.0)
        center, radius = _cap(K)
        return np.maximum(spherical_distances(z, center) - radius, 0.0)
    geometry = K.to_shapely()
    if metric == "chart":
        return shapely.distance(geometry, shapely.points(z.real, z.imag))
    inside = K.contains(z)
    curve = _boundary_curve(K)
    samples = 1024
    t = np.arange(samples) / samples
    result = np.min(_pairwise(z, curve(t), "spherical"), axis=1)
    while samples < _MAX_SAMPLES:
        samples *= 2
        t = np.arange(samples) / samples
        refined = np.min(_pairwise(z, curve(t), "spherical"), axis=1)
        change = float(np.max(np.abs(refined - result))) if len(z) else 0.0
        result = refined
        if change < HAUSDORFF_REFINEMENT:
            break
    return np.where(inside, 0.0, result)


def set_distance(A: PointSet, B: PointSet, metric: Metric = "spherical") -> float:
    """Distance between two closed sets, 0 when they meet."""
    _check_metric(metric)
    a_is_set = isinstance(A, PeripheralContinuum)
    b_is_set = isinstance(B, PeripheralContinuum)
    if not a_is_set and not b_is_set:
        return float(np.min(_pairwise(_as_points(A), _as_points(B), metric)))
    if not a_is_set or not b_is_set:
        points, K = (A, B) if b_is_set else (B, A)
        assert isinstance(K, PeripheralContinuum)
        return float(np.min(distance_to(_as_points(points), K, metric)))
    assert isinstance(A, PeripheralContinuum) and isinstance(B, PeripheralContinuum)
    if continua_intersect(A, B):
        return 0.0
    if _is_round(A) and _is_round(B):
        if metric == "chart":
            (c1, r1), (c2, r2) = A.planar_circle, B.planar_circle
            return max(0.0, abs(c1 - c2) - r1 - r2)
        (c1, r1), (c2, r2) = _cap(A), _cap(B)
        return max(0.0, spherical_distance(c1, c2) - r1 - r2)
    if metric == "chart":
        if A.kind == "polygon" and B.kind == "polygon":
            return float(A.to_shapely().distance(B.to_shapely()))
        poly, other = (A, B) if A.kind == "polygon" else (B, A)
        center, radius = other.planar_circle
        gap = poly.to_shapely().distance(shapely.Point(center.real, center.imag))
        return max(0.0, float(gap) - radius)
    if A.kind == "point" or B.kind == "point":
        point, K = (A, B) if A.kind == "point" else (B, A)
        return float(distance_to(point.planar_circle[0], K)[0])
    return _extreme_pair(A, B, maximize=False)


def _region_samples(K: PeripheralContinuum, n: int) -> np.ndarray:
    """Boundary samples plus a coarse interior grid."""
    boundary = K.boundary_samples(n)
    if K.kind == "point":
        return boundary[:1]
    bounds = K.getBounds()
    assert bounds is not None
    side = max(4, int(math.sqrt(n)))
    x = np.linspace(bounds.xMin, bounds.xMax, side)
    y = np.linspace(bounds.yMin, bounds.yMax, side)
    grid = (x[None, :] + 1j * y[:, None]).ravel()
    return np.concatenate([boundary, grid[K.contains(grid)]])


def _one_sided(A: PeripheralContinuum, B: PeripheralContinuum, metric: Metric) -> float:
    n = 256
    value = float(np.max(distance_to(_region_samples(A, n), B, metric)))
    while n < 8192:
        n *= 2
        refined = float(np.max(distance_to(_region_samples(A, n), B, metric)))
        if abs(refined - value) < HAUSDORFF_REFINEMENT:
            return refined
        value = refined
    return value


def hausdorff_distance(
    A: PeripheralContinuum, B: PeripheralContinuum, metric: Metric = "spherical"
) -> float:
    """Hausdorff distance of two continua.

    Disks and points use the closed form ``d(c1, c2) + |r1 - r2|``. Otherwise
    the one-sided suprema are taken over boundary samples plus a coarse
    interior grid, refined until they move less than ``HAUSDORFF_REFINEMENT``;
    this is exact up to refinement for convex shapes.
    """
    _check_metric(metric)
    if _is_round(A) and _is_round(B):
        if metric == "chart":
            (c1, r1), (c2, r2) = A.planar_circle, B.planar_circle
            return abs(c1 - c2) + abs(r1 - r2)
        (c1, r1), (c2, r2) = _cap(A), _cap(B)
        return min(spherical_distance(c1, c2) + abs(r1 - r2), math.pi)
    return max(_one_sided(A, B, metric), _one_sided(B, A, metric))


def relative_distance(E: PointSet, F: PointSet, metric: Metric = "chart") -> float:
    """``dist(E, F) / min(diam E, diam F)``.

    Raises:
        GeometryError: if either set is degenerate.
    """
    smaller = min(diameter(E, metric), diameter(F, metric))
    if smaller <= 0:
        raise GeometryError("relative distance needs non-degenerate sets")
    return set_distance(E, F, metric) / smaller


def count_large_intersecting(
    P: Packing | Sequence[PeripheralContinuum],
    E: PointSet,
    a: float,
    metric: Metric = "spherical",
) -> int:
    """``#{i : p_i meets E and diam p_i >= a diam E}``.

    ``E`` is a continuum or a finite sample of a compact set.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    threshold = a * diameter(E, metric)
    count = 0
    for K in P:
        if diameter(K, metric) < threshold:
            continue
        if isinstance(E, PeripheralContinuum):
            meets = continua_intersect(K, E)
        else:
            meets = bool(np.any(K.contains(_as_points(E))))
        if meets:
            count += 1
    return count


def _geometry_area(geometry: shapely.Geometry, tolerance: float) -> float:
    """Spherical area of a shapely (multi)polygon lying in the chart."""
    total = 0.0
    for part in getattr(geometry, "geoms", [geometry]):
        if not isinstance(part, shapely.Polygon) or part.is_empty or part.area == 0:
            continue
        ring = np.asarray(part.exterior.coords)[:-1]
        total += spherical_polygon_area(ring[:, 0] + 1j * ring[:, 1], tolerance)
        for hole in part.interiors:
            ring = np.asarray(hole.coords)[:-1]
            total -= spherical_polygon_area(ring[:, 0] + 1j * ring[:, 1], tolerance)
    return total


def _cap_polygon(center: complex, radius: float, segments: int = 128) -> shapely.Polygon | None:
    try:
        c, rho = spherical_cap_to_circle(center, radius)
    except GeometryError:
        return None
    t = 2 * np.pi * np.arange(segments) / segments
    ring = c + rho * np.exp(1j * t)
    return shapely.Polygon(np.column_stack([ring.real, ring.imag]))


def ball_intersection_area(
    K: PeripheralContinuum, center: complex, radius: float, tolerance: float = 1e-6
) -> float | None:
    """``Σ(B(center, radius) ∩ K)``, or None if the ball contains infinity."""
    ball = _cap_polygon(center, radius)
    if ball is None:
        return None
    intersection = K.to_shapely(segments=128).intersection(ball)
    if intersection.is_empty:
        return 0.0
    return _geometry_area(intersection, tolerance)


def _fatness_centers(
    K: PeripheralContinuum, count: int, rng: np.random.Generator
) -> np.ndarray:
    boundary_count = max(1, (2 * count) // 3)
    boundary = K.boundary_samples(boundary_count)
    bounds = K.getBounds()
    assert bounds is not None
    interior: List[complex] = []
    attempts = 0
    while len(interior) < count - boundary_count and attempts < 100 * count:
        attempts += 1
        z = complex(
            rng.uniform(bounds.xMin, bounds.xMax), rng.uniform(bounds.yMin, bounds.yMax)
        )
        if K.contains(z, strict=True):
            interior.append(z)
    return np.concatenate([boundary, np.asarray(interior, dtype=np.complex128)])


def estimate_fatness(
    K: PeripheralContinuum,
    centers: int = FATNESS_CENTERS,
    radii: int = FATNESS_RADII,
    seed: int = 0,
    tolerance: float = 1e-6,
) -> FatnessEstimate:
    """Samples ``Σ(B(x, r) ∩ K) / r^2`` over centers ``x`` in ``K`` and a dyadic
    grid of radii below the farthest-point distance from ``x``.

    Two thirds of the centers sit on the boundary, where the worst balls are;
    the rest are drawn inside with a generator seeded by ``seed``.
    """
    if K.is_degenerate:
        return FatnessEstimate(math.inf)
    rng = np.random.default_rng(seed)
    points = _fatness_centers(K, centers, rng)
    boundary = K.boundary_samples(512)
    best = math.inf
    witness: Tuple[complex | None, float | None] = (None, None)
    evaluated = skipped = 0
    for x in points:
        farthest = float(np.max(spherical_distances(x, boundary)))
        for k in range(radii):
            r = 0.99 * farthest / 2**k
            area = ball_intersection_area(K, complex(x), r, tolerance)
            if area is None:
                skipped += 1
                continue
            evaluated += 1
            ratio = area / r**2
            if ratio < best:
                best, witness = ratio, (complex(x), r)
    logger.debug(
        "fatness of continuum %d: %g over %d balls (%d skipped)",
        K.id,
        best,
        evaluated,
        skipped,
    )
    return FatnessEstimate(
        best, len(points), radii, evaluated, skipped, witness[0], witness[1]
    )


def is_fat(K: PeripheralContinuum, tau: float, **kwargs: int) -> bool:
    """Whether the sampled fatness of K reaches ``tau``."""
    return estimate_fatness(K, **kwargs).tau_hat >= tau


# property checks


def hausdorff_limit_fatness_check(
    limit: PeripheralContinuum,
    terms: Sequence[PeripheralContinuum] | None = None,
    tolerance: float = 0.05,
    centers: int = 24,
    radii: int = 8,
    seed: int = 0,
) -> CheckResult:
    """Fatness survives Hausdorff limits: the limit's estimate must reach the
    smallest estimate among the terms, less ``tolerance`` (relative).

    Without ``terms``, congruent translates of ``limit`` approaching it are
    used.
    """
    if terms is None:
        step = 0.25 * diameter(limit, "chart")
        terms = [
            limit.transformed(MobiusTransform.from_coefficients(1, step / 2**j, 0, 1))
            for j in range(1, 6)
        ]
    taus = [estimate_fatness(K, centers, radii, seed).tau_hat for K in terms]
    distances = [hausdorff_distance(K, limit) for K in terms]
    tau_limit = estimate_fatness(limit, centers, radii, seed).tau_hat
    floor = min(taus) * (1 - tolerance)
    values = {"tau_limit": tau_limit, "tau_terms_min": min(taus)}
    values.update({f"hausdorff_{k}": d for k, d in enumerate(distances)})
    return CheckResult("hausdorff_limit_fatness", tau_limit >= floor, values)


def random_mobius(
    rng: np.random.Generator, max_norm: float = 2.0, min_det: float = 0.05
) -> MobiusTransform:
    """A random Möbius map whose coefficient vector has norm at most ``max_norm``."""
    while True:
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        raw *= rng.uniform(0.5, max_norm) / np.linalg.norm(raw)
        a, b, c, d = (complex(v) for v in raw)
        if abs(a * d - b * c) >= min_det:
            return MobiusTransform.from_coefficients(a, b, c, d)


def mobius_fatness_check(
    K: PeripheralContinuum,
    maps: int = 100,
    seed: int = 0,
    baseline: float = MOBIUS_FATNESS_BASELINE,
    centers: int = 12,
    radii: int = 6,
) -> CheckResult:
    """Möbius images of a fat continuum stay fat.

    Maps whose pole comes within a chart diameter of ``K`` are redrawn, so the
    images stay bounded.
    """
    rng = np.random.default_rng(seed)
    size = diameter(K, "chart")
    taus: List[float] = []
    rejected = 0
    while len(taus) < maps:
        T = random_mobius(rng)
        pole = T.pole()
        if not pole.infinite and float(distance_to(pole.value, K, "chart")[0]) < size:
            rejected += 1
            continue
        image = K.transformed(T)
        taus.append(estimate_fatness(image, centers, radii, seed).tau_hat)
    worst = min(taus)
    return CheckResult(
        "mobius_fatness",
        worst > 0 and worst >= baseline,
        {"tau_min": worst, "tau_mean": float(np.mean(taus)), "rejected": rejected},
    )


def radial_hit_check(
    K: PeripheralContinuum,
    samples: int = 40,
    radii: int = 6,
    constant: float = RADIAL_HIT_CONSTANT,
    seed: int = 0,
) -> CheckResult:
    """``H¹{s in (0, r): K meets S(x, s)}^2 <= C Σ(K ∩ B(x, r))`` on sampled
    centers around K.

    For connected K the hit set is the interval between the nearest and the
    farthest distance from ``x`` to K.
    """
    rng = np.random.default_rng(seed)
    bounds = K.getBounds()
    if bounds is None:
        raise GeometryError("radial hit check needs a non-degenerate continuum")
    size = diameter(K, "chart")
    box = bounds.expanded(size)
    boundary = K.boundary_samples(512)
    xs = box.xMin + rng.uniform(size=samples) * box.width
    ys = box.yMin + rng.uniform(size=samples) * box.height
    worst = 0.0
    measured = 0
    for x in xs + 1j * ys:
        near = float(distance_to(x, K)[0])
        far = float(np.max(spherical_distances(x, boundary)))
        for k in range(radii):
            r = far * 1.5 / 2**k
            hits = max(0.0, min(r, far) - near)
            if hits == 0:
                continue
            area = ball_intersection_area(K, complex(x), r)
            if area is None or area <= 0:
                continue
            measured += 1
            worst = max(worst, hits**2 / area)
    return CheckResult(
        "radial_hit", worst <= constant, {"max_ratio": worst, "balls": measured}
    )


def coarea_check(
    instances: int = 20,
    seed: int = 0,
    cells: int = 8,
    levels: int = 400,
    circle_samples: int = 512,
) -> CheckResult:
    """Sampled co-area inequality for ``psi = σ(., x0)``, which is 1-Lipschitz:
    ``∫_0^π ∫_{psi = t} rho dH¹ dt <= (4 / pi) ∫ rho dΣ``.

    ``rho`` is piecewise constant on a random grid over ``[-1, 1]^2`` and zero
    elsewhere.
    """
    rng = np.random.default_rng(seed)
    h = 2.0 / cells
    corners = [(-1 + i * h) + 1j * (-1 + j * h) for j in range(cells) for i in range(cells)]
    cell_areas = np.array(
        [spherical_polygon_area([z, z + h, z + h + 1j * h, z + 1j * h], 1e-8) for z in corners]
    )
    ts = (np.arange(levels) + 0.5) * math.pi / levels
    theta = 2 * np.pi * np.arange(circle_samples) / circle_samples
    worst = 0.0
    ratios = []
    for _ in range(instances):
        rho = rng.exponential(size=cells * cells)
        x0 = complex(*rng.uniform(-1.5, 1.5, size=2))
        rotation_back = MobiusTransform.rotation_to_origin(x0).inverse()
        lhs = 0.0
        for t in ts:
            z = rotation_back.apply(math.tan(t / 2) * np.exp(1j * theta))
            finite = np.isfinite(z)
            ix = np.floor((z.real + 1) / h)
            iy = np.floor((z.imag + 1) / h)
            inside = finite & (ix >= 0) & (ix < cells) & (iy >= 0) & (iy < cells)
            index = (iy * cells + ix)[inside].astype(int)
            lhs += 2 * math.pi * math.sin(t) / circle_samples * float(np.sum(rho[index]))
        lhs *= math.pi / levels
        mass = float(np.dot(rho, cell_areas))
        ratios.append(lhs / mass)
        worst = max(worst, lhs / ((4 / math.pi) * mass))
    return CheckResult(
        "coarea",
        worst <= 1.0,
        {
            "max_lhs_over_rhs": worst,
            "mean_lhs_over_mass": float(np.mean(ratios)),
            "instances": instances,
        },
    )


def maximal_inequality_check(
    instances: int = 10,
    seed: int = 0,
    cores: int = 30,
    area_ratio: float = 4.0,
    p: float = 2.0,
    grid: int = 600,
    constant: float = MAXIMAL_INEQUALITY_CONSTANT,
) -> CheckResult:
    """Compares ``||sum b_i 1_{B_i}||_p`` with ``||sum b_i 1_{D_i}||_p`` for
    disjoint round cores ``D_i`` inside concentric balls ``B_i`` of
    ``area_ratio`` times their area.

    Both norms are integrated on the same chart grid with the spherical area
    element.
    """
    rng = np.random.default_rng(seed)
    x = np.linspace(-1.5, 1.5, grid)
    step = x[1] - x[0]
    z = x[None, :] + 1j * x[:, None]
    weights = area_element(z) * step * step
    scale = math.sqrt(area_ratio)
    worst = 0.0
    worst_area_ratio = 0.0
    for _ in range(instances):
        placed: List[Tuple[complex, float]] = []
        for _ in range(cores * 50):
            if len(placed) == cores:
                break
            c = complex(*rng.uniform(-1, 1, size=2))
            s = float(rng.uniform(0.03, 0.1))
            if all(abs(c - c2) > s + s2 for c2, s2 in placed):
                placed.append((c, s))
        b = rng.exponential(size=len(placed))
        balls = np.zeros(z.shape)
        cores_sum = np.zeros(z.shape)
        for (c, s), bi in zip(placed, b):
            distance = np.abs(z - c)
            balls += bi * (distance <= scale * s)
            cores_sum += bi * (distance <= s)
            inner = PeripheralContinuum.from_planar_circle(0, c, s)
            outer = PeripheralContinuum.from_planar_circle(0, c, scale * s)
            assert inner.radius is not None and outer.radius is not None
            worst_area_ratio = max(
                worst_area_ratio,
                spherical_disk_area(outer.radius) / spherical_disk_area(inner.radius),
            )
        lhs = float(np.sum(weights * balls**p)) ** (1 / p)
        rhs = float(np.sum(weights * cores_sum**p)) ** (1 / p)
        worst = max(worst, lhs / rhs)
    return CheckResult(
        "maximal_inequality",
        math.isfinite(worst) and worst <= constant,
        {"max_ratio": worst, "max_area_ratio": worst_area_ratio},
    )
