"""Spherical primitives on the unit sphere identified with the extended plane.

Points of the extended plane are :class:`~circleLib.objects.SpherePoint`
instances; vectorized helpers take numpy arrays of finite chart points.
Distances are great-circle angles, areas are in steradians, so the whole
sphere has measure ``4 * pi``.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Callable, Sequence, Tuple

import numpy as np
import shapely

from circleLib.constants import CHORDAL_TOLERANCE
from circleLib.errors import GeometryError
from circleLib.objects.mobius import MobiusTransform
from circleLib.objects.spherePoint import SpherePoint
from circleLib.typing import ComplexArray, FloatArray

logger = logging.getLogger(__name__)

__all__ = [
    "stereographic",
    "inverse_stereographic",
    "chordal_distance",
    "spherical_distance",
    "spherical_distances",
    "conformal_factor",
    "area_element",
    "spherical_disk_area",
    "spherical_polygon_area",
    "spherical_area",
    "mobius_normalize",
    "spherical_derivative",
    "spherical_cap_to_circle",
    "circle_to_spherical_cap",
    "fibonacci_nodes",
]


def stereographic(z: ComplexArray) -> FloatArray:
    """Maps finite chart points to unit 3-vectors, shape ``z.shape + (3,)``."""
    z = np.asarray(z, dtype=np.complex128)
    n = np.abs(z) ** 2
    return np.stack(
        [2 * z.real / (1 + n), 2 * z.imag / (1 + n), (n - 1) / (n + 1)], axis=-1
    )


def inverse_stereographic(v: FloatArray) -> ComplexArray:
    """Maps unit 3-vectors back to the chart; the north pole gives
    ``complex(inf, inf)``."""
    v = np.asarray(v, dtype=np.float64)
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    x, y, zz = v[..., 0], v[..., 1], v[..., 2]
    rho2 = x * x + y * y
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(zz > 0, (1 + zz) / rho2, 1 / (1 - zz))
    result = (x + 1j * y) * scale
    return np.where((rho2 == 0) & (zz > 0), complex(np.inf, np.inf), result)


def chordal_distance(a: SpherePoint | complex, b: SpherePoint | complex) -> float:
    """Euclidean distance of the sphere images, in ``[0, 2]``."""
    a, b = SpherePoint.coerce(a), SpherePoint.coerce(b)
    if a.infinite and b.infinite:
        return 0.0
    if a.infinite or b.infinite:
        w = b.value if a.infinite else a.value
        return 2 / math.sqrt(1 + abs(w) ** 2)
    z, w = a.value, b.value
    return 2 * abs(z - w) / math.sqrt((1 + abs(z) ** 2) * (1 + abs(w) ** 2))


def spherical_distance(a: SpherePoint | complex, b: SpherePoint | complex) -> float:
    """Great-circle distance σ between two points of the extended plane.

    >>> round(spherical_distance(0, SpherePoint.infinity()), 12) == round(math.pi, 12)
    True
    >>> round(spherical_distance(0, 1) / math.pi, 12)
    0.5
    """
    a, b = SpherePoint.coerce(a), SpherePoint.coerce(b)
    if a.infinite and b.infinite:
        return 0.0
    if a.infinite or b.infinite:
        w = b.value if a.infinite else a.value
        return 2 * math.atan2(1.0, abs(w))
    z, w = a.value, b.value
    # atan2 form stays accurate for nearby and for nearly antipodal points
    return 2 * math.atan2(abs(z - w), abs(1 + z.conjugate() * w))


def spherical_distances(z: ComplexArray, w: ComplexArray) -> FloatArray:
    """Vectorized σ between finite chart points (numpy broadcasting rules)."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    return 2 * np.arctan2(np.abs(z - w), np.abs(1 + np.conj(z) * w))


def conformal_factor(z: ComplexArray) -> FloatArray:
    """Spherical length element ``2 / (1 + |z|^2)`` of the chart."""
    return 2 / (1 + np.abs(np.asarray(z)) ** 2)


def area_element(z: ComplexArray) -> FloatArray:
    """Spherical area element ``4 / (1 + |z|^2)^2`` of the chart."""
    return conformal_factor(z) ** 2


def spherical_disk_area(radius: float) -> float:
    """Area of a spherical cap of angular ``radius`` in ``[0, pi]``."""
    return 2 * math.pi * (1 - math.cos(radius))


def _signed_fan_excess(reference: FloatArray, ring: FloatArray) -> float:
    # signed excess of the triangles (reference, v_i, v_i+1)
    b = ring
    c = np.roll(ring, -1, axis=0)
    a = np.broadcast_to(reference, b.shape)
    triple = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = (
        1
        + np.einsum("ij,ij->i", a, b)
        + np.einsum("ij,ij->i", b, c)
        + np.einsum("ij,ij->i", c, a)
    )
    return float(np.sum(2 * np.arctan2(triple, den)))


def _subdivide(vertices: ComplexArray, pieces: int) -> ComplexArray:
    nxt = np.roll(vertices, -1)
    t = np.arange(pieces) / pieces
    return (vertices[:, None] + (nxt - vertices)[:, None] * t[None, :]).ravel()


def spherical_polygon_area(
    vertices: Sequence[complex] | ComplexArray,
    tolerance: float = 1e-10,
    max_pieces: int = 1 << 14,
) -> float:
    """Spherical area enclosed by a simple chart polygon.

    Edges are straight in the chart, so they are subdivided until the
    excess-sum changes by less than ``tolerance`` (relative).

    Raises:
        GeometryError: if the polygon is not simple.
    """
    verts = np.asarray(vertices, dtype=np.complex128)
    if verts.ndim != 1 or len(verts) < 3:
        raise GeometryError("a polygon needs at least three vertices")
    if not np.all(np.isfinite(verts)):
        raise GeometryError("polygon vertices must be finite chart points")
    polygon = shapely.Polygon(np.column_stack([verts.real, verts.imag]))
    if not polygon.exterior.is_simple or polygon.area == 0:
        raise GeometryError("polygon is not simple")
    ref = polygon.representative_point()
    reference = stereographic(complex(ref.x, ref.y))

    pieces = 4
    area = abs(_signed_fan_excess(reference, stereographic(_subdivide(verts, pieces))))
    while pieces < max_pieces:
        pieces *= 2
        refined = abs(
            _signed_fan_excess(reference, stereographic(_subdivide(verts, pieces)))
        )
        if abs(refined - area) <= tolerance * max(refined, 1e-300):
            return refined
        area = refined
    logger.debug("polygon area subdivision stopped at %d pieces per edge", pieces)
    return area


def spherical_area(region: Any, tolerance: float = 1e-10) -> float:
    """Spherical measure of a disk, polygon or point continuum, or of a raw
    list of polygon vertices.

    >>> round(spherical_area(SpherePoint.infinity()), 12)
    0.0
    """
    from circleLib.objects.continuum import PeripheralContinuum

    if isinstance(region, SpherePoint):
        return 0.0
    if isinstance(region, PeripheralContinuum):
        if region.kind == "point":
            return 0.0
        if region.kind == "disk":
            assert region.radius is not None
            return spherical_disk_area(region.radius)
        return spherical_polygon_area(region.vertices, tolerance)
    return spherical_polygon_area(region, tolerance)


def mobius_normalize(
    zeta_inf: SpherePoint | complex,
    zeta_0: SpherePoint | complex,
    zeta_1: SpherePoint | complex,
) -> MobiusTransform:
    """Returns the Möbius map sending ``(zeta_inf, zeta_0, zeta_1)`` to
    ``(inf, 0, 1)``.

    Raises:
        GeometryError: if two of the points coincide.
    """
    return MobiusTransform.from_points(zeta_0, zeta_1, zeta_inf)


def spherical_derivative(
    f: Callable[[complex], complex],
    z: SpherePoint | complex,
    derivative: Callable[[complex], complex] | None = None,
    step: float = 1e-6,
) -> float:
    """Spherical derivative ``(1 + |z|^2) / (1 + |f(z)|^2) * |f'(z)|``.

    ``f`` is any holomorphic map given as a callable on finite points. Its
    complex derivative is taken from ``derivative`` when given, from a
    ``derivative`` attribute of ``f`` otherwise, and estimated by a central
    difference as a last resort.

    Raises:
        GeometryError: if ``z`` or ``f(z)`` is not finite; rotate the chart
            first in that case.
    """
    z = SpherePoint.coerce(z)
    if isinstance(f, MobiusTransform):
        return f.spherical_derivative(z)
    if z.infinite:
        raise GeometryError("spherical_derivative needs a finite point")
    w = complex(f(z.value))
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise GeometryError("f(z) is not finite, rotate the chart first")
    if derivative is None:
        derivative = getattr(f, "derivative", None)
    if derivative is not None:
        fprime = complex(derivative(z.value))
    else:
        h = step * max(1.0, abs(z.value))
        fprime = (complex(f(z.value + h)) - complex(f(z.value - h))) / (2 * h)
    return (1 + abs(z.value) ** 2) / (1 + abs(w) ** 2) * abs(fprime)


def spherical_cap_to_circle(
    center: SpherePoint | complex, radius: float
) -> Tuple[complex, float]:
    """Returns the chart circle ``(C, rho)`` bounding the cap ``B(center, radius)``.

    The cap and its image are symmetric about the meridian through the
    center, so the chart circle is found from the two meridian points at
    distance ``radius`` from the center.

    Raises:
        GeometryError: if the cap contains infinity, so its chart image is
            not a bounded disk.
    """
    center = SpherePoint.coerce(center)
    if not 0 <= radius < math.pi:
        raise GeometryError(f"cap radius must lie in [0, pi), got {radius!r}")
    if center.infinite or spherical_distance(center, SpherePoint.infinity()) <= radius:
        raise GeometryError("cap contains infinity")
    c = center.value
    u = c / abs(c) if abs(c) > 0 else 1 + 0j
    phi = 2 * math.atan(abs(c))
    s1 = math.tan((phi - radius) / 2)
    s2 = math.tan((phi + radius) / 2)
    return u * (s1 + s2) / 2, (s2 - s1) / 2


def circle_to_spherical_cap(center: complex, radius: float) -> Tuple[SpherePoint, float]:
    """Inverse of :func:`spherical_cap_to_circle` for a closed chart disk."""
    if radius < 0:
        raise GeometryError(f"radius must be non-negative, got {radius!r}")
    u = center / abs(center) if abs(center) > 0 else 1 + 0j
    phi1 = 2 * math.atan(abs(center) - radius)
    phi2 = 2 * math.atan(abs(center) + radius)
    cap_center = u * math.tan((phi1 + phi2) / 4)
    return SpherePoint(cap_center), (phi2 - phi1) / 2


def round_trip_error(z: SpherePoint | complex) -> float:
    """Chordal error of the sphere round trip, at most ``CHORDAL_TOLERANCE`` for
    well-formed points."""
    z = SpherePoint.coerce(z)
    back = SpherePoint.from_vector(z.to_vector())
    error = chordal_distance(z, back)
    if error > CHORDAL_TOLERANCE:
        logger.warning("stereographic round trip error %g at %s", error, z)
    return error


def fibonacci_nodes(count: int) -> ComplexArray:
    """Chart images of ``count`` nearly uniform points on the sphere.

    Each node carries the area ``4 * pi / count``; none is the north pole.
    """
    k = np.arange(count) + 0.5
    height = 1 - 2 * k / count
    angle = np.pi * (3 - np.sqrt(5)) * k
    planar = np.sqrt(1 - height**2)
    vectors = np.column_stack([planar * np.cos(angle), planar * np.sin(angle), height])
    return inverse_stereographic(vectors)
