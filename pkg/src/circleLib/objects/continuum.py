from __future__ import annotations

import math
from typing import Iterable, List, Optional, Tuple

import numpy as np
import shapely
from attrs import define, field
from fontTools.pens.areaPen import AreaPen
from fontTools.pens.basePen import AbstractPen

from circleLib.constants import CORNER_CLUSTERING, CORNER_POLES
from circleLib.errors import GeometryError
from circleLib.objects.misc import BoundingBox, clustered_distances, getBounds
from circleLib.objects.mobius import MobiusTransform
from circleLib.serde import serde
from circleLib.typing import ComplexArray

KINDS = ("point", "disk", "polygon")

# cubic Bézier handle length approximating a quarter circle
_KAPPA = 4 * (math.sqrt(2) - 1) / 3

# vertices turning less than this are not treated as corners
_CORNER_TURN = 0.1


def _signed_area(vertices: Tuple[complex, ...]) -> float:
    pen = AreaPen()
    pen.moveTo((vertices[0].real, vertices[0].imag))
    for z in vertices[1:]:
        pen.lineTo((z.real, z.imag))
    pen.closePath()
    return float(pen.value)


def _oriented_vertices(value: Iterable[complex]) -> Tuple[complex, ...]:
    vertices = tuple(complex(z) for z in value)
    if len(vertices) >= 3 and _signed_area(vertices) < 0:
        vertices = (vertices[0],) + vertices[:0:-1]
    return vertices


@serde
@define(frozen=True)
class PeripheralContinuum:
    """One complementary component of a packing: a point, a disk or a simple
    polygon.

    Serialized flat as ``{id, kind, center?, radius?, vertices?}``. Disks are
    spherical caps: ``center`` is the chart coordinate of the cap center and
    ``radius`` the angular radius, in ``(0, pi)``. Every continuum is bounded in
    the chart, i.e. none contains infinity.

    Polygon vertices are stored counter-clockwise, whatever the input order.
    """

    id: int
    """Index ``i`` of the continuum in its packing, starting at 1."""

    kind: str = field(metadata={"omit_if_default": False})
    """One of ``"point"``, ``"disk"`` or ``"polygon"``."""

    center: Optional[complex] = None
    """The point itself, or the cap center of a disk."""

    radius: Optional[float] = None
    """Spherical radius of a disk."""

    vertices: Tuple[complex, ...] = field(default=(), converter=_oriented_vertices)
    """Chart vertices of a polygon, counter-clockwise, not repeating the first."""

    def __attrs_post_init__(self) -> None:
        if self.kind not in KINDS:
            raise GeometryError(f"unknown continuum kind {self.kind!r}")
        if self.kind == "polygon":
            if self.center is not None or self.radius is not None:
                raise GeometryError("polygon continua take vertices only")
            if len(self.vertices) < 3:
                raise GeometryError(f"continuum {self.id}: polygon needs 3 vertices")
            if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in self.vertices):
                raise GeometryError(f"continuum {self.id}: non-finite vertex")
            ring = shapely.LinearRing([(z.real, z.imag) for z in self.vertices])
            if not ring.is_simple or shapely.Polygon(ring).area == 0:
                raise GeometryError(f"continuum {self.id}: polygon is not simple")
            return
        if self.vertices:
            raise GeometryError(f"{self.kind} continua take no vertices")
        if self.center is None or not (
            math.isfinite(self.center.real) and math.isfinite(self.center.imag)
        ):
            raise GeometryError(f"continuum {self.id}: center must be a finite point")
        if self.kind == "point":
            if self.radius not in (None, 0.0):
                raise GeometryError("point continua have no radius")
            return
        if self.radius is None or not 0 < self.radius < math.pi:
            raise GeometryError(
                f"continuum {self.id}: disk radius must lie in (0, pi), got {self.radius!r}"
            )
        from circleLib.sphere import spherical_distance

        if spherical_distance(self.center, complex(math.inf)) <= self.radius:
            raise GeometryError(f"continuum {self.id}: disk contains infinity")

    # constructors

    @classmethod
    def point(cls, id: int, z: complex) -> PeripheralContinuum:
        return cls(id, "point", center=complex(z))

    @classmethod
    def disk(cls, id: int, center: complex, radius: float) -> PeripheralContinuum:
        """A spherical cap given by chart center and angular radius."""
        return cls(id, "disk", center=complex(center), radius=float(radius))

    @classmethod
    def polygon(cls, id: int, vertices: Iterable[complex]) -> PeripheralContinuum:
        return cls(id, "polygon", vertices=tuple(vertices))

    @classmethod
    def from_planar_circle(
        cls, id: int, center: complex, radius: float
    ) -> PeripheralContinuum:
        """A disk given by its chart circle; radius 0 gives a point."""
        if radius == 0:
            return cls.point(id, center)
        from circleLib.sphere import circle_to_spherical_cap

        cap_center, cap_radius = circle_to_spherical_cap(complex(center), float(radius))
        return cls.disk(id, cap_center.value, cap_radius)

    # queries

    @property
    def is_degenerate(self) -> bool:
        return self.kind == "point"

    @property
    def planar_circle(self) -> Tuple[complex, float]:
        """Chart center and radius of a disk (or of a point, with radius 0)."""
        if self.kind == "polygon":
            raise GeometryError("polygons have no planar circle")
        assert self.center is not None
        if self.kind == "point":
            return self.center, 0.0
        from circleLib.sphere import spherical_cap_to_circle

        assert self.radius is not None
        return spherical_cap_to_circle(self.center, self.radius)

    def anchor(self) -> complex:
        """A chart point inside the continuum."""
        if self.kind == "polygon":
            p = self.to_shapely().representative_point()
            return complex(p.x, p.y)
        return self.planar_circle[0]

    def to_shapely(self, segments: int = 256) -> shapely.Geometry:
        """Chart geometry; disks become regular ``segments``-gons."""
        if self.kind == "polygon":
            return shapely.Polygon([(z.real, z.imag) for z in self.vertices])
        center, radius = self.planar_circle
        if self.kind == "point":
            return shapely.Point(center.real, center.imag)
        t = 2 * np.pi * np.arange(segments) / segments
        ring = center + radius * np.exp(1j * t)
        return shapely.Polygon(np.column_stack([ring.real, ring.imag]))

    def _edge_parameters(self, n: int) -> List[np.ndarray]:
        # at least one sample (the start vertex) per edge, the rest by length
        lengths = np.abs(np.diff(np.asarray(self.vertices + self.vertices[:1])))
        extra = n - len(lengths)
        share = lengths / lengths.sum() * extra
        counts = np.floor(share).astype(int)
        remainder = extra - counts.sum()
        order = np.argsort(-(share - counts), kind="stable")
        counts[order[:remainder]] += 1
        counts += 1
        return [np.arange(c) / c for c in counts]

    def boundary_samples(self, n: int) -> ComplexArray:
        """Returns ``n`` counter-clockwise chart samples of the boundary.

        Polygon samples are spread by arc length, every vertex included.
        """
        if self.kind == "point":
            return np.full(n, self.planar_circle[0], dtype=np.complex128)
        if self.kind == "disk":
            center, radius = self.planar_circle
            t = 2 * np.pi * np.arange(n) / n
            return center + radius * np.exp(1j * t)
        verts = np.asarray(self.vertices, dtype=np.complex128)
        edges = np.roll(verts, -1) - verts
        lengths = np.abs(edges)
        if n < len(verts):
            # too few samples to keep every vertex, spread them by arc length
            cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
            s = cumulative[-1] * np.arange(n) / n
            k = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, len(verts) - 1)
            return verts[k] + edges[k] * ((s - cumulative[k]) / lengths[k])
        parameters = self._edge_parameters(n)
        return np.concatenate([verts[k] + edges[k] * t for k, t in enumerate(parameters)])

    def corners(self) -> List[int]:
        """Indices of the polygon vertices where the boundary turns."""
        if self.kind != "polygon":
            return []
        verts = np.asarray(self.vertices, dtype=np.complex128)
        before = verts - np.roll(verts, 1)
        after = np.roll(verts, -1) - verts
        turn = np.abs(np.angle(after / before))
        return [int(k) for k in np.flatnonzero(turn > _CORNER_TURN)]

    def graded_boundary_samples(
        self,
        n: int,
        poles: int = CORNER_POLES,
        clustering: float = CORNER_CLUSTERING,
    ) -> Tuple[ComplexArray, List[int]]:
        """Boundary samples for fitting exterior maps of curves with corners.

        Polygons get the ``n`` samples of :meth:`boundary_samples` plus
        ``3 * poles`` samples on each side of every corner, graded toward it
        the way :func:`~circleLib.objects.exteriorMap.corner_poles` grades
        poles. Returns the counter-clockwise samples and the indices of the
        corners among them; only polygons have corners.
        """
        corners = set(self.corners())
        if not corners or poles <= 0 or n < len(self.vertices):
            return self.boundary_samples(n), []
        verts = np.asarray(self.vertices, dtype=np.complex128)
        edges = np.roll(verts, -1) - verts
        # 3 samples per pole, reaching a bit closer than the closest pole
        graded = clustered_distances(0.5, 3 * poles, clustering / math.sqrt(3))
        parts, indices, offset = [], [], 0
        for k, t in enumerate(self._edge_parameters(n)):
            if k in corners:
                t = np.concatenate([t, graded])
                indices.append(offset)
            if (k + 1) % len(verts) in corners:
                t = np.concatenate([t, 1 - graded])
            t = np.unique(t)
            parts.append(verts[k] + edges[k] * t)
            offset += len(t)
        return np.concatenate(parts), indices

    def contains(self, z: ComplexArray | complex, strict: bool = False) -> np.ndarray:
        """Vectorized membership test for chart points.

        With ``strict`` the boundary is excluded (points are never strictly
        contained).
        """
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "polygon":
            geometry = self.to_shapely()
            if strict:
                return shapely.contains_xy(geometry, z.real, z.imag)
            return shapely.intersects_xy(geometry, z.real, z.imag)
        center, radius = self.planar_circle
        distance = np.abs(z - center)
        if self.kind == "point":
            return np.zeros(z.shape, bool) if strict else distance == 0
        if strict:
            return distance < radius * (1 - 1e-12)
        return distance <= radius * (1 + 1e-12)

    def chart_diameter(self) -> float:
        """Euclidean diameter in the chart."""
        if self.kind == "polygon":
            verts = np.asarray(self.vertices)
            return float(np.max(np.abs(verts[:, None] - verts[None, :])))
        return 2 * self.planar_circle[1]

    def getBounds(self) -> BoundingBox | None:
        """Chart bounds, None for points."""
        return getBounds(self)

    def draw(self, pen: AbstractPen) -> None:
        """Draws the chart outline; disks are four cubic arcs, points draw
        nothing."""
        if self.kind == "point":
            return
        if self.kind == "polygon":
            first, *rest = self.vertices
            pen.moveTo((first.real, first.imag))
            for z in rest:
                pen.lineTo((z.real, z.imag))
            pen.closePath()
            return
        center, radius = self.planar_circle
        points = [center + radius * 1j**k for k in range(5)]
        pen.moveTo((points[0].real, points[0].imag))
        for k in range(4):
            start, end = points[k], points[k + 1]
            c1 = start + _KAPPA * (end - center)
            c2 = end + _KAPPA * (start - center)
            pen.curveTo((c1.real, c1.imag), (c2.real, c2.imag), (end.real, end.imag))
        pen.closePath()

    def transformed(
        self, transform: MobiusTransform, edge_samples: int = 16
    ) -> PeripheralContinuum:
        """Möbius image: disks stay disks, points stay points, polygon edges are
        resampled into ``edge_samples`` chords each.

        Raises:
            GeometryError: if the image would contain infinity.
        """
        if self.kind == "point":
            image = transform(self.planar_circle[0])
            if image.infinite:
                raise GeometryError(f"continuum {self.id} is sent to infinity")
            return self.point(self.id, image.value)
        if self.kind == "disk":
            center, radius = transform.image_of_circle(*self.planar_circle)
            return self.from_planar_circle(self.id, center, radius)
        pole = transform.pole()
        if not pole.infinite and self.contains(pole.value):
            raise GeometryError(f"Möbius pole lies in continuum {self.id}")
        verts = np.asarray(self.vertices, dtype=np.complex128)
        edges = np.roll(verts, -1) - verts
        t = np.arange(edge_samples) / edge_samples
        ring = (verts[:, None] + edges[:, None] * t[None, :]).ravel()
        image = transform.apply(ring)
        return self.polygon(self.id, image.tolist())
