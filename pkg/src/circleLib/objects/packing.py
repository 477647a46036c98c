from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, overload

from attrs import define, evolve, field
from fontTools.pens.basePen import AbstractPen
from fontTools.pens.pointPen import AbstractPointPen, SegmentToPointPen

from circleLib.constants import SCHEMA_VERSION, SPHERE_RADIUS
from circleLib.errors import GeometryError
from circleLib.objects.config import Provenance
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.misc import BoundingBox, getBounds
from circleLib.pointPens.continuumPointPen import ContinuumPointPen
from circleLib.serde import serde


@serde
@define
class Packing(Sequence[PeripheralContinuum]):
    """An ordered family of pairwise disjoint peripheral continua.

    Behavior:
        Packing behaves like a read-only list of continua::

            first = packing[0]
            for continuum in packing:
                ...

        Continuum ``i`` of the family is ``packing.by_id(i)``. Polygons can be
        drawn into a packing with a pen::

            pen = packing.getPen()
            pen.moveTo((0, 0)); pen.lineTo((1, 0)); pen.lineTo((0, 1))
            pen.closePath()

        Disjointness is not checked on construction, call :meth:`check`.
    """

    continua: List[PeripheralContinuum] = field(factory=list)
    """The continua ``q_1, q_2, ...`` in order."""

    label: str = ""
    """Free-form name of the family, e.g. ``"carpet-3"``."""

    sphere_radius: float = field(default=SPHERE_RADIUS, metadata={"omit_if_default": False})
    schema: str = field(default=SCHEMA_VERSION, metadata={"omit_if_default": False})
    kind: str = field(default="packing", metadata={"omit_if_default": False})

    tail_index: int = 1
    """Diameters are nonincreasing from this (1-based) position on."""

    provenance: Optional[Provenance] = None
    """Set when the packing was written by the command line."""

    # collections.abc.Sequence interface

    @overload
    def __getitem__(self, index: int) -> PeripheralContinuum: ...

    @overload
    def __getitem__(self, index: slice) -> List[PeripheralContinuum]:  # noqa: F811
        ...

    def __getitem__(  # noqa: F811
        self, index: int | slice
    ) -> PeripheralContinuum | List[PeripheralContinuum]:
        return self.continua[index]

    def __iter__(self) -> Iterator[PeripheralContinuum]:
        return iter(self.continua)

    def __len__(self) -> int:
        return len(self.continua)

    def by_id(self, id: int) -> PeripheralContinuum:
        for continuum in self.continua:
            if continuum.id == id:
                return continuum
        raise KeyError(id)

    def first(self, n: int) -> Packing:
        """The sub-packing of the first ``n`` continua."""
        if not 0 <= n <= len(self.continua):
            raise GeometryError(f"n must lie in [0, {len(self.continua)}], got {n}")
        return evolve(self, continua=list(self.continua[:n]), provenance=None)

    def min_pairwise_distance(self) -> float:
        """Smallest spherical distance between two continua (inf below two)."""
        from circleLib.geometry import set_distance

        best = float("inf")
        for i, a in enumerate(self.continua):
            for b in self.continua[i + 1 :]:
                best = min(best, set_distance(a, b))
        return best

    def check(self) -> None:
        """Validates ids, pairwise disjointness and the diameter tail.

        Raises:
            GeometryError: describing the first violation found.
        """
        from circleLib.geometry import continua_intersect, diameter

        if self.sphere_radius != SPHERE_RADIUS:
            raise GeometryError(f"unsupported sphere radius {self.sphere_radius!r}")
        ids = [c.id for c in self.continua]
        if len(set(ids)) != len(ids):
            raise GeometryError("continuum ids are not unique")
        for i, a in enumerate(self.continua):
            for b in self.continua[i + 1 :]:
                if continua_intersect(a, b):
                    raise GeometryError(f"continua {a.id} and {b.id} intersect")
        tail = [diameter(c) for c in self.continua[max(self.tail_index - 1, 0) :]]
        for k in range(1, len(tail)):
            if tail[k] > tail[k - 1] * (1 + 1e-9):
                raise GeometryError(
                    f"diameters increase after tail index {self.tail_index}"
                )

    def getBounds(self) -> BoundingBox | None:
        """Chart bounds of the drawn continua (points included)."""
        from circleLib.objects.misc import pointBounds, unionBounds

        bounds = getBounds(self)
        points = [c.planar_circle[0] for c in self.continua if c.is_degenerate]
        return unionBounds(bounds, pointBounds(points))

    # pen methods

    def draw(self, pen: AbstractPen) -> None:
        """Draws every continuum into the given pen."""
        for continuum in self.continua:
            continuum.draw(pen)

    def getPen(self) -> AbstractPen:
        """Returns a pen for others to draw polygon continua into self."""
        return SegmentToPointPen(self.getPointPen())

    def getPointPen(self) -> AbstractPointPen:
        """Returns a point pen for others to draw polygon continua into self."""
        return ContinuumPointPen(self)
