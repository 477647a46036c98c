from __future__ import annotations

from typing import TYPE_CHECKING, Any, List

from fontTools.pens.pointPen import AbstractPointPen

from circleLib.errors import GeometryError
from circleLib.objects.continuum import PeripheralContinuum

if TYPE_CHECKING:
    from fontTools.misc.transform import Transform

    from circleLib.objects.packing import Packing


class ContinuumPointPen(AbstractPointPen):  # type: ignore
    """A point pen appending one polygon continuum to a packing per closed
    contour.

    Only straight segments are accepted; ids continue the packing's numbering.
    See :mod:`fontTools.pens.basePen` and :mod:`fontTools.pens.pointPen` for an
    introduction to pens.
    """

    __slots__ = "_packing", "_points"

    def __init__(self, packing: Packing) -> None:
        self._packing: Packing = packing
        self._points: List[complex] | None = None

    def beginPath(self, identifier: str | None = None, **kwargs: Any) -> None:
        self._points = []

    def endPath(self) -> None:
        if self._points is None:
            raise ValueError("Call beginPath first.")
        next_id = max((c.id for c in self._packing.continua), default=0) + 1
        self._packing.continua.append(PeripheralContinuum.polygon(next_id, self._points))
        self._points = None

    def addPoint(
        self,
        pt: tuple[float, float],
        segmentType: str | None = None,
        smooth: bool = False,
        name: str | None = None,
        identifier: str | None = None,
        **kwargs: Any,
    ) -> None:
        if self._points is None:
            raise ValueError("Call beginPath first.")
        if segmentType == "move":
            raise GeometryError("open contours do not bound a continuum")
        if segmentType not in ("line",):
            raise GeometryError(f"unsupported segment type {segmentType!r}")
        x, y = pt
        self._points.append(complex(x, y))

    def addComponent(
        self,
        baseGlyph: str,
        transformation: Transform,
        identifier: str | None = None,
        **kwargs: Any,
    ) -> None:
        raise GeometryError("packings have no components")
