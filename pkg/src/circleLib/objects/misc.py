from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Tuple

import numpy as np
from fontTools.misc.arrayTools import unionRect
from fontTools.pens.boundsPen import BoundsPen

from circleLib.typing import ComplexArray, Drawable


class BoundingBox(NamedTuple):
    """Represents a chart bounding box as a tuple of (xMin, yMin, xMax, yMax)."""

    xMin: float
    yMin: float
    xMax: float
    yMax: float

    @property
    def width(self) -> float:
        return self.xMax - self.xMin

    @property
    def height(self) -> float:
        return self.yMax - self.yMin

    def expanded(self, margin: float) -> BoundingBox:
        """Returns the box grown by ``margin`` on every side."""
        return BoundingBox(
            self.xMin - margin, self.yMin - margin, self.xMax + margin, self.yMax + margin
        )


def getBounds(drawable: Drawable) -> BoundingBox | None:
    """Returns the planar bounds of whatever ``drawable`` draws, or None if it
    draws nothing (e.g. a point continuum)."""
    pen = BoundsPen(None)
    drawable.draw(pen)
    return None if pen.bounds is None else BoundingBox(*pen.bounds)


def unionBounds(
    bounds1: BoundingBox | None, bounds2: BoundingBox | None
) -> BoundingBox | None:
    if bounds1 is None:
        return bounds2
    if bounds2 is None:
        return bounds1
    return BoundingBox(*unionRect(bounds1, bounds2))


def pointBounds(points: Iterable[complex]) -> BoundingBox | None:
    """Returns the bounds of a collection of chart points."""
    result: BoundingBox | None = None
    for z in points:
        box = BoundingBox(z.real, z.imag, z.real, z.imag)
        result = unionBounds(result, box)
    return result


def fit_circle(points: ComplexArray) -> Tuple[complex, float, float]:
    """Algebraic least-squares circle through chart points.

    Returns:
        ``(center, radius, residual)`` where the circularity residual is
        ``max |dist(p, center) - radius| / radius`` over the points.
    """
    z = np.asarray(points, dtype=np.complex128).ravel()
    if len(z) < 3:
        raise ValueError("fitting a circle needs at least three points")
    A = np.column_stack([z.real, z.imag, np.ones(len(z))])
    b = -(np.abs(z) ** 2)
    (D, E, F), *_ = np.linalg.lstsq(A, b, rcond=None)
    center = complex(-D / 2, -E / 2)
    radius = float(np.sqrt(max(abs(center) ** 2 - F, 0.0)))
    if radius == 0:
        return center, 0.0, math.inf
    residual = float(np.max(np.abs(np.abs(z - center) - radius))) / radius
    return center, radius, residual


def clustered_distances(reach: float, count: int, clustering: float) -> np.ndarray:
    """Increasing distances ``reach exp(-clustering (sqrt(count) - sqrt(j)))``
    for ``j = 1 .. count``, tapered toward 0."""
    j = np.arange(1, count + 1)
    return reach * np.exp(-clustering * (math.sqrt(count) - np.sqrt(j)))
