"""Test families of packings.

Every generator returns a :class:`~circleLib.objects.Packing` whose continua
are numbered by decreasing spherical diameter (ties broken by chart position),
so the diameter tail is nonincreasing from the first continuum on.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
from attrs import evolve

from circleLib.constants import PLACEMENT_RETRIES
from circleLib.errors import ConvergenceError, GeometryError
from circleLib.geometry import diameter
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.packing import Packing

logger = logging.getLogger(__name__)

__all__ = [
    "carpet",
    "random_l2",
    "round_packing",
    "points",
    "thin_rectangles",
    "regular_polygon",
    "generate",
]

WINDOW = 1.0
"""Random families are placed in the chart square ``[-WINDOW, WINDOW]^2``."""


def regular_polygon(
    id: int, center: complex, circumradius: float, sides: int, rotation: float = 0.0
) -> PeripheralContinuum:
    if sides < 3:
        raise GeometryError("a polygon needs at least three sides")
    t = rotation + 2 * np.pi * np.arange(sides) / sides
    return PeripheralContinuum.polygon(id, (center + circumradius * np.exp(1j * t)).tolist())


def _renumbered(continua: Sequence[PeripheralContinuum], label: str) -> Packing:
    def key(K: PeripheralContinuum) -> Tuple[float, float, float]:
        z = K.anchor()
        return (-round(diameter(K), 12), round(z.imag, 12), round(z.real, 12))

    ordered = sorted(continua, key=key)
    return Packing([evolve(K, id=i) for i, K in enumerate(ordered, start=1)], label)


def carpet(level: int) -> Packing:
    """The first ``level`` generations of the standard Sierpiński carpet.

    The carpet is the unit square centered at the origin; generation ``k``
    removes ``8**(k - 1)`` squares of side ``3**-k``, so ``carpet(3)`` has
    1 + 8 + 64 = 73 continua. Squares are drawn into the packing with its pen.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    packing = Packing()
    pen = packing.getPen()
    cells: List[Tuple[int, int]] = [(0, 0)]
    for k in range(1, level + 1):
        side = 3.0**-k
        for ix, iy in cells:
            x0 = -0.5 + (3 * ix + 1) * side
            y0 = -0.5 + (3 * iy + 1) * side
            pen.moveTo((x0, y0))
            pen.lineTo((x0 + side, y0))
            pen.lineTo((x0 + side, y0 + side))
            pen.lineTo((x0, y0 + side))
            pen.closePath()
        cells = [
            (3 * ix + dx, 3 * iy + dy)
            for ix, iy in cells
            for dy in range(3)
            for dx in range(3)
            if (dx, dy) != (1, 1)
        ]
    return _renumbered(packing.continua, f"carpet-{level}")


def _place(
    rng: np.random.Generator,
    sizes: Sequence[float],
    build: Callable[[int, complex, float, np.random.Generator], PeripheralContinuum],
    gap: float,
) -> List[PeripheralContinuum]:
    """Rejection placement of one continuum per size, each kept inside its
    chart circle of radius ``size / 2`` and at least ``gap * size`` away from
    the circles placed before."""
    placed: List[Tuple[complex, float]] = []
    continua: List[PeripheralContinuum] = []
    for i, size in enumerate(sizes, start=1):
        radius = size / 2
        for attempt in range(PLACEMENT_RETRIES):
            center = complex(*rng.uniform(-WINDOW + radius, WINDOW - radius, size=2))
            if all(abs(center - c) > radius + r + gap * size for c, r in placed):
                break
        else:
            raise ConvergenceError(
                f"could not place continuum {i} of size {size:g} "
                f"after {PLACEMENT_RETRIES} attempts; the family is overcrowded"
            )
        if attempt:
            logger.debug("placed continuum %d after %d retries", i, attempt)
        placed.append((center, radius))
        continua.append(build(i, center, radius, rng))
    return continua


def _mixed_shape(
    i: int, center: complex, radius: float, rng: np.random.Generator
) -> PeripheralContinuum:
    if i % 2:
        return PeripheralContinuum.from_planar_circle(i, center, radius)
    sides = int(rng.integers(3, 7))
    return regular_polygon(i, center, radius, sides, float(rng.uniform(0, 2 * math.pi)))


def _disk(i: int, center: complex, radius: float, rng: np.random.Generator) -> PeripheralContinuum:
    return PeripheralContinuum.from_planar_circle(i, center, radius)


def random_l2(
    seed: int, exponent: float = 0.75, count: int = 200, scale: float = 0.25, gap: float = 0.1
) -> Packing:
    """Disks and regular polygons with chart diameters ``scale * i**-exponent``.

    Diameters are square summable for ``exponent > 1/2``. Odd continua are
    disks, even ones random regular polygons.

    Raises:
        ConvergenceError: if placement fails for overcrowded parameters.
    """
    if exponent <= 0.5:
        raise GeometryError("exponent must exceed 1/2 for square summable diameters")
    rng = np.random.default_rng(seed)
    sizes = [scale * i**-exponent for i in range(1, count + 1)]
    continua = _place(rng, sizes, _mixed_shape, gap)
    return _renumbered(continua, f"random_l2-{seed}")


def round_packing(
    seed: int, count: int = 20, exponent: float = 1.0, scale: float = 0.3, gap: float = 0.1
) -> Packing:
    """Disks only: a circle domain, fixed by uniformization up to Möbius maps."""
    rng = np.random.default_rng(seed)
    sizes = [scale * i**-exponent for i in range(1, count + 1)]
    return _renumbered(_place(rng, sizes, _disk, gap), f"round-{seed}")


def points(seed: int, count: int = 10, separation: float = 0.05) -> Packing:
    """A degenerate packing of ``count`` separated points."""
    rng = np.random.default_rng(seed)
    continua = _place(
        rng,
        [separation] * count,
        lambda i, center, radius, rng: PeripheralContinuum.point(i, center),
        0.0,
    )
    return _renumbered(continua, f"points-{seed}")


def thin_rectangles(aspects: Sequence[float] = (1, 10, 100), length: float = 0.5) -> Packing:
    """Rectangles of the given length-to-width ratios stacked along the
    imaginary axis, for the fatness suite."""
    continua = []
    y = -0.5
    for i, aspect in enumerate(aspects, start=1):
        if aspect < 1:
            raise GeometryError("aspect ratios must be at least 1")
        width = length / aspect
        x0 = -length / 2
        continua.append(
            PeripheralContinuum.polygon(
                i,
                [
                    complex(x0, y),
                    complex(x0 + length, y),
                    complex(x0 + length, y + width),
                    complex(x0, y + width),
                ],
            )
        )
        y += width + 0.1
    packing = _renumbered(continua, "thin")
    return packing


GENERATORS: Dict[str, Callable[..., Packing]] = {
    "carpet": carpet,
    "random_l2": random_l2,
    "round": round_packing,
    "points": points,
    "thin": thin_rectangles,
}


def generate(kind: str, **params: Any) -> Packing:
    """Builds a packing family by name, e.g. ``generate("carpet", level=3)``."""
    try:
        generator = GENERATORS[kind]
    except KeyError:
        raise GeometryError(
            f"unknown packing kind {kind!r}, expected one of {sorted(GENERATORS)}"
        ) from None
    packing = generator(**params)
    logger.info("generated %s with %d continua", packing.label, len(packing))
    return packing
