from __future__ import annotations

import os
from typing import TYPE_CHECKING, Any, Protocol, TypeVar, Union

from fontTools.pens.basePen import AbstractPen

if TYPE_CHECKING:
    import numpy as np
    import numpy.typing as npt

T = TypeVar("T")
"""Generic variable for mypy for trivial generic function signatures."""

PathLike = Union[str, bytes, "os.PathLike[str]", "os.PathLike[bytes]"]
"""Represents a path in various possible forms."""

ComplexArray = "npt.NDArray[np.complex128]"
"""Points of a plane chart as a numpy array of complex numbers."""

FloatArray = "npt.NDArray[np.float64]"
"""Real valued samples as a numpy array."""


class Drawable(Protocol):
    """Stand-in for an object that can draw its outline with a given pen.

    Continua draw themselves in the plane chart, see :mod:`fontTools.pens.basePen`
    for an introduction to pens.
    """

    def draw(self, pen: AbstractPen) -> None: ...


class PlaneMap(Protocol):
    """Anything that maps chart points and knows its complex derivative."""

    def __call__(self, z: Any) -> Any: ...

    def derivative(self, z: Any) -> Any: ...
