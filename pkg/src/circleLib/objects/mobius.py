from __future__ import annotations

import cmath
import math
from typing import Any, Tuple

import numpy as np
from attrs import define

from circleLib.constants import CHORDAL_TOLERANCE
from circleLib.errors import GeometryError
from circleLib.objects.spherePoint import SpherePoint
from circleLib.serde import serde
from circleLib.typing import ComplexArray, FloatArray

_DET_TOLERANCE = 1e-9


@serde
@define(frozen=True)
class MobiusTransform:
    """A Möbius transformation ``z -> (a z + b) / (c z + d)``.

    Coefficients are kept normalized to ``a d - b c = 1``; use
    :meth:`from_coefficients` to build one from arbitrary coefficients.
    """

    a: complex = 1 + 0j
    b: complex = 0j
    c: complex = 0j
    d: complex = 1 + 0j

    def __attrs_post_init__(self) -> None:
        det = self.a * self.d - self.b * self.c
        if not abs(det - 1) <= _DET_TOLERANCE:
            raise GeometryError(
                f"Möbius coefficients must have determinant 1, got {det!r}"
            )

    @classmethod
    def identity(cls) -> MobiusTransform:
        return cls()

    @classmethod
    def from_coefficients(
        cls, a: complex, b: complex, c: complex, d: complex
    ) -> MobiusTransform:
        """Normalizes ``(a, b, c, d)`` by a square root of the determinant.

        Raises:
            GeometryError: if the coefficients are degenerate (``ad - bc = 0``).
        """
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0 or abs(det) <= 1e-14 * scale * scale:
            raise GeometryError("degenerate Möbius coefficients (ad - bc = 0)")
        root = cmath.sqrt(det)
        return cls(a / root, b / root, c / root, d / root)

    @classmethod
    def from_points(
        cls,
        z1: SpherePoint | complex,
        z2: SpherePoint | complex,
        z3: SpherePoint | complex,
    ) -> MobiusTransform:
        """Returns the unique transformation sending ``z1, z2, z3`` to ``0, 1, ∞``.

        Raises:
            GeometryError: if two of the points coincide.
        """
        p1, p2, p3 = (SpherePoint.coerce(z) for z in (z1, z2, z3))
        from circleLib.sphere import chordal_distance

        for u, v in ((p1, p2), (p1, p3), (p2, p3)):
            if chordal_distance(u, v) <= CHORDAL_TOLERANCE:
                raise GeometryError(f"normalization points coincide: {u} and {v}")
        if p1.infinite:
            w2, w3 = p2.value, p3.value
            return cls.from_coefficients(0, w2 - w3, 1, -w3)
        if p2.infinite:
            w1, w3 = p1.value, p3.value
            return cls.from_coefficients(1, -w1, 1, -w3)
        if p3.infinite:
            w1, w2 = p1.value, p2.value
            return cls.from_coefficients(1, -w1, 0, w2 - w1)
        w1, w2, w3 = p1.value, p2.value, p3.value
        return cls.from_coefficients(
            w2 - w3, -w1 * (w2 - w3), w2 - w1, -w3 * (w2 - w1)
        )

    @classmethod
    def rotation_to_origin(cls, p: SpherePoint | complex) -> MobiusTransform:
        """Returns a rigid rotation of the sphere taking ``p`` to ``0``."""
        p = SpherePoint.coerce(p)
        if p.infinite:
            return cls(0j, -1 + 0j, 1 + 0j, 0j)
        w = p.value
        return cls.from_coefficients(1, -w, w.conjugate(), 1)

    @property
    def coefficients(self) -> Tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, z: SpherePoint | complex) -> SpherePoint:
        z = SpherePoint.coerce(z)
        a, b, c, d = self.coefficients
        if z.infinite:
            if c == 0:
                return SpherePoint.infinity()
            return SpherePoint(a / c)
        den = c * z.value + d
        if den == 0:
            return SpherePoint.infinity()
        return SpherePoint((a * z.value + b) / den)

    def apply(self, z: ComplexArray) -> ComplexArray:
        """Vectorized evaluation on chart points, infinity given as any
        infinite complex; the pole maps to ``complex(inf, inf)``."""
        z = np.asarray(z, dtype=np.complex128)
        infinite = np.isinf(z)
        finite = np.where(infinite, 0, z)
        num = self.a * finite + self.b
        den = self.c * finite + self.d
        with np.errstate(divide="ignore", invalid="ignore"):
            result = np.where(den == 0, complex(np.inf, np.inf), num / den)
        at_infinity = complex(np.inf, np.inf) if self.c == 0 else self.a / self.c
        return np.where(infinite, at_infinity, result)

    def compose(self, other: MobiusTransform) -> MobiusTransform:
        """Returns ``self ∘ other``."""
        a1, b1, c1, d1 = self.coefficients
        a2, b2, c2, d2 = other.coefficients
        return MobiusTransform.from_coefficients(
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        )

    def inverse(self) -> MobiusTransform:
        a, b, c, d = self.coefficients
        # determinant is already 1
        return MobiusTransform(d, -b, -c, a)

    def pole(self) -> SpherePoint:
        """Returns the point sent to infinity."""
        return self.inverse()(SpherePoint.infinity())

    def derivative(self, z: complex | ComplexArray) -> Any:
        """Complex derivative ``1 / (c z + d)^2`` at finite points."""
        return 1 / (self.c * np.asarray(z) + self.d) ** 2

    def spherical_derivative(self, z: SpherePoint | complex) -> float:
        """Returns the spherical metric derivative ``|DT|`` at ``z``.

        For a normalized transformation this is
        ``(1 + |z|^2) / (|a z + b|^2 + |c z + d|^2)``, and
        ``1 / (|a|^2 + |c|^2)`` at infinity.
        """
        z = SpherePoint.coerce(z)
        a, b, c, d = self.coefficients
        if z.infinite:
            return 1 / (abs(a) ** 2 + abs(c) ** 2)
        w = z.value
        return (1 + abs(w) ** 2) / (abs(a * w + b) ** 2 + abs(c * w + d) ** 2)

    def spherical_derivatives(self, z: ComplexArray) -> FloatArray:
        """Vectorized :meth:`spherical_derivative`, infinity included."""
        z = np.asarray(z, dtype=np.complex128)
        infinite = np.isinf(z)
        finite = np.where(infinite, 0, z)
        result = (1 + np.abs(finite) ** 2) / (
            np.abs(self.a * finite + self.b) ** 2 + np.abs(self.c * finite + self.d) ** 2
        )
        return np.where(infinite, 1 / (abs(self.a) ** 2 + abs(self.c) ** 2), result)

    def is_rotation(self, tolerance: float = 1e-9) -> bool:
        """Whether this is an isometry of the sphere (``d = ā``, ``c = -b̄``)."""
        a, b, c, d = self.coefficients
        # the normalization is only defined up to sign
        for sign in (1, -1):
            if (
                abs(sign * d - a.conjugate()) <= tolerance
                and abs(sign * c + b.conjugate()) <= tolerance
            ):
                return True
        return False

    def image_of_circle(self, center: complex, radius: float) -> Tuple[complex, float]:
        """Returns the chart circle bounding the image of the closed disk
        ``|z - center| <= radius``.

        Raises:
            GeometryError: if the pole lies in the closed disk, so the image
                would not be a bounded disk.
        """
        pole = self.pole()
        if not pole.infinite and abs(pole.value - center) <= radius * (1 + 1e-12):
            raise GeometryError("Möbius pole lies inside the disk")
        if radius == 0:
            return self(center).value, 0.0
        images = [
            self(center + radius * cmath.exp(1j * t)).value
            for t in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)
        ]
        return circumcircle(*images)


def circumcircle(z1: complex, z2: complex, z3: complex) -> Tuple[complex, float]:
    """Returns center and radius of the circle through three chart points.

    Raises:
        GeometryError: if the points are collinear.
    """
    w2, w3 = z2 - z1, z3 - z1
    den = 2 * (w2.real * w3.imag - w2.imag * w3.real)
    if abs(den) <= 1e-300:
        raise GeometryError("points are collinear")
    n2, n3 = abs(w2) ** 2, abs(w3) ** 2
    offset = complex(
        (w3.imag * n2 - w2.imag * n3) / den, (w2.real * n3 - w3.real * n2) / den
    )
    return z1 + offset, abs(offset)
