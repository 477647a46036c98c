from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any, Tuple, Type

from attrs import define

from circleLib.serde import serde

if TYPE_CHECKING:
    from cattrs import Converter


@serde
@define(frozen=True)
class SpherePoint:
    """A point of the extended complex plane.

    The plane is identified with the unit sphere by stereographic projection
    from the north pole, so ``0`` is the south pole and infinity the north
    pole.

    Serialized as ``"inf"`` or as a ``[re, im]`` pair of decimal strings.
    """

    value: complex = 0j
    """The finite chart coordinate. Ignored when :attr:`infinite` is set."""

    infinite: bool = False
    """Whether this is the point at infinity."""

    @classmethod
    def infinity(cls) -> SpherePoint:
        return cls(0j, True)

    @classmethod
    def coerce(cls, value: SpherePoint | complex | float | str) -> SpherePoint:
        """Accepts a SpherePoint, a number, or the string ``"inf"``."""
        if isinstance(value, SpherePoint):
            return value
        if isinstance(value, str):
            if value.strip().lower() in ("inf", "infinity", "∞"):
                return cls.infinity()
            return cls(complex(value.replace(" ", "")))
        z = complex(value)
        if math.isinf(z.real) or math.isinf(z.imag):
            return cls.infinity()
        return cls(z)

    def to_vector(self) -> Tuple[float, float, float]:
        """Returns the point on the unit sphere."""
        if self.infinite:
            return (0.0, 0.0, 1.0)
        z = self.value
        n = abs(z) ** 2
        return (2 * z.real / (1 + n), 2 * z.imag / (1 + n), (n - 1) / (n + 1))

    @classmethod
    def from_vector(cls, v: Tuple[float, float, float]) -> SpherePoint:
        """Projects a unit 3-vector back to the extended plane."""
        x, y, zz = v
        norm = math.sqrt(x * x + y * y + zz * zz)
        x, y, zz = x / norm, y / norm, zz / norm
        if zz >= 1.0 or math.hypot(x, y) == 0.0 and zz > 0:
            return cls.infinity()
        # 1 - zz loses precision near the north pole, use the conjugate form
        if zz > 0:
            scale = (1 + zz) / (x * x + y * y)
        else:
            scale = 1 / (1 - zz)
        return cls(complex(x * scale, y * scale))

    def __str__(self) -> str:
        return "inf" if self.infinite else str(self.value)

    def _unstructure(self, converter: Converter) -> Any:
        if self.infinite:
            return "inf"
        return converter.unstructure(self.value, complex)

    @staticmethod
    def _structure(
        data: Any, cls: Type[SpherePoint], converter: Converter
    ) -> SpherePoint:
        if data == "inf":
            return cls.infinity()
        return cls(converter.structure(data, complex))
