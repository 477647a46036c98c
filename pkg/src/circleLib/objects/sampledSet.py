from __future__ import annotations

from typing import Iterable, List, Tuple

import numpy as np
from attrs import define, field

from circleLib.objects.continuum import PeripheralContinuum
from circleLib.serde import serde


def _complex_tuple(value: Iterable[complex]) -> Tuple[complex, ...]:
    return tuple(complex(z) for z in value)


def _int_tuple(value: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(set(int(i) for i in value)))


@serde
@define(frozen=True)
class SampledSet:
    """A set given by a finite chart sample plus whole continua.

    In the domain of a map, ``touched`` lists the continua the set meets;
    those are collapsed to single points of the quotient sphere, so the set
    stands for ``points ∪ touched continua``. The pushforward of such a set
    carries the corresponding output circles in ``circles``.
    """

    points: Tuple[complex, ...] = field(factory=tuple, converter=_complex_tuple)
    touched: Tuple[int, ...] = field(factory=tuple, converter=_int_tuple)
    """Ids of the continua the set meets."""

    circles: List[PeripheralContinuum] = field(factory=list)

    @classmethod
    def from_points(
        cls, points: Iterable[complex], continua: Iterable[PeripheralContinuum]
    ) -> SampledSet:
        """Samples a set, marking every continuum that contains a sample point."""
        z = np.asarray(list(points), dtype=np.complex128)
        touched = [K.id for K in continua if len(z) and np.any(K.contains(z))]
        return cls(z.tolist(), touched)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.complex128)
