from __future__ import annotations

import math
from typing import Optional

from attrs import define, field

from circleLib.serde import serde


@serde
@define(frozen=True)
class FatnessEstimate:
    """Sampled fatness of a continuum.

    ``tau_hat`` is the smallest ratio ``Σ(B(x, r) ∩ K) / r^2`` over the sampled
    centers ``x`` in ``K`` and radii ``r`` for which the ball does not contain
    ``K``. Being a minimum over samples, it bounds the true fatness from above.
    Points are fat for every ``tau`` and report ``inf``.
    """

    tau_hat: float = field(metadata={"omit_if_default": False})
    centers: int = 0
    """Number of sampled centers."""

    radii: int = 0
    """Radii tried per center."""

    evaluated: int = 0
    """Ball intersections actually measured."""

    skipped: int = 0
    """Balls left out because their cap contains infinity."""

    witness_center: Optional[complex] = None
    """Center of the worst ball."""

    witness_radius: Optional[float] = None
    """Spherical radius of the worst ball."""

    @property
    def is_degenerate(self) -> bool:
        return math.isinf(self.tau_hat)
