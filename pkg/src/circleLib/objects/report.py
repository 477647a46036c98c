from __future__ import annotations

from typing import Dict, List, Optional

from attrs import define, field

from circleLib.objects.continuum import PeripheralContinuum
from circleLib.serde import serde

SUBSEQUENCE_CAVEAT = (
    "Only finitely many n were computed: the trends reported here cannot tell "
    "convergence of the whole sequence from convergence along a subsequence."
)


@serde
@define
class SequenceEntry:
    """Diagnostics of the uniformization of the first ``n`` continua."""

    n: int
    converged: bool = field(default=False, metadata={"omit_if_default": False})
    error: str = ""
    """Why the run failed, empty on success."""

    circles: List[PeripheralContinuum] = field(factory=list)
    """Output circles, in input order."""

    sweeps: int = 0
    residual: float = 0.0
    min_distance: float = 0.0
    """Smallest spherical distance between two output circles."""

    fatness: Dict[int, float] = field(factory=dict)
    """Estimated fatness of each non-degenerate output circle, by id."""

    l2_diameter: float = 0.0
    """ℓ² norm of the spherical diameters of the output circles."""

    derivative_l2: float = 0.0
    """``∫ |Dg|^2 dΣ`` of the inverse map over the circle domain."""

    degenerate_inputs: List[int] = field(factory=list)
    degenerate_outputs: List[int] = field(factory=list)


@serde
@define
class HausdorffRow:
    """Hausdorff distances between the circles of one input continuum
    across the computed ``n``."""

    id: int
    ns: List[int] = field(factory=list)
    """The values ``n >= id`` whose run converged."""

    distances: List[List[float]] = field(factory=list)
    """``distances[a][b]`` is the Hausdorff distance between the output circles
    for ``ns[a]`` and ``ns[b]``."""

    deviation: List[float] = field(factory=list)
    """Largest Hausdorff distance from the circle at ``n`` to any later one,
    for each ``n`` but the last."""

    @property
    def is_nonincreasing(self) -> bool:
        return all(a >= b - 1e-12 for a, b in zip(self.deviation, self.deviation[1:]))


@serde
@define
class UpperGradientRecord:
    """One sampled curve of an upper gradient spot check."""

    curve: int
    lhs: float = 0.0
    """Spherical distance between the images of the endpoints."""

    rhs: float = 0.0
    """Integral of ``|Dg|`` along the curve plus the diameters of the
    continua whose circles the curve crosses."""

    passed: bool = field(default=False, metadata={"omit_if_default": False})
    crossed: List[int] = field(factory=list)
    skipped: bool = False
    """Curves through a puncture are skipped."""

    n: Optional[int] = None


@serde
@define
class SequenceReport:
    """Diagnostics of a sequence of uniformizations, keyed by ``n``.

    Every quantity can be recomputed from the stored maps; ``config_hash``
    identifies the run that produced them.
    """

    ns: List[int] = field(factory=list)
    entries: List[SequenceEntry] = field(factory=list)
    hausdorff: List[HausdorffRow] = field(factory=list)
    diameters: Dict[int, Dict[int, float]] = field(factory=dict)
    """Spherical diameter of each output circle, by input id ``i`` and then by ``n``
    over the converged runs with ``n >= i``."""

    upper_gradient: List[UpperGradientRecord] = field(factory=list)
    config_hash: str = ""
    seed: int = field(default=0, metadata={"omit_if_default": False})
    caveat: str = field(default=SUBSEQUENCE_CAVEAT, metadata={"omit_if_default": False})

    def entry(self, n: int) -> SequenceEntry:
        for entry in self.entries:
            if entry.n == n:
                return entry
        raise KeyError(n)

    @property
    def converged(self) -> List[SequenceEntry]:
        return [entry for entry in self.entries if entry.converged]
