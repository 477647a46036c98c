from __future__ import annotations

from typing import Dict, List, Optional, Tuple

import numpy as np
import shapely
from attrs import define, field

from circleLib.constants import GRID_RESOLUTION
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.packing import Packing
from circleLib.serde import serde
from circleLib.typing import ComplexArray

MODES = ("plain", "transboundary")
STENCILS = ("wide", "rook")


@serde
@define(frozen=True)
class Region:
    """A closed chart region: a continuum, or the closure of its complement."""

    continuum: PeripheralContinuum
    complement: bool = False

    def contains(self, z: ComplexArray) -> np.ndarray:
        if self.complement:
            return ~self.continuum.contains(z, strict=True)
        return self.continuum.contains(z)

    def to_shapely(self, box: Tuple[float, float, float, float]) -> shapely.Geometry:
        """The region clipped to ``box`` (xMin, yMin, xMax, yMax)."""
        geometry = self.continuum.to_shapely(segments=1024)
        if self.complement:
            return shapely.box(*box).difference(geometry)
        return geometry


@serde
@define(frozen=True)
class ModulusSetup:
    """Everything needed to build a discrete modulus problem.

    Curves run inside the chart rectangle ``window`` (and inside ``domain``
    when given) from ``source`` to ``target``. Continua of ``packing`` listed
    in ``forbidden`` must be avoided; the others are crossed at the price of
    their weight in transboundary mode and are plain grid in plain mode.
    """

    window: Tuple[float, float, float, float]
    """``(xMin, yMin, xMax, yMax)`` of the chart grid."""

    source: Region
    target: Region
    packing: Packing = field(factory=Packing)
    domain: Optional[Region] = None
    forbidden: Tuple[int, ...] = ()
    mode: str = field(default="transboundary", metadata={"omit_if_default": False})
    resolution: int = field(default=GRID_RESOLUTION, metadata={"omit_if_default": False})
    """Cells along the shorter side of the window."""

    stencil: str = "wide"
    """``"wide"`` (48 neighbours) or ``"rook"`` (4 neighbours)."""

    def __attrs_post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown modulus mode {self.mode!r}")
        if self.stencil not in STENCILS:
            raise ValueError(f"unknown stencil {self.stencil!r}")
        if self.resolution < 1:
            raise ValueError("resolution must be positive")


# cell states
FREE, SOURCE, TARGET, CONTINUUM, FORBIDDEN, OUTSIDE = range(6)


@define(eq=False)
class ModulusProblem:
    """A discretized transboundary modulus instance.

    Nodes of the graph are the grid cells followed by one super-node per
    continuum crossed in transboundary mode. Unknowns are the densities of
    free cells (and of continuum cells in plain mode) followed by the weights
    of the super-nodes. Row ``e`` of ``lengths`` gives the length of edge
    ``e`` as a linear form in the unknowns.
    """

    setup: ModulusSetup
    cell_size: float
    shape: Tuple[int, int]
    """``(rows, columns)`` of the grid."""

    centers: np.ndarray
    state: np.ndarray
    owner: np.ndarray
    """Continuum id of each cell, 0 if none."""

    variable: np.ndarray
    """Unknown index of each cell, -1 for cells without one."""

    super_nodes: Dict[int, int]
    """Continuum id to unknown index of its super-node."""

    mass_weights: np.ndarray
    """Coefficient of each unknown squared in the mass."""

    tails: np.ndarray
    heads: np.ndarray
    lengths: object
    """Sparse ``(edges, unknowns)`` matrix."""

    geometric: np.ndarray
    """Chart length of each edge, breaks ties between equal paths."""

    sources: np.ndarray
    targets: np.ndarray

    @property
    def cell_count(self) -> int:
        return int(self.state.size)

    @property
    def node_count(self) -> int:
        return self.cell_count + len(self.super_nodes)

    @property
    def unknowns(self) -> int:
        return int(self.mass_weights.size)

    def super_node(self, id: int) -> int:
        """Graph node of the super-node of continuum ``id``."""
        return self.cell_count + list(self.super_nodes).index(id)

    def grid_hash(self) -> str:
        from circleLib.modulus import grid_hash

        return grid_hash(self)


@serde
@define
class ModulusResult:
    """Outcome of the cutting-plane modulus solver.

    The value is the mass of a density admissible for every curve of the
    family, so it bounds the discrete modulus from above; ``lower`` is the
    optimum over the active paths only.
    """

    value: float = field(metadata={"omit_if_default": False})
    lower: float = 0.0
    upper: float = 0.0
    gap: float = 0.0
    """``(upper - lower) / upper``."""

    iterations: int = 0
    paths: int = 0
    """Number of active paths."""

    mode: str = "transboundary"
    resolution: int = 0
    grid_hash: str = ""
    density: List[float] = field(factory=list)
    """Density per grid cell (0 where there is none), elided for big grids."""

    continuum_weights: Dict[int, float] = field(factory=dict)
    active_paths: List[List[int]] = field(factory=list)
    """Node sequences of the active paths, elided with the density."""

    message: str = ""
    """Why the value is a sentinel, e.g. disconnected terminals."""

    kind: str = field(default="modulus", metadata={"omit_if_default": False})

    @property
    def is_infinite(self) -> bool:
        return bool(np.isinf(self.value))


@serde
@define
class ProbeRow:
    probe: int
    """Index of the probe continuum in the probe list."""

    n: int
    excluded: List[int] = field(factory=list)
    """Ids of the continua curves must avoid."""

    value: float = 0.0


@serde
@define
class ProbeTable:
    """Transboundary moduli of a fixed continuum against probe continua."""

    rows: List[ProbeRow] = field(factory=list)
    minimum: float = 0.0
    witness: Optional[ProbeRow] = None
    """The row attaining the minimum."""

    def minimum_by_n(self) -> Dict[int, float]:
        result: Dict[int, float] = {}
        for row in self.rows:
            result[row.n] = min(result.get(row.n, np.inf), row.value)
        return result
