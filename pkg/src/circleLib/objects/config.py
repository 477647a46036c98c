from __future__ import annotations

import hashlib
from typing import List, Optional

from attrs import define, evolve, field

from circleLib.constants import (
    BOUNDARY_SAMPLES,
    GRID_RESOLUTION,
    KOEBE_TOLERANCE,
    LAURENT_DEGREE,
    MAX_SWEEPS,
    MODULUS_TOLERANCE,
    QUADRATURE_TOLERANCE,
    SPHERE_RADIUS,
)
from circleLib.serde import serde


def library_version() -> str:
    from circleLib import __version__

    return __version__


@serde
@define
class RunConfig:
    """Everything a command needs to reproduce its artifact.

    Two runs with equal configs (output directory aside) produce
    byte-identical artifacts.
    """

    command: str
    """The CLI subcommand, e.g. ``"uniformize"``."""

    input_path: Optional[str] = None
    """Artifact or packing the command read, as given on the command line."""

    sphere_radius: float = field(default=SPHERE_RADIUS, metadata={"omit_if_default": False})
    """Radius of the model sphere, always 1."""

    seed: int = field(default=0, metadata={"omit_if_default": False})
    """Seed of every random choice the command makes."""

    tolerance: float = KOEBE_TOLERANCE
    """Circularity residual at which Koebe iteration stops."""

    max_sweeps: int = MAX_SWEEPS
    degree: int = LAURENT_DEGREE
    """Laurent degree of exterior maps."""

    samples: int = BOUNDARY_SAMPLES
    """Boundary samples per component."""

    modulus_tolerance: float = MODULUS_TOLERANCE
    resolution: int = GRID_RESOLUTION
    """Modulus grid cells along the shorter window side."""

    quadrature_tolerance: float = QUADRATURE_TOLERANCE
    n: Optional[int] = None
    """Number of continua to uniformize."""

    ns: List[int] = field(factory=list)
    """Values of n of a sequence run."""

    normalization: List[str] = field(factory=list)
    """The points sent to infinity, 0 and 1, as given (empty for the default)."""

    parameters: List[str] = field(factory=list)
    """Free ``key=value`` parameters of the command (generator kind, level, ...)."""

    output_dir: Optional[str] = None
    """Where artifacts were written; not part of the hash."""

    def config_hash(self) -> str:
        """SHA-256 of the sorted-key JSON form, ignoring the output directory."""
        from circleLib.serde.json import dumps

        data = dumps(evolve(self, output_dir=None), sort_keys=True)
        return hashlib.sha256(data).hexdigest()

    def provenance(self) -> Provenance:
        return Provenance(self.config_hash(), self.seed, library_version())


@serde
@define
class Provenance:
    """Identifies the run that produced an artifact."""

    config_hash: str
    seed: int = field(metadata={"omit_if_default": False})
    version: str
    """circleLib version that wrote the artifact."""
