from __future__ import annotations

from typing import List, Optional

from attrs import define, field

from circleLib.constants import SCHEMA_VERSION, SPHERE_RADIUS
from circleLib.objects.check import CheckResult
from circleLib.objects.circleDomainMap import CircleDomainMap
from circleLib.objects.config import Provenance, RunConfig
from circleLib.objects.modulus import ModulusResult, ModulusSetup, ProbeTable
from circleLib.objects.packing import Packing
from circleLib.objects.report import SequenceReport
from circleLib.serde import serde

ARTIFACT_KINDS = ("packing", "map", "modulus", "sequence", "verify")


@serde
@define
class MapArtifact:
    """A uniformization run: a domain mapped onto its circle domain."""

    map: CircleDomainMap
    provenance: Provenance
    config: Optional[RunConfig] = None
    sphere_radius: float = field(default=SPHERE_RADIUS, metadata={"omit_if_default": False})
    schema: str = field(default=SCHEMA_VERSION, metadata={"omit_if_default": False})
    kind: str = field(default="map", metadata={"omit_if_default": False})


@serde
@define
class ModulusArtifact:
    """A modulus computation with the setup it was computed on."""

    setup: ModulusSetup
    result: ModulusResult
    provenance: Provenance
    reference: Optional[float] = None
    """Known exact value of the continuous problem, if any."""

    probes: Optional[ProbeTable] = None
    config: Optional[RunConfig] = None
    sphere_radius: float = field(default=SPHERE_RADIUS, metadata={"omit_if_default": False})
    schema: str = field(default=SCHEMA_VERSION, metadata={"omit_if_default": False})
    kind: str = field(default="modulus", metadata={"omit_if_default": False})


@serde
@define
class SequenceArtifact:
    """A sequence run: the packing, one map per converged ``n`` and the report."""

    packing: Packing
    report: SequenceReport
    provenance: Provenance
    maps: List[CircleDomainMap] = field(factory=list)
    config: Optional[RunConfig] = None
    sphere_radius: float = field(default=SPHERE_RADIUS, metadata={"omit_if_default": False})
    schema: str = field(default=SCHEMA_VERSION, metadata={"omit_if_default": False})
    kind: str = field(default="sequence", metadata={"omit_if_default": False})

    def map_for(self, n: int) -> CircleDomainMap:
        for M in self.maps:
            if M.n == n:
                return M
        raise KeyError(n)


@serde
@define
class VerifyReport:
    """Outcome of a verification suite run on an artifact."""

    suite: str
    artifact_kind: str
    provenance: Provenance
    checks: List[CheckResult] = field(factory=list)
    passed: bool = field(default=False, metadata={"omit_if_default": False})
    """Whether every non-informational check passed."""

    source_hash: str = ""
    """Config hash of the verified artifact."""

    schema: str = field(default=SCHEMA_VERSION, metadata={"omit_if_default": False})
    kind: str = field(default="verify", metadata={"omit_if_default": False})

    @classmethod
    def from_checks(
        cls,
        suite: str,
        artifact_kind: str,
        provenance: Provenance,
        checks: List[CheckResult],
        source_hash: str = "",
    ) -> VerifyReport:
        passed = all(check.passed or check.informational for check in checks)
        return cls(suite, artifact_kind, provenance, checks, passed, source_hash)
