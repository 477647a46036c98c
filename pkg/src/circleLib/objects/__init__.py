from __future__ import annotations

from circleLib.objects.artifacts import (
    MapArtifact,
    ModulusArtifact,
    SequenceArtifact,
    VerifyReport,
)
from circleLib.objects.check import CheckResult
from circleLib.objects.circleDomainMap import (
    CircleDomainMap,
    KoebeIterationReport,
    Stage,
)
from circleLib.objects.config import Provenance, RunConfig
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.exteriorMap import ExteriorMap
from circleLib.objects.fatness import FatnessEstimate
from circleLib.objects.mobius import MobiusTransform
from circleLib.objects.modulus import (
    ModulusProblem,
    ModulusResult,
    ModulusSetup,
    ProbeRow,
    ProbeTable,
    Region,
)
from circleLib.objects.packing import Packing
from circleLib.objects.report import (
    HausdorffRow,
    SequenceEntry,
    SequenceReport,
    UpperGradientRecord,
)
from circleLib.objects.sampledSet import SampledSet
from circleLib.objects.spherePoint import SpherePoint

__all__ = [
    "CheckResult",
    "CircleDomainMap",
    "ExteriorMap",
    "FatnessEstimate",
    "HausdorffRow",
    "KoebeIterationReport",
    "MapArtifact",
    "MobiusTransform",
    "ModulusArtifact",
    "ModulusProblem",
    "ModulusResult",
    "ModulusSetup",
    "Packing",
    "PeripheralContinuum",
    "ProbeRow",
    "ProbeTable",
    "Provenance",
    "Region",
    "RunConfig",
    "SampledSet",
    "SequenceArtifact",
    "SequenceEntry",
    "SequenceReport",
    "SpherePoint",
    "Stage",
    "UpperGradientRecord",
    "VerifyReport",
]
