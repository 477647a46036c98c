"""Reading and writing the JSON artifacts of the command line tools.

Every artifact carries a ``kind`` tag and a ``schema`` version; the tag picks
the class an artifact file is structured as::

    artifact = load_artifact("run/map.json")
    write_artifact(artifact, "copy/map.json")
"""

from __future__ import annotations

import logging
from typing import Any, Dict, Type, Union

from circleLib.constants import SCHEMA_VERSION
from circleLib.errors import ArtifactError
from circleLib.objects.artifacts import (
    MapArtifact,
    ModulusArtifact,
    SequenceArtifact,
    VerifyReport,
)
from circleLib.objects.packing import Packing
from circleLib.serde import json as json_backend
from circleLib.serde.util import read_bytes, write_bytes
from circleLib.typing import PathLike

__all__ = [
    "Artifact",
    "ARTIFACT_CLASSES",
    "artifact_kind",
    "load_artifact",
    "write_artifact",
]

logger = logging.getLogger(__name__)

Artifact = Union[Packing, MapArtifact, ModulusArtifact, SequenceArtifact, VerifyReport]

ARTIFACT_CLASSES: Dict[str, Type[Any]] = {
    "packing": Packing,
    "map": MapArtifact,
    "modulus": ModulusArtifact,
    "sequence": SequenceArtifact,
    "verify": VerifyReport,
}


def _parse(data: bytes) -> Any:
    try:
        if json_backend.have_orjson:
            return json_backend.orjson.loads(data)
        return json_backend.json.loads(data)
    except ValueError as exc:
        raise ArtifactError(f"invalid JSON: {exc}") from exc


def artifact_kind(data: Any) -> str:
    """The ``kind`` tag of a parsed artifact, checking its schema version.

    >>> artifact_kind({"kind": "map", "schema": "v1"})
    'map'
    """
    if not isinstance(data, dict):
        raise ArtifactError("an artifact must be a JSON object")
    kind = data.get("kind")
    if kind not in ARTIFACT_CLASSES:
        raise ArtifactError(f"unknown artifact kind {kind!r}")
    schema = data.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ArtifactError(
            f"unsupported schema {schema!r}, expected {SCHEMA_VERSION!r}"
        )
    return str(kind)


def load_artifact(path: PathLike) -> Artifact:
    """Reads any artifact, structured as the class its ``kind`` names.

    Raises:
        ArtifactError: if the file cannot be read, is not JSON, has an unknown
            kind or schema, or does not match its class.
        GeometryError: if it parses but describes invalid geometry.
    """
    raw = read_bytes(path)
    kind = artifact_kind(_parse(raw))
    logger.debug("loading %s artifact from %s", kind, path)
    result: Artifact = json_backend.loads(raw, ARTIFACT_CLASSES[kind])
    return result


def write_artifact(artifact: Artifact, path: PathLike) -> None:
    """Writes an artifact as sorted-key JSON, so equal artifacts give equal
    bytes."""
    data = json_backend.dumps(artifact, indent=2, sort_keys=True)
    write_bytes(path, data + b"\n")
