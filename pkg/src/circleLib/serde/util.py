from __future__ import annotations

import os
from typing import Any, BinaryIO, Callable, Type, cast

from circleLib.errors import ArtifactError, GeometryError
from circleLib.typing import PathLike, T


def read_bytes(fp: PathLike | BinaryIO) -> bytes:
    if hasattr(fp, "read"):
        return cast(BinaryIO, fp).read()
    path = cast(PathLike, fp)
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as exc:
        raise ArtifactError(f"cannot read {os.fsdecode(path)!r}: {exc}") from exc


def write_bytes(fp: PathLike | BinaryIO, data: bytes) -> None:
    if hasattr(fp, "write"):
        cast(BinaryIO, fp).write(data)
        return
    path = os.fsdecode(cast(PathLike, fp))
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "wb") as f:
            f.write(data)
    except OSError as exc:
        raise ArtifactError(f"cannot write {path!r}: {exc}") from exc


def _find_error(
    exc: BaseException, kind: Type[BaseException]
) -> BaseException | None:
    if isinstance(exc, kind):
        return exc
    # cattrs' detailed validation wraps hook errors in exception groups
    for inner in getattr(exc, "exceptions", ()):
        found = _find_error(inner, kind)
        if found is not None:
            return found
    return None


def structure_checked(
    structure: Callable[[Any, Type[T]], T], data: Any, cls: Type[T]
) -> T:
    """Structures ``data`` as ``cls``, reporting any failure as an ArtifactError.

    Geometry validation errors raised by the classes themselves are re-raised
    unwrapped so callers can tell bad geometry from malformed files.
    """
    try:
        return structure(data, cls)
    except Exception as exc:
        geometry = _find_error(exc, GeometryError)
        if geometry is not None:
            raise geometry from exc
        raise ArtifactError(f"malformed {cls.__name__} data: {exc}") from exc
