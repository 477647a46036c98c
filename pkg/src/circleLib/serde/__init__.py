from __future__ import annotations

from importlib import import_module
from types import ModuleType
from typing import IO, Any, AnyStr, Type

from circleLib.errors import ExtrasNotInstalledError
from circleLib.typing import PathLike, T

_SERDE_FORMATS_ = ("json", "msgpack")
_METHODS = ("loads", "load", "dumps", "dump")


def _bind(cls: Type[T], fmt: str, backend: ModuleType) -> None:
    # backend loaders take (payload, cls); expose them as classmethods of cls
    def loads(klass: Type[T], s: str | bytes, **kwargs: Any) -> T:
        return backend.loads(s, klass, **kwargs)  # type: ignore[no-any-return]

    def load(klass: Type[T], fp: PathLike | IO[AnyStr], **kwargs: Any) -> T:
        return backend.load(fp, klass, **kwargs)  # type: ignore[no-any-return]

    setattr(cls, f"{fmt}_loads", classmethod(loads))
    setattr(cls, f"{fmt}_load", classmethod(load))
    setattr(cls, f"{fmt}_dumps", backend.dumps)
    setattr(cls, f"{fmt}_dump", backend.dump)


def _unavailable(cls: Type[T], fmt: str, exc: ImportError) -> None:
    error = ExtrasNotInstalledError(fmt)
    error.__cause__ = exc
    for method in _METHODS:
        setattr(cls, f"{fmt}_{method}", error)


def serde(cls: Type[T]) -> Type[T]:
    """Decorator to add serialization support to a circleLib class.

    This adds f"{format}_loads" / f"{format}_dumps" (from/to bytes) methods, and
    f"{format}_load" / f"{format}_dump" (for file or path) methods.

    E.g.::

        from circleLib.generators import generate
        from circleLib.objects import Packing

        packing = generate("carpet", level=2)
        packing.json_dump("carpet.json", sort_keys=True)
        same = Packing.json_load("carpet.json")

    JSON artifacts store every float as its shortest round-trip decimal string,
    so dumping the same object twice gives the same bytes. MessagePack keeps
    floats native.

    The methods need the ``cattrs`` package plus ``orjson`` (optional, the
    built-in ``json`` is used otherwise) or ``msgpack``; when a backend fails to
    import, its methods raise :class:`~circleLib.errors.ExtrasNotInstalledError`
    when called.
    """

    available = []
    for fmt in _SERDE_FORMATS_:
        try:
            backend = import_module(f"circleLib.serde.{fmt}")
        except ImportError as exc:
            _unavailable(cls, fmt, exc)
            continue
        _bind(cls, fmt, backend)
        available.append(fmt)
    cls._SERDE_FORMATS_ = tuple(available)  # type: ignore[attr-defined]
    return cls
