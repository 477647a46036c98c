"""circleLib -- uniformization of packings onto circle domains, and
transboundary modulus."""

from __future__ import annotations

from circleLib.objects import CircleDomainMap, Packing, PeripheralContinuum

try:
    from ._version import version as __version__
except ImportError:
    __version__ = "0.0.0+unknown"


__all__ = ["CircleDomainMap", "Packing", "PeripheralContinuum"]
