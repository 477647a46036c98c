from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, Tuple, overload

import numpy as np
from attrs import define, field

from circleLib.errors import GeometryError
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.exteriorMap import ExteriorMap
from circleLib.objects.mobius import MobiusTransform
from circleLib.objects.packing import Packing
from circleLib.objects.spherePoint import SpherePoint
from circleLib.serde import serde
from circleLib.typing import ComplexArray, FloatArray


@serde
@define(frozen=True)
class Stage:
    """One elementary map of the chain: a Möbius transformation or the
    exterior map circularizing one component."""

    component: int = 0
    """Id of the circularized continuum; 0 for chart and normalization stages."""

    mobius: Optional[MobiusTransform] = None
    exterior: Optional[ExteriorMap] = None

    def __attrs_post_init__(self) -> None:
        if (self.mobius is None) == (self.exterior is None):
            raise GeometryError("a stage holds exactly one of mobius or exterior")

    @property
    def map(self) -> MobiusTransform | ExteriorMap:
        result = self.mobius if self.mobius is not None else self.exterior
        assert result is not None
        return result

    def __call__(self, z: ComplexArray) -> ComplexArray:
        if self.mobius is not None:
            return self.mobius.apply(z)
        assert self.exterior is not None
        return self.exterior(z)

    def inverse(self, w: ComplexArray) -> ComplexArray:
        if self.mobius is not None:
            return self.mobius.inverse().apply(w)
        assert self.exterior is not None
        return self.exterior.inverse(w)

    def derivative(self, z: ComplexArray) -> ComplexArray:
        return np.asarray(self.map.derivative(z), dtype=np.complex128)

    def spherical_derivatives(self, z: ComplexArray) -> FloatArray:
        return self.map.spherical_derivatives(z)


@serde
@define
class KoebeIterationReport:
    """What happened during a Koebe iteration run."""

    residuals: List[float] = field(factory=list)
    """Largest circularity residual of the boundary sample images after each
    sweep."""

    fit_residuals: List[float] = field(factory=list)
    """Largest exterior map fit residual within each sweep."""

    sweeps: int = 0
    converged: bool = field(default=False, metadata={"omit_if_default": False})
    """Whether the final residual reached the tolerance."""

    tolerance: float = 0.0


@serde
@define
class CircleDomainMap(Sequence[Stage]):
    """The composite conformal map of a domain onto its circle domain.

    Behavior:
        The map is a read-only sequence of :class:`Stage` objects, applied in
        order. Calling it evaluates the chain on an array of chart points,
        infinity included as any infinite complex::

            w = domain_map(np.array([0.5 + 0.5j]))
            z = domain_map.inverse(w)

        ``circles[i]`` is the output continuum of ``i``; it has the same id
        as its input ``domain[i]``.
    """

    stages: List[Stage] = field(factory=list)
    circles: List[PeripheralContinuum] = field(factory=list)
    """Output disks and points, in input order."""

    normalization: Tuple[SpherePoint, SpherePoint, SpherePoint] = field(
        default=(SpherePoint.infinity(), SpherePoint(0j), SpherePoint(1 + 0j)),
        metadata={"omit_if_default": False},
    )
    """The points sent to infinity, 0 and 1."""

    report: KoebeIterationReport = field(factory=KoebeIterationReport)
    domain: Packing = field(factory=Packing)
    """The input continua ``q_1 .. q_n``."""

    kind: str = field(default="map", metadata={"omit_if_default": False})

    # collections.abc.Sequence interface

    @overload
    def __getitem__(self, index: int) -> Stage: ...

    @overload
    def __getitem__(self, index: slice) -> List[Stage]:  # noqa: F811
        ...

    def __getitem__(self, index: int | slice) -> Stage | List[Stage]:  # noqa: F811
        return self.stages[index]

    def __iter__(self) -> Iterator[Stage]:
        return iter(self.stages)

    def __len__(self) -> int:
        return len(self.stages)

    @property
    def n(self) -> int:
        return len(self.domain)

    def __call__(self, z: ComplexArray) -> ComplexArray:
        w = np.asarray(z, dtype=np.complex128)
        for stage in self.stages:
            w = stage(w)
        return w

    def inverse(self, w: ComplexArray) -> ComplexArray:
        z = np.asarray(w, dtype=np.complex128)
        for stage in reversed(self.stages):
            z = stage.inverse(z)
        return z

    def derivative(self, z: ComplexArray) -> ComplexArray:
        """Complex derivative of the chain at finite points whose images stay
        finite along it."""
        w = np.asarray(z, dtype=np.complex128)
        result = np.ones(w.shape, dtype=np.complex128)
        for stage in self.stages:
            result = result * stage.derivative(w)
            w = stage(w)
        return result

    def spherical_derivative(self, z: ComplexArray) -> FloatArray:
        """``|Df|`` by the chain rule: the product of the stage spherical
        derivatives along the chain."""
        w = np.asarray(z, dtype=np.complex128)
        result = np.ones(w.shape)
        for stage in self.stages:
            result = result * stage.spherical_derivatives(w)
            w = stage(w)
        return result

    def in_domain(self, z: ComplexArray, strict: bool = True) -> np.ndarray:
        """Whether chart points avoid the interiors of the input continua."""
        z = np.asarray(z, dtype=np.complex128)
        inside = np.zeros(z.shape, bool)
        finite = np.isfinite(z)
        for continuum in self.domain:
            inside |= finite & continuum.contains(np.where(finite, z, 0), strict=strict)
        return ~inside

    def in_image(self, w: ComplexArray, strict: bool = True) -> np.ndarray:
        """Whether chart points avoid the interiors of the output circles."""
        w = np.asarray(w, dtype=np.complex128)
        inside = np.zeros(w.shape, bool)
        finite = np.isfinite(w)
        for circle in self.circles:
            inside |= finite & circle.contains(np.where(finite, w, 0), strict=strict)
        return ~inside

    def circle(self, id: int) -> PeripheralContinuum:
        for circle in self.circles:
            if circle.id == id:
                return circle
        raise KeyError(id)
