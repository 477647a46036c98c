from __future__ import annotations

import logging
import math
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import shapely
from attrs import define, evolve, field
from numpy.polynomial import polynomial
from scipy.linalg import lstsq

from circleLib.constants import (
    CONDITION_LIMIT,
    CORNER_CLUSTERING,
    CORNER_POLES,
    LAURENT_DEGREE,
    NEWTON_MAX_STEPS,
    NEWTON_TOLERANCE,
)
from circleLib.errors import ConvergenceError, GeometryError
from circleLib.objects.misc import clustered_distances, fit_circle
from circleLib.serde import serde
from circleLib.typing import ComplexArray

logger = logging.getLogger(__name__)


def _complex_tuple(value: Iterable[complex]) -> Tuple[complex, ...]:
    return tuple(complex(c) for c in value)




def _pole_counts(limit: int, target: float) -> List[int]:
    if target <= 0 or limit < 3:
        return [limit]
    return sorted({limit // 3, 2 * limit // 3, limit})


def _neighbor(samples: ComplexArray, i: int, step: int, reach: float) -> complex:
    """The first sample from ``i`` in direction ``step`` at least ``reach`` away."""
    n = len(samples)
    for k in range(1, n):
        z = samples[(i + step * k) % n]
        if abs(z - samples[i]) >= reach:
            return complex(z)
    return complex(samples[(i + step) % n])


def corner_poles(
    samples: ComplexArray,
    corners: Sequence[int],
    count: int,
    clustering: float = CORNER_CLUSTERING,
) -> Tuple[ComplexArray, np.ndarray]:
    """Poles clustered toward the corners of a closed curve.

    At each corner ``samples[i]``, ``count`` poles are placed on the bisector
    of the inner angle at tapered distances from the corner, up to half the
    distance to the nearest other corner. Poles falling outside the curve are
    dropped.

    Returns:
        The poles and their distances to their corner.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    corners = list(corners)
    if count <= 0 or not corners:
        return np.empty(0, np.complex128), np.empty(0)
    vertices = samples[corners]
    orientation = math.copysign(1.0, np.sum(np.conj(samples) * np.roll(samples, -1)).imag)
    poles, distances = [], []
    for k, (i, v) in enumerate(zip(corners, vertices)):
        others = np.abs(np.delete(vertices, k) - v)
        reach = 0.5 * float(others.min() if len(others) else np.max(np.abs(samples - v)))
        before = v - _neighbor(samples, i, -1, reach / 10)
        after = _neighbor(samples, i, 1, reach / 10) - v
        before, after = before / abs(before), after / abs(after)
        bisector = after - before
        if abs(bisector) < 1e-12:
            continue
        bisector /= abs(bisector)
        if orientation * (np.conj(before) * after).imag < 0:
            # reflex corner
            bisector = -bisector
        d = clustered_distances(reach, count, clustering)
        poles.append(v + d * bisector)
        distances.append(d)
    if not poles:
        return np.empty(0, np.complex128), np.empty(0)
    p, d = np.concatenate(poles), np.concatenate(distances)
    inside = shapely.Polygon(np.column_stack([samples.real, samples.imag]))
    keep = shapely.contains_xy(inside, p.real, p.imag)
    return p[keep], d[keep]


@serde
@define(frozen=True)
class ExteriorMap:
    """Conformal map of the exterior of a Jordan curve onto the exterior of a
    circle centered at 0, fixing infinity with derivative 1 there.

    The map is stored in logarithmic form: with ``ζ = z - center``,
    ``f(z) = ζ exp(h(ζ))`` where

        h(ζ) = Σ c_k (scale / ζ)^k + Σ r_j / (z - p_j)

    for ``k = 1..m``, the poles ``p_j`` lying inside the curve. The poles are
    only used for curves with corners, where a plain series converges slowly.
    Fitting makes ``log|f|`` constant on the boundary samples, which is a
    linear least squares problem. :meth:`laurent` gives the equivalent Laurent
    coefficients ``a_1 = 1, a_0, a_-1, ...``.

    The image circle has radius :attr:`capacity`, the logarithmic capacity
    of the curve.
    """

    center: complex
    """A chart point inside the curve."""

    scale: float = 1.0
    """Radius normalizing the powers of ``1 / ζ``."""

    log_capacity: float = 0.0
    """``log`` of the image circle radius."""

    coefficients: Tuple[complex, ...] = field(default=(), converter=_complex_tuple)
    """``c_1 .. c_m`` of the scaled logarithmic series."""

    residual: float = 0.0
    """Circularity residual of the image of the fitted samples."""

    condition: float = 1.0
    """Condition number of the column-equilibrated series part of the least
    squares system."""

    poles: Tuple[complex, ...] = field(default=(), converter=_complex_tuple)
    """Chart poles ``p_j`` of the logarithmic form, inside the curve."""

    residues: Tuple[complex, ...] = field(default=(), converter=_complex_tuple)
    """``r_j``, one per pole."""

    def __attrs_post_init__(self) -> None:
        if len(self.poles) != len(self.residues):
            raise GeometryError(
                f"{len(self.poles)} poles but {len(self.residues)} residues"
            )

    @classmethod
    def fit(
        cls,
        samples: ComplexArray,
        center: complex,
        degree: int = LAURENT_DEGREE,
        corners: Sequence[int] = (),
        poles: int = CORNER_POLES,
        target: float = 0.0,
    ) -> ExteriorMap:
        """Fits the map to counter-clockwise boundary samples of a curve.

        ``corners`` are indices of samples sitting at corners of the curve. Up
        to ``poles`` poles per corner are then added, in a few rounds, until
        the residual reaches ``target``; the best fit is returned. Samples
        should be graded toward the corners as the poles are (see
        :meth:`~circleLib.objects.PeripheralContinuum.graded_boundary_samples`).

        Raises:
            GeometryError: if there are fewer than ``4 * degree`` samples, the
                samples do not form a simple curve or pass through the center.
            ConvergenceError: if the series part of the least squares system is
                ill-conditioned.
        """
        samples = np.asarray(samples, dtype=np.complex128)
        if degree < 0:
            raise ValueError("degree must be non-negative")
        if len(samples) < max(4 * degree, 3):
            raise GeometryError(
                f"{len(samples)} boundary samples are too few for degree {degree}"
            )
        ring = shapely.LinearRing(np.column_stack([samples.real, samples.imag]))
        if not ring.is_simple:
            raise GeometryError("boundary samples do not form a simple curve")
        zeta = samples - center
        modulus = np.abs(zeta)
        if np.min(modulus) == 0:
            raise GeometryError("the expansion center lies on the curve")
        scale = float(np.sqrt(np.min(modulus) * np.max(modulus)))

        powers = (scale / zeta)[:, None] ** np.arange(1, degree + 1)[None, :]
        series = np.empty((len(samples), 2 * degree + 1))
        series[:, 0] = -1.0
        series[:, 1::2] = powers.real
        series[:, 2::2] = -powers.imag
        condition = float(np.linalg.cond(series / np.linalg.norm(series, axis=0)))
        if not math.isfinite(condition) or condition > CONDITION_LIMIT:
            raise ConvergenceError(
                f"exterior map least squares is ill-conditioned ({condition:.3g})"
            )
        b = -np.log(modulus)

        best: ExteriorMap | None = None
        for count in _pole_counts(poles, target) if corners else [0]:
            p, d = corner_poles(samples, corners, count)
            if best is not None and series.shape[1] + 2 * len(p) > len(samples):
                break
            columns = d / (samples[:, None] - p[None, :])
            A = np.hstack([series, columns.real, -columns.imag])
            norms = np.linalg.norm(A, axis=0)
            x = lstsq(A / norms, b)[0] / norms
            k = series.shape[1]
            candidate = cls(
                complex(center),
                scale,
                float(x[0]),
                x[1:k:2] + 1j * x[2:k:2],
                0.0,
                condition,
                p,
                d * (x[k : k + len(p)] + 1j * x[k + len(p) :]),
            )
            residual = fit_circle(candidate(samples))[2]
            logger.debug(
                "exterior map of degree %d with %d poles: residual %.3g",
                degree,
                len(p),
                residual,
            )
            if best is None or residual < best.residual:
                best = evolve(candidate, residual=residual)
            if residual <= target:
                break
        assert best is not None
        return best

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    @property
    def capacity(self) -> float:
        """Radius of the image circle."""
        return math.exp(self.log_capacity)

    def _series(self, zeta: ComplexArray) -> Tuple[ComplexArray, ComplexArray]:
        """Returns ``h(ζ)`` and ``ζ h'(ζ)``."""
        u = self.scale / zeta
        c = np.asarray(self.coefficients, dtype=np.complex128)
        k = np.arange(1, self.degree + 1)
        h = polynomial.polyval(u, np.concatenate([[0], c]))
        zh = -polynomial.polyval(u, np.concatenate([[0], k * c]))
        if self.poles:
            q = np.asarray(self.poles, dtype=np.complex128) - self.center
            r = np.asarray(self.residues, dtype=np.complex128)
            g = 1 / (zeta[..., None] - q)
            h = h + np.sum(r * g, axis=-1)
            zh = zh - np.sum(r * g**2, axis=-1) * zeta
        return h, zh

    def __call__(self, z: ComplexArray | complex) -> ComplexArray:
        """Vectorized evaluation; infinity maps to infinity."""
        z = np.asarray(z, dtype=np.complex128)
        infinite = np.isinf(z)
        zeta = np.where(infinite, 1, z - self.center)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            h, _ = self._series(zeta)
            result = zeta * np.exp(h)
        return np.where(infinite, complex(np.inf, np.inf), result)

    def derivative(self, z: ComplexArray | complex) -> ComplexArray:
        """Complex derivative ``exp(h) (1 + ζ h')``, 1 at infinity."""
        z = np.asarray(z, dtype=np.complex128)
        infinite = np.isinf(z)
        zeta = np.where(infinite, 1, z - self.center)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            h, zh = self._series(zeta)
            result = np.exp(h) * (1 + zh)
        return np.where(infinite, 1 + 0j, result)

    def spherical_derivatives(self, z: ComplexArray | complex) -> np.ndarray:
        """``(1 + |z|^2) / (1 + |f(z)|^2) |f'(z)|``, 1 at infinity."""
        z = np.asarray(z, dtype=np.complex128)
        infinite = np.isinf(z)
        finite = np.where(infinite, 0, z)
        w = self(finite)
        result = (1 + np.abs(finite) ** 2) / (1 + np.abs(w) ** 2) * np.abs(
            self.derivative(finite)
        )
        return np.where(infinite, 1.0, result)

    def inverse(self, w: ComplexArray | complex) -> ComplexArray:
        """Preimages in the exterior of the curve by damped Newton iteration.

        Raises:
            ConvergenceError: if some point does not converge within
                ``NEWTON_MAX_STEPS`` steps.
        """
        w = np.asarray(w, dtype=np.complex128)
        infinite = np.isinf(w)
        target = np.where(infinite, 0, w)
        z = self.center + target - self._log_series(1)[1]
        error = np.abs(self(z) - target)
        step_size = np.ones(target.shape)
        goal = NEWTON_TOLERANCE * np.maximum(1.0, np.abs(target))
        for _ in range(NEWTON_MAX_STEPS):
            done = infinite | (error <= goal)
            if np.all(done):
                break
            with np.errstate(divide="ignore", invalid="ignore"):
                step = (self(z) - target) / self.derivative(z)
                candidate = z - step_size * step
                candidate_error = np.abs(self(candidate) - target)
            better = ~done & np.isfinite(candidate_error) & (candidate_error < error)
            z = np.where(better, candidate, z)
            error = np.where(better, candidate_error, error)
            step_size = np.where(better, np.minimum(1.0, 2 * step_size), step_size / 2)
        else:
            done = infinite | (error <= goal)
        if not np.all(done):
            raise ConvergenceError(
                f"Newton inversion did not converge (error {np.max(error[~done]):.3g})"
            )
        return np.where(infinite, complex(np.inf, np.inf), z)

    def _log_series(self, order: int) -> np.ndarray:
        """``b_0 .. b_order`` with ``h(ζ) = Σ b_k ζ^-k`` for large ``|ζ|``."""
        k = np.arange(1, order + 1)
        b = np.zeros(order + 1, dtype=np.complex128)
        m = min(order, self.degree)
        b[1 : m + 1] = np.asarray(self.coefficients[:m]) * self.scale ** k[:m]
        if self.poles:
            # r / (ζ - q) = Σ r q^(k-1) ζ^-k
            q = np.asarray(self.poles, dtype=np.complex128) - self.center
            r = np.asarray(self.residues, dtype=np.complex128)
            b[1:] += np.sum(r[None, :] * q[None, :] ** (k[:, None] - 1), axis=1)
        return b

    def laurent(self, order: int | None = None) -> Tuple[complex, ...]:
        """Laurent coefficients ``(a_1, a_0, a_-1, .., a_-order)`` of ``f``
        around :attr:`center`, from ``exp`` of the logarithmic series.

        ``order`` defaults to the degree. The expansion holds outside the
        circle about the center through the farthest pole.
        """
        m = self.degree if order is None else order
        b = self._log_series(m + 1)
        e = np.zeros(m + 2, dtype=np.complex128)
        e[0] = 1.0
        for j in range(1, m + 2):
            k = np.arange(1, j + 1)
            e[j] = np.sum(k * b[k] * e[j - k]) / j
        return tuple(complex(v) for v in e)
