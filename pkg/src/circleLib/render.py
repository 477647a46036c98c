"""SVG figures of packings, circle domains and modulus densities.

Charts are drawn with the y axis pointing up. Every chart of one figure shares
a square viewBox, so panels of a sequence run can be compared by eye::

    paths = render("run/sequence.json", "figures")

Outlines go through fontTools pens: continua draw themselves into a
:class:`~fontTools.pens.svgPathPen.SVGPathPen` behind a y-flipping
:class:`~fontTools.pens.transformPen.TransformPen`.
"""

from __future__ import annotations

import logging
import os
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
import svgwrite
from fontTools.pens.svgPathPen import SVGPathPen
from fontTools.pens.transformPen import TransformPen

from circleLib.artifacts import Artifact, load_artifact
from circleLib.errors import ArtifactError
from circleLib.objects.artifacts import MapArtifact, ModulusArtifact, SequenceArtifact
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.misc import BoundingBox, getBounds, pointBounds, unionBounds
from circleLib.objects.packing import Packing
from circleLib.typing import PathLike

__all__ = ["CHART_SIZE", "chart_bounds", "packing_drawing", "figures", "render"]

logger = logging.getLogger(__name__)

CHART_SIZE = 512
"""Pixel width and height of one panel."""

_MARGIN = 0.05
_FILL = "#3b6ea5"
_POINT = "#b03a2e"
_DENSITY = "#e08a1e"
_FLIP = (1, 0, 0, -1, 0, 0)


def _ntos(value: float) -> str:
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


def chart_bounds(
    families: Iterable[Sequence[PeripheralContinuum]], margin: float = _MARGIN
) -> BoundingBox:
    """Square chart box holding every continuum of every family, grown by
    ``margin`` times its side. Empty families give the box ``[-1, 1]^2``."""
    bounds: BoundingBox | None = None
    for family in families:
        for K in family:
            bounds = unionBounds(bounds, getBounds(K))
            if K.is_degenerate:
                bounds = unionBounds(bounds, pointBounds([K.planar_circle[0]]))
    if bounds is None:
        return BoundingBox(-1.0, -1.0, 1.0, 1.0)
    side = max(bounds.width, bounds.height)
    if side == 0:
        side = 1.0
    cx, cy = (bounds.xMin + bounds.xMax) / 2, (bounds.yMin + bounds.yMax) / 2
    half = side * (1 + 2 * margin) / 2
    return BoundingBox(cx - half, cy - half, cx + half, cy + half)


def _outline(K: PeripheralContinuum) -> str:
    pen = SVGPathPen(None, ntos=_ntos)
    K.draw(TransformPen(pen, _FLIP))
    return str(pen.getCommands())


def _panel(
    dwg: svgwrite.Drawing,
    index: int,
    continua: Sequence[PeripheralContinuum],
    bounds: BoundingBox,
    title: str = "",
    opacity: Optional[Mapping[int, float]] = None,
) -> svgwrite.container.SVG:
    panel = dwg.svg(insert=(index * CHART_SIZE, 0), size=(CHART_SIZE, CHART_SIZE))
    panel.viewbox(bounds.xMin, -bounds.yMax, bounds.width, bounds.height)
    if title:
        panel.set_desc(title=title)
    stroke = bounds.width / 400
    panel.add(
        dwg.rect(
            insert=(bounds.xMin, -bounds.yMax),
            size=(bounds.width, bounds.height),
            fill="none",
            stroke="black",
            stroke_width=stroke,
            class_="frame",
        )
    )
    arm = bounds.width / 80
    for K in continua:
        if K.is_degenerate:
            z = K.planar_circle[0]
            x, y = z.real, -z.imag
            cross = dwg.g(class_="puncture", stroke=_POINT, stroke_width=stroke)
            cross.add(dwg.line((x - arm, y - arm), (x + arm, y + arm)))
            cross.add(dwg.line((x - arm, y + arm), (x + arm, y - arm)))
            panel.add(cross)
            continue
        fill_opacity = 1.0 if opacity is None else opacity.get(K.id, 0.0)
        panel.add(
            dwg.path(
                d=_outline(K),
                fill=_FILL,
                fill_opacity=round(fill_opacity, 6),
                stroke="black",
                stroke_width=stroke,
                class_="continuum",
            )
        )
    dwg.add(panel)
    return panel


def packing_drawing(
    panels: Sequence[Sequence[PeripheralContinuum]],
    bounds: Sequence[BoundingBox] | None = None,
    titles: Sequence[str] = (),
) -> svgwrite.Drawing:
    """Draws families of continua side by side, one panel each.

    Non-degenerate continua are filled outlines to scale, points are crosses.
    """
    if bounds is None:
        bounds = [chart_bounds([family]) for family in panels]
    count = max(1, len(panels))
    dwg = svgwrite.Drawing(size=(count * CHART_SIZE, CHART_SIZE))
    dwg.viewbox(0, 0, count * CHART_SIZE, CHART_SIZE)
    for i, family in enumerate(panels):
        title = titles[i] if i < len(titles) else ""
        _panel(dwg, i, family, bounds[i], title)
    return dwg


def _modulus_drawing(artifact: ModulusArtifact) -> svgwrite.Drawing:
    setup, result = artifact.setup, artifact.result
    x0, y0, x1, y1 = setup.window
    window = BoundingBox(x0, y0, x1, y1)
    side = max(window.width, window.height) * (1 + 2 * _MARGIN)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    bounds = BoundingBox(cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2)

    weights = result.continuum_weights
    top = max(weights.values(), default=0.0)
    opacity = {id: (w / top if top > 0 else 0.0) for id, w in weights.items()}
    for id in setup.forbidden:
        opacity[id] = 1.0

    dwg = svgwrite.Drawing(size=(CHART_SIZE, CHART_SIZE))
    dwg.viewbox(0, 0, CHART_SIZE, CHART_SIZE)
    title = f"{result.mode} modulus {result.value:.6g}"
    panel = _panel(dwg, 0, list(setup.packing), bounds, title, opacity)

    h = min(window.width, window.height) / setup.resolution
    nx, ny = max(1, round(window.width / h)), max(1, round(window.height / h))
    density = np.asarray(result.density, dtype=float)
    if density.size != nx * ny:
        if density.size:
            logger.warning("density snapshot does not match the grid, not drawn")
        return dwg
    peak = float(density.max()) if density.size else 0.0
    if peak <= 0:
        return dwg
    cells = dwg.g(class_="density", fill=_DENSITY)
    for index in np.flatnonzero(density > 0):
        row, column = divmod(int(index), nx)
        cells.add(
            dwg.rect(
                insert=(round(x0 + column * h, 9), round(-(y0 + (row + 1) * h), 9)),
                size=(round(h, 9), round(h, 9)),
                fill_opacity=round(float(density[index]) / peak, 6),
            )
        )
    # cells go under the continua
    panel.elements.insert(1, cells)
    return dwg


def figures(artifact: Artifact) -> Dict[str, svgwrite.Drawing]:
    """The drawings of an artifact, keyed by file name suffix.

    * packing: one panel.
    * map: the input domain next to its circle domain.
    * sequence: one figure per converged ``n``, suffixed ``-n<n>``, each with
      input domain next to circle domain; all domain panels share one box and all circle
      panels another.
    * modulus: the packing over the optimal density.

    Raises:
        ArtifactError: for verification reports, which have nothing to draw.
    """
    if isinstance(artifact, Packing):
        return {"": packing_drawing([artifact.continua], titles=[artifact.label])}
    if isinstance(artifact, MapArtifact):
        M = artifact.map
        return {
            "": packing_drawing(
                [M.domain.continua, M.circles],
                titles=[f"Y_{M.n}", f"X_{M.n}"],
            )
        }
    if isinstance(artifact, SequenceArtifact):
        maps = sorted(artifact.maps, key=lambda M: M.n)
        width = len(str(max((M.n for M in maps), default=0)))
        domain_box = chart_bounds([M.domain.continua for M in maps])
        circle_box = chart_bounds([M.circles for M in maps])
        return {
            f"-n{M.n:0{width}d}": packing_drawing(
                [M.domain.continua, M.circles],
                [domain_box, circle_box],
                titles=[f"Y_{M.n}", f"X_{M.n}"],
            )
            for M in maps
        }
    if isinstance(artifact, ModulusArtifact):
        return {"": _modulus_drawing(artifact)}
    raise ArtifactError(f"cannot render a {getattr(artifact, 'kind', '?')} artifact")


def render(
    artifact: PathLike | Artifact,
    output_dir: Optional[PathLike] = None,
    stem: Optional[str] = None,
) -> List[str]:
    """Writes the SVG figures of an artifact and returns their paths.

    Files are named ``<stem><suffix>.svg`` in ``output_dir`` (the artifact's
    directory by default); ``stem`` defaults to the artifact file name.
    """
    if isinstance(artifact, (str, bytes, os.PathLike)):
        path = os.fsdecode(artifact)
        loaded = load_artifact(path)
        if stem is None:
            stem = os.path.splitext(os.path.basename(path))[0]
        if output_dir is None:
            output_dir = os.path.dirname(path)
    else:
        loaded = artifact
    stem = stem or getattr(loaded, "kind", "figure")
    directory = os.fsdecode(output_dir) if output_dir is not None else os.curdir
    try:
        os.makedirs(directory or os.curdir, exist_ok=True)
    except OSError as exc:
        raise ArtifactError(f"cannot create {directory!r}: {exc}") from exc

    written = []
    for suffix, dwg in figures(loaded).items():
        target = os.path.join(directory, f"{stem}{suffix}.svg")
        try:
            with open(target, "w", encoding="utf-8") as f:
                f.write(dwg.tostring())
                f.write("\n")
        except OSError as exc:
            raise ArtifactError(f"cannot write {target!r}: {exc}") from exc
        logger.info("wrote %s", target)
        written.append(target)
    return written
