"""Discrete plain and transboundary modulus of curve families.

A :class:`~circleLib.objects.modulus.ModulusSetup` describes curves joining a
source region to a target region inside a chart window. :func:`build_problem`
lays a square grid over the window and turns every straight move between
nearby cells into a graph edge whose spherical length is a linear form in the
unknown densities. In transboundary mode every continuum of the packing is
contracted to a super-node carrying one extra weight, paid each time a curve
enters it.

:func:`compute_modulus` minimizes the mass of an admissible density by a
cutting-plane loop: the active paths define a least distance problem solved
exactly with :func:`scipy.optimize.nnls`, and a shortest path search finds the
curves the current density does not yet make long enough.
"""

from __future__ import annotations

import hashlib
import logging
import math
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
import shapely
from scipy import sparse
from scipy.optimize import minimize, nnls
from scipy.sparse.csgraph import dijkstra

from circleLib.constants import (
    DENSITY_SNAPSHOT_LIMIT,
    GRID_RESOLUTION,
    MODULUS_MAX_ITERATIONS,
    MODULUS_TOLERANCE,
)
from circleLib.converters import unstructure
from circleLib.errors import ConvergenceError, GeometryError
from circleLib.objects.check import CheckResult
from circleLib.objects.circleDomainMap import CircleDomainMap
from circleLib.objects.continuum import PeripheralContinuum
from circleLib.objects.mobius import MobiusTransform
from circleLib.objects.modulus import (
    CONTINUUM,
    FORBIDDEN,
    FREE,
    OUTSIDE,
    SOURCE,
    TARGET,
    ModulusProblem,
    ModulusResult,
    ModulusSetup,
    ProbeRow,
    ProbeTable,
    Region,
)
from circleLib.objects.packing import Packing
from circleLib.sphere import conformal_factor

logger = logging.getLogger(__name__)

__all__ = [
    "discretize",
    "build_problem",
    "compute_modulus",
    "grid_hash",
    "brute_force_modulus",
    "ring_modulus",
    "square_problem",
    "annulus_problem",
    "modulus_invariance_check",
    "nondegeneracy_probe",
    "relative_distance_sweep",
]

Window = Tuple[float, float, float, float]
Crossing = Tuple[int, int, float, float]

_WIDE_BASE = ((1, 0), (1, 1), (2, 1), (3, 1), (3, 2), (4, 1), (4, 3))
_ROOK = ((1, 0), (0, 1), (-1, 0), (0, -1))

# makes every edge cost positive so ties go to the geometrically shorter path
_TIE_BREAK = 1e-9

# above this many (unknowns x paths) the inner problem is solved on its dual
_DENSE_LIMIT = 4_000_000

_PATH_POOL = 2000


def _stencil_offsets(name: str) -> List[Tuple[int, int]]:
    if name == "rook":
        return list(_ROOK)
    offsets: List[Tuple[int, int]] = []
    for a, b in _WIDE_BASE:
        for dx, dy in ((a, b), (b, a)):
            for sx in (1, -1):
                for sy in (1, -1):
                    offset = (sx * dx, sy * dy)
                    if offset not in offsets:
                        offsets.append(offset)
    return offsets


def _crossings(dx: int, dy: int) -> List[Crossing]:
    """Cells met by the segment joining the centers of cell ``(0, 0)`` and
    cell ``(dx, dy)``, as ``(x offset, y offset, t0, t1)`` parameter ranges.

    Cells only touched at a grid corner get an empty range; they still have
    to be passable for the move to be allowed.
    """
    breaks = {0.0, 1.0}
    for d in (dx, dy):
        breaks.update((j + 0.5) / abs(d) for j in range(abs(d)))
    ts = sorted(breaks)
    result: List[Crossing] = []
    for t0, t1 in zip(ts, ts[1:]):
        middle = (t0 + t1) / 2
        result.append((math.floor(dx * middle + 0.5), math.floor(dy * middle + 0.5), t0, t1))
    if dx % 2 and dy % 2:
        seen = {(ox, oy) for ox, oy, _, _ in result}
        for ox in (math.floor(dx / 2), math.ceil(dx / 2)):
            for oy in (math.floor(dy / 2), math.ceil(dy / 2)):
                if (ox, oy) not in seen:
                    result.append((ox, oy, 0.5, 0.5))
    return result


def _as_region(value: Region | PeripheralContinuum) -> Region:
    if isinstance(value, Region):
        return value
    return Region(value)


def discretize(
    window: Window,
    P: Packing,
    resolution: int = GRID_RESOLUTION,
    *,
    source: Region | PeripheralContinuum,
    target: Region | PeripheralContinuum,
    mode: str = "transboundary",
    forbidden: Sequence[int] = (),
    stencil: str = "wide",
    domain: Optional[Region | PeripheralContinuum] = None,
) -> ModulusProblem:
    """Lays a grid of ``resolution`` cells along the shorter side of
    ``window`` and builds the curve family joining ``source`` to ``target``.

    Raises:
        GeometryError: if a terminal has no cell, the terminals overlap, or a
            continuum crossed in transboundary mode spans fewer than 2 cells.
    """
    setup = ModulusSetup(
        window=tuple(float(v) for v in window),  # type: ignore[arg-type]
        source=_as_region(source),
        target=_as_region(target),
        packing=P,
        domain=None if domain is None else _as_region(domain),
        forbidden=tuple(int(i) for i in forbidden),
        mode=mode,
        resolution=resolution,
        stencil=stencil,
    )
    return build_problem(setup)


def _terminal_cells(
    region: Region, centers: np.ndarray, window: Window, cell: float, shape: Tuple[int, int]
) -> np.ndarray:
    mask = region.contains(centers)
    if not mask.any() and not region.complement:
        # small terminals still own the cell holding them
        z = region.continuum.anchor()
        x0, y0, _, _ = window
        column = math.floor((z.real - x0) / cell)
        row = math.floor((z.imag - y0) / cell)
        if 0 <= row < shape[0] and 0 <= column < shape[1]:
            mask[row * shape[1] + column] = True
    return mask


def build_problem(setup: ModulusSetup) -> ModulusProblem:
    """Discretizes a setup; see :func:`discretize`."""
    x0, y0, x1, y1 = setup.window
    width, height = x1 - x0, y1 - y0
    if width <= 0 or height <= 0:
        raise GeometryError(f"empty modulus window {setup.window}")
    h = min(width, height) / setup.resolution
    nx_, ny_ = max(1, round(width / h)), max(1, round(height / h))
    shape = (ny_, nx_)
    rows, columns = np.divmod(np.arange(nx_ * ny_), nx_)
    centers = x0 + (columns + 0.5) * h + 1j * (y0 + (rows + 0.5) * h)
    transboundary = setup.mode == "transboundary"
    box = (x0, y0, x0 + nx_ * h, y0 + ny_ * h)

    packing_ids = {K.id for K in setup.packing}
    unknown = set(setup.forbidden) - packing_ids
    if unknown:
        raise GeometryError(f"forbidden ids {sorted(unknown)} are not in the packing")

    owner = np.zeros(centers.shape, dtype=np.int64)
    forbidden = np.zeros(centers.shape, bool)
    for K in setup.packing:
        if K.is_degenerate:
            if K.id in setup.forbidden:
                z = K.planar_circle[0]
                column, row = math.floor((z.real - x0) / h), math.floor((z.imag - y0) / h)
                if 0 <= row < ny_ and 0 <= column < nx_:
                    forbidden[row * nx_ + column] = True
            continue
        inside = K.contains(centers)
        if K.id in setup.forbidden:
            forbidden |= inside
        else:
            owner[inside] = K.id

    source = _terminal_cells(setup.source, centers, box, h, shape)
    target = _terminal_cells(setup.target, centers, box, h, shape)
    if np.any(source & target):
        raise GeometryError("source and target regions overlap")

    state = np.full(centers.shape, FREE, dtype=np.int8)
    state[owner > 0] = CONTINUUM
    state[target] = TARGET
    state[source] = SOURCE
    state[forbidden] = FORBIDDEN
    if setup.domain is not None:
        state[~setup.domain.contains(centers)] = OUTSIDE
    if not np.any(state == SOURCE):
        raise GeometryError("the source region meets no open cell of the window")
    if not np.any(state == TARGET):
        raise GeometryError("the target region meets no open cell of the window")

    super_ids: List[int] = []
    if transboundary:
        window_box = shapely.box(*box)
        for K in setup.packing:
            if K.is_degenerate or K.id in setup.forbidden:
                continue
            cells = int(np.count_nonzero(owner == K.id))
            overlap = K.to_shapely().intersection(window_box).area
            if cells < 2 and overlap > 2 * h * h:
                raise GeometryError(
                    f"resolution too coarse: continuum {K.id} spans {cells} cell(s)"
                )
            if np.any((state == CONTINUUM) & (owner == K.id)):
                super_ids.append(K.id)

    passable = np.isin(state, (FREE, SOURCE, TARGET))
    if not transboundary:
        passable |= state == CONTINUUM
    variable = np.full(centers.shape, -1, dtype=np.int64)
    carries = passable & (state != SOURCE) & (state != TARGET)
    variable[carries] = np.arange(np.count_nonzero(carries))
    cell_unknowns = int(np.count_nonzero(carries))
    super_nodes = {id: cell_unknowns + k for k, id in enumerate(super_ids)}
    lam = conformal_factor(centers)
    mass_weights = np.concatenate([lam[carries] ** 2 * h * h, np.ones(len(super_ids))])

    tail_ok = passable & (state != TARGET)
    head_ok = passable & (state != SOURCE)
    source_geometry = setup.source.to_shapely(box)
    target_geometry = setup.target.to_shapely(box)

    tails: List[np.ndarray] = []
    heads: List[np.ndarray] = []
    geometric: List[np.ndarray] = []
    entries: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    count = 0
    for dx, dy in _stencil_offsets(setup.stencil):
        r, c = np.meshgrid(
            np.arange(max(0, -dy), ny_ - max(0, dy)),
            np.arange(max(0, -dx), nx_ - max(0, dx)),
            indexing="ij",
        )
        r, c = r.ravel(), c.ravel()
        tail = r * nx_ + c
        head = (r + dy) * nx_ + c + dx
        ok = tail_ok[tail] & head_ok[head]
        crossings = _crossings(dx, dy)
        for ox, oy, _, _ in crossings:
            ok &= passable[(r + oy) * nx_ + c + ox]
        r, c, tail, head = r[ok], c[ok], tail[ok], head[ok]
        if not len(tail):
            continue
        length = h * math.hypot(dx, dy)
        edge = count + np.arange(len(tail))
        count += len(tail)

        start = np.zeros(len(tail))
        stop = np.ones(len(tail))
        segments = np.stack(
            [
                np.column_stack([centers[tail].real, centers[tail].imag]),
                np.column_stack([centers[head].real, centers[head].imag]),
            ],
            axis=1,
        )
        leaving = state[tail] == SOURCE
        if leaving.any():
            lines = shapely.linestrings(segments[leaving])
            start[leaving] = shapely.length(shapely.intersection(lines, source_geometry)) / length
        arriving = state[head] == TARGET
        if arriving.any():
            lines = shapely.linestrings(segments[arriving])
            inside = shapely.length(shapely.intersection(lines, target_geometry))
            stop[arriving] = 1 - inside / length

        for ox, oy, t0, t1 in crossings:
            if t1 <= t0:
                continue
            crossed = (r + oy) * nx_ + c + ox
            span = np.clip(np.minimum(t1, stop) - np.maximum(t0, start), 0, None)
            var = variable[crossed]
            keep = (var >= 0) & (span > 0)
            entries.append((edge[keep], var[keep], lam[crossed[keep]] * length * span[keep]))
        tails.append(tail)
        heads.append(head)
        geometric.append(np.full(len(tail), length))

    if super_ids:
        cell_count = centers.size
        node_of = {id: cell_count + k for k, id in enumerate(super_ids)}
        pairs: Set[Tuple[int, int]] = set()
        for k in np.flatnonzero(state == CONTINUUM):
            row, column = divmod(int(k), nx_)
            for dx, dy in _ROOK:
                rr, cc = row + dy, column + dx
                if 0 <= rr < ny_ and 0 <= cc < nx_:
                    u = rr * nx_ + cc
                    if state[u] in (FREE, SOURCE, TARGET):
                        pairs.add((u, int(owner[k])))
        edge_tails, edge_heads, rows_, cols_, vals_ = [], [], [], [], []
        for u, id in sorted(pairs):
            half = lam[u] * h / 2
            if state[u] != TARGET:
                edge_tails.append(u)
                edge_heads.append(node_of[id])
                rows_.append(count)
                cols_.append(super_nodes[id])
                vals_.append(1.0)
                if variable[u] >= 0:
                    rows_.append(count)
                    cols_.append(variable[u])
                    vals_.append(half)
                count += 1
            if state[u] != SOURCE:
                edge_tails.append(node_of[id])
                edge_heads.append(u)
                if variable[u] >= 0:
                    rows_.append(count)
                    cols_.append(variable[u])
                    vals_.append(half)
                count += 1
        tails.append(np.asarray(edge_tails, dtype=np.int64))
        heads.append(np.asarray(edge_heads, dtype=np.int64))
        geometric.append(np.full(len(edge_tails), h / 2))
        entries.append(
            (
                np.asarray(rows_, dtype=np.int64),
                np.asarray(cols_, dtype=np.int64),
                np.asarray(vals_, dtype=float),
            )
        )

    unknowns = len(mass_weights)
    if entries:
        data_rows = np.concatenate([e[0] for e in entries])
        data_cols = np.concatenate([e[1] for e in entries])
        data = np.concatenate([e[2] for e in entries])
    else:
        data_rows = data_cols = np.zeros(0, dtype=np.int64)
        data = np.zeros(0)
    lengths = sparse.coo_matrix((data, (data_rows, data_cols)), shape=(count, unknowns)).tocsr()
    lengths.sum_duplicates()
    lengths.sort_indices()

    problem = ModulusProblem(
        setup=setup,
        cell_size=h,
        shape=shape,
        centers=centers,
        state=state,
        owner=owner,
        variable=variable,
        super_nodes=super_nodes,
        mass_weights=mass_weights,
        tails=np.concatenate(tails) if tails else np.zeros(0, dtype=np.int64),
        heads=np.concatenate(heads) if heads else np.zeros(0, dtype=np.int64),
        lengths=lengths,
        geometric=np.concatenate(geometric) if geometric else np.zeros(0),
        sources=np.flatnonzero(state == SOURCE),
        targets=np.flatnonzero(state == TARGET),
    )
    logger.debug(
        "modulus grid %dx%d: %d unknowns, %d edges, %d super-nodes",
        ny_,
        nx_,
        unknowns,
        count,
        len(super_ids),
    )
    return problem


def grid_hash(problem: ModulusProblem) -> str:
    """SHA-256 of the mass weights and the weighted adjacency."""
    W = problem.lengths
    digest = hashlib.sha256()
    for array in (
        problem.mass_weights,
        W.indptr,
        W.indices,
        W.data,
        problem.tails,
        problem.heads,
    ):
        digest.update(np.ascontiguousarray(array).tobytes())
    return digest.hexdigest()


def _least_distance(
    constraints: sparse.csr_matrix, weights: np.ndarray
) -> Tuple[np.ndarray, float, np.ndarray]:
    """Minimizes ``Σ w ρ²`` subject to ``C ρ >= 1``.

    Returns the density, the optimal mass and the multipliers of the rows.
    """
    touched = np.unique(constraints.indices)
    scale = np.sqrt(weights[touched])
    G = constraints[:, touched].toarray() / scale
    m, t = G.shape
    rho = np.zeros(len(weights))
    if m * t <= _DENSE_LIMIT:
        # least distance programming through a non-negative least squares
        E = np.vstack([G.T, np.ones((1, m))])
        f = np.zeros(t + 1)
        f[-1] = 1.0
        u, _ = nnls(E, f, maxiter=50 * (t + m))
        residual = E @ u - f
        if abs(residual[-1]) < 1e-14:
            raise ConvergenceError("active path constraints are inconsistent")
        sigma = -residual[:t] / residual[-1]
        multipliers = u / abs(residual[-1])
        lower = float(sigma @ sigma)
    else:

        def dual(mu: np.ndarray) -> Tuple[float, np.ndarray]:
            s = G.T @ mu
            return float(s @ s / 4 - mu.sum()), G @ s / 2 - 1

        solution = minimize(
            dual,
            np.full(m, 1.0 / m),
            jac=True,
            method="L-BFGS-B",
            bounds=[(0, None)] * m,
        )
        multipliers = solution.x
        sigma = G.T @ multipliers / 2
        lower = float(-solution.fun)
    rho[touched] = sigma / scale
    return rho, lower, multipliers


def _path_edges(edge_index: sparse.csr_matrix, nodes: List[int]) -> np.ndarray:
    result = np.asarray(edge_index[nodes[:-1], nodes[1:]]).ravel() - 1
    return result.astype(np.int64)


def _trace(predecessors: np.ndarray, node: int) -> List[int]:
    path = [node]
    while predecessors[path[-1]] >= 0:
        path.append(int(predecessors[path[-1]]))
    return path[::-1]


def compute_modulus(
    problem: ModulusProblem,
    tol: float = MODULUS_TOLERANCE,
    max_iterations: int = MODULUS_MAX_ITERATIONS,
    paths_per_round: int = 16,
) -> ModulusResult:
    """Computes the discrete modulus of a problem by cutting planes.

    Each round solves the mass minimization over the active paths, whose
    optimum is a lower bound, then runs a multi-source Dijkstra search with
    the resulting density. Scaling the density by the shortest length found
    makes it admissible for every curve, which gives the upper bound reported
    as ``value``. The loop stops once ``(upper - lower) / upper <= tol``.

    Terminals no curve can join, or a curve whose length no density can
    raise, give an infinite value with an explanatory ``message``.

    Raises:
        ConvergenceError: if the gap is still above ``tol`` after
            ``max_iterations`` rounds.
    """
    W = problem.lengths
    N = problem.node_count
    a = problem.mass_weights
    edge_index = sparse.csr_matrix(
        (np.arange(1, len(problem.tails) + 1), (problem.tails, problem.heads)), shape=(N, N)
    )
    snapshot = problem.cell_count <= DENSITY_SNAPSHOT_LIMIT
    result = ModulusResult(
        value=math.inf,
        mode=problem.setup.mode,
        resolution=problem.setup.resolution,
        grid_hash=grid_hash(problem),
    )

    rho = np.zeros(problem.unknowns)
    best_rho = rho
    lower, upper = 0.0, math.inf
    active: List[List[int]] = []
    rows: List[sparse.csr_matrix] = []
    seen: Set[Tuple[int, ...]] = set()

    for iteration in range(1, max_iterations + 1):
        costs = W @ rho + _TIE_BREAK * problem.geometric
        graph = sparse.csr_matrix((costs, (problem.tails, problem.heads)), shape=(N, N))
        distances, predecessors, _ = dijkstra(
            graph,
            directed=True,
            indices=problem.sources,
            min_only=True,
            return_predecessors=True,
        )
        reached = problem.targets[np.isfinite(distances[problem.targets])]
        if not len(reached):
            result.message = "no curve of the grid joins the source to the target"
            logger.info(result.message)
            return result
        order = np.lexsort((reached, distances[reached]))

        shortest: Optional[float] = None
        added = 0
        for node in reached[order]:
            if shortest is not None and (added >= paths_per_round or distances[node] >= 1):
                break
            path = _trace(predecessors, int(node))
            row = sparse.csr_matrix(W[_path_edges(edge_index, path)].sum(axis=0))
            if row.nnz == 0:
                result.message = "a curve of the family has zero length for every density"
                logger.info(result.message)
                return result
            length = float((row @ rho)[0])
            if shortest is None:
                shortest = length
            key = tuple(path)
            if length >= 1 - 1e-12 or key in seen:
                continue
            seen.add(key)
            active.append(path)
            rows.append(row)
            added += 1

        assert shortest is not None
        mass = float(a @ rho**2)
        if shortest > 0 and mass > 0:
            candidate = mass / shortest**2
            if candidate < upper:
                upper = candidate
                best_rho = rho / shortest
        gap = (upper - lower) / upper if math.isfinite(upper) else math.inf
        logger.debug(
            "cutting plane round %d: %d paths, lower %.6g, upper %.6g",
            iteration,
            len(active),
            lower,
            upper,
        )
        if gap <= tol or not added:
            break

        rho, bound, multipliers = _least_distance(sparse.vstack(rows).tocsr(), a)
        lower = max(lower, bound)
        if len(active) > _PATH_POOL:
            keep = multipliers > 0
            active = [p for p, k in zip(active, keep) if k]
            rows = [r for r, k in zip(rows, keep) if k]
            seen = {tuple(p) for p in active}
    else:
        result.lower, result.upper, result.iterations = lower, upper, max_iterations
        raise ConvergenceError(
            f"modulus gap {gap:.3g} above {tol} after {max_iterations} rounds",
            unstructure(result),
        )

    result.value = upper
    result.lower = lower
    result.upper = upper
    result.gap = gap
    result.iterations = iteration
    result.paths = len(active)
    result.continuum_weights = {
        id: float(best_rho[index]) for id, index in problem.super_nodes.items()
    }
    if snapshot:
        density = np.zeros(problem.cell_count)
        cells = problem.variable >= 0
        density[cells] = best_rho[problem.variable[cells]]
        result.density = density.tolist()
        result.active_paths = [list(p) for p in active]
    logger.info(
        "modulus %.6g (lower %.6g, gap %.2g) after %d rounds", upper, lower, gap, iteration
    )
    return result


def brute_force_modulus(problem: ModulusProblem, max_paths: int = 200_000) -> float:
    """Exact discrete modulus over every simple path of a tiny problem."""
    graph = nx.DiGraph()
    for e, (u, v) in enumerate(zip(problem.tails.tolist(), problem.heads.tolist())):
        graph.add_edge(u, v, index=e)
    graph.add_edges_from(("source", int(s)) for s in problem.sources)
    graph.add_edges_from((int(t), "target") for t in problem.targets)
    if not (graph.has_node("source") and graph.has_node("target")):
        return math.inf
    rows = []
    for path in nx.all_simple_paths(graph, "source", "target"):
        edges = [graph.edges[u, v]["index"] for u, v in zip(path[1:-2], path[2:-1])]
        row = sparse.csr_matrix(problem.lengths[edges].sum(axis=0))
        if row.nnz == 0:
            return math.inf
        rows.append(row)
        if len(rows) > max_paths:
            raise GeometryError(f"more than {max_paths} simple paths")
    if not rows:
        return math.inf
    _, value, _ = _least_distance(sparse.vstack(rows).tocsr(), problem.mass_weights)
    return value


def ring_modulus(A: PeripheralContinuum, B: PeripheralContinuum) -> float:
    """Modulus of the curves joining two disjoint disks on the sphere.

    The complement of the disks is conformally a round annulus of radii
    ``r < R``; its modulus is ``2 pi / log(R / r)``.
    """
    if A.kind != "disk" or B.kind != "disk":
        raise GeometryError("ring modulus needs two disks")
    c1, r1 = A.planar_circle
    c2, r2 = B.planar_circle
    delta = (abs(c1 - c2) ** 2 - r1**2 - r2**2) / (2 * r1 * r2)
    if delta <= 1:
        raise GeometryError("the disks are not disjoint")
    return 2 * math.pi / math.log(delta + math.sqrt(delta * delta - 1))


def square_problem(
    resolution: int = GRID_RESOLUTION, stencil: str = "wide", mode: str = "plain"
) -> ModulusProblem:
    """Curves joining the vertical sides of the unit square; modulus 1."""
    h = 1 / resolution
    source = PeripheralContinuum.polygon(1, [-1 - 1j, -1j, 2j, -1 + 2j])
    target = PeripheralContinuum.polygon(2, [1 - 1j, 2 - 1j, 2 + 2j, 1 + 2j])
    return discretize(
        (-h, 0.0, 1 + h, 1.0),
        Packing(),
        resolution,
        source=source,
        target=target,
        mode=mode,
        stencil=stencil,
    )


def annulus_problem(
    r: float = 1.0, R: float = math.e, resolution: int = 48, stencil: str = "wide"
) -> ModulusProblem:
    """Curves joining the boundary circles of ``r < |z| < R``; modulus
    ``2 pi / log(R / r)``."""
    if not 0 < r < R:
        raise GeometryError("annulus radii must satisfy 0 < r < R")
    if resolution <= 2:
        raise GeometryError("annulus resolution must exceed 2")
    h = 2 * R / (resolution - 2)
    side = R + h
    return discretize(
        (-side, -side, side, side),
        Packing(),
        resolution,
        source=PeripheralContinuum.from_planar_circle(1, 0j, r),
        target=Region(PeripheralContinuum.from_planar_circle(2, 0j, R), complement=True),
        mode="plain",
        stencil=stencil,
    )


def _setup_of(problem: ModulusProblem | ModulusSetup) -> ModulusSetup:
    return problem.setup if isinstance(problem, ModulusProblem) else problem


def _outline(window: Window, per_side: int = 64) -> np.ndarray:
    x0, y0, x1, y1 = window
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    t = np.arange(per_side) / per_side
    return np.concatenate(
        [a + (b - a) * t for a, b in zip(corners, corners[1:] + corners[:1])]
    )


def _bounds(points: np.ndarray) -> Window:
    return (
        float(points.real.min()),
        float(points.imag.min()),
        float(points.real.max()),
        float(points.imag.max()),
    )


def _map_continuum(
    K: PeripheralContinuum, M: CircleDomainMap, samples: int = 256
) -> PeripheralContinuum:
    for q in M.domain:
        if q == K:
            return M.circle(q.id)
    if K.is_degenerate:
        image = M(np.asarray([K.planar_circle[0]]))[0]
        return PeripheralContinuum.point(K.id, complex(image))
    boundary = K.boundary_samples(samples)
    if not np.all(M.in_domain(boundary, strict=True)):
        raise GeometryError(f"the boundary of region {K.id} leaves the domain of the map")
    return PeripheralContinuum.polygon(K.id, M(boundary).tolist())


def _image_setup(
    setup: ModulusSetup, M: CircleDomainMap | MobiusTransform
) -> ModulusSetup:
    if setup.domain is not None:
        raise GeometryError("invariance checks need a setup bounded by its window only")
    outline = _outline(setup.window)
    if isinstance(M, MobiusTransform):
        image = M.apply(outline)

        def transform(K: PeripheralContinuum) -> PeripheralContinuum:
            return K.transformed(M)

        packing = [K.transformed(M) for K in setup.packing]
    else:
        if not np.all(M.in_domain(outline, strict=True)):
            raise GeometryError("the window outline must lie in the domain of the map")
        image = M(outline)

        def transform(K: PeripheralContinuum) -> PeripheralContinuum:
            return _map_continuum(K, M)

        packing = [M.circle(K.id) for K in setup.packing]
    if not np.all(np.isfinite(image)):
        raise GeometryError("the map sends the window outline to infinity")
    return ModulusSetup(
        window=_bounds(image),
        source=Region(transform(setup.source.continuum), setup.source.complement),
        target=Region(transform(setup.target.continuum), setup.target.complement),
        packing=Packing(packing),
        domain=Region(PeripheralContinuum.polygon(0, image.tolist())),
        forbidden=setup.forbidden,
        mode=setup.mode,
        resolution=setup.resolution,
        stencil=setup.stencil,
    )


def _is_identity(M: CircleDomainMap | MobiusTransform) -> bool:
    if isinstance(M, MobiusTransform):
        a, b, c, d = M.coefficients
        return b == 0 and c == 0 and a == d
    return len(M) == 0


def modulus_invariance_check(
    problem: ModulusProblem | ModulusSetup,
    M: CircleDomainMap | MobiusTransform,
    tol: float = MODULUS_TOLERANCE,
    tolerance: float = 0.05,
) -> CheckResult:
    """Compares the modulus of a family with the modulus of its image.

    The image family joins the images of the terminals inside the image of
    the window; continua go to their images (the output circles of a
    circle domain map). ``ratio`` is original over image.
    """
    setup = _setup_of(problem)
    original = compute_modulus(
        problem if isinstance(problem, ModulusProblem) else build_problem(setup), tol
    ).value
    if _is_identity(M):
        image = original
    else:
        image = compute_modulus(build_problem(_image_setup(setup, M)), tol).value
    if original == image:
        ratio = 1.0
    else:
        ratio = original / image if image else math.inf
    return CheckResult(
        "modulus_invariance",
        passed=bool(abs(ratio - 1) <= tolerance),
        values={"ratio": ratio, "original": original, "image": image},
    )


def nondegeneracy_probe(
    P: Packing,
    E: Region | PeripheralContinuum,
    probes: Sequence[Region | PeripheralContinuum],
    ns: Sequence[int],
    window: Window,
    exclusions: Sequence[Sequence[int]] = ((),),
    resolution: int = GRID_RESOLUTION,
    tol: float = MODULUS_TOLERANCE,
) -> ProbeTable:
    """Transboundary moduli between ``E`` and every probe, in the complement of the
    first ``n`` continua for each ``n``, with curves avoiding the continua of each exclusion set.

    Exclusion ids above ``n`` are ignored for that ``n``.
    """
    source = _as_region(E)
    table = ProbeTable()
    for n in ns:
        packing = P.first(n)
        ids = {K.id for K in packing}
        for excluded in exclusions:
            avoid = sorted(i for i in excluded if i in ids)
            for k, probe in enumerate(probes):
                problem = discretize(
                    window,
                    packing,
                    resolution,
                    source=source,
                    target=_as_region(probe),
                    forbidden=avoid,
                )
                value = compute_modulus(problem, tol).value
                table.rows.append(ProbeRow(k, n, avoid, value))
                logger.debug("probe %d, n=%d, J0=%s: %.6g", k, n, avoid, value)
    if table.rows:
        table.witness = min(table.rows, key=lambda row: row.value)
        table.minimum = table.witness.value
    return table


def relative_distance_sweep(
    deltas: Sequence[float] = (12, 25, 50, 100),
    resolution: int = 12,
    packing: Optional[Packing] = None,
    tol: float = MODULUS_TOLERANCE,
    slack: float = 0.01,
) -> CheckResult:
    """Transboundary modulus between two unit-diameter disks at relative
    distance ``Δ``, for growing ``Δ``; passes if it does not increase."""
    values: Dict[str, float] = {}
    previous = math.inf
    passed = True
    for delta in deltas:
        offset = (delta + 1) / 2
        window = (-offset - 2, -3.0, offset + 2, 3.0)
        problem = discretize(
            window,
            packing if packing is not None else Packing(),
            resolution,
            source=PeripheralContinuum.from_planar_circle(1, complex(-offset), 0.5),
            target=PeripheralContinuum.from_planar_circle(2, complex(offset), 0.5),
        )
        value = compute_modulus(problem, tol).value
        values[f"delta={delta:g}"] = value
        passed &= value <= previous * (1 + slack)
        previous = value
    return CheckResult("relative_distance", passed=bool(passed), values=values)
