"""The ``circlelib`` command line tool.

Every subcommand reads and writes JSON artifacts; artifacts record the
:class:`~circleLib.objects.config.RunConfig` hash, seed and library version of
the run that wrote them. Exit codes: 0 on success, 1 on bad input geometry
or arguments, 2 on numerical non-convergence (and on failed verification), 3
on I/O or artifact errors. Errors are printed to stderr as one JSON object.

Examples::

    circlelib generate carpet --level 2 -o carpet.json
    circlelib uniformize carpet.json -n 5 --tol 1e-6 -o map.json
    circlelib verify map.json --suite normalization
    circlelib render map.json
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence

from circleLib.artifacts import load_artifact, write_artifact
from circleLib.constants import (
    BOUNDARY_SAMPLES,
    GRID_RESOLUTION,
    KOEBE_TOLERANCE,
    LAURENT_DEGREE,
    MAX_SWEEPS,
    MODULUS_TOLERANCE,
    OUTPUT_DIR_ENV,
    QUADRATURE_TOLERANCE,
)
from circleLib.errors import ArtifactError, Error, GeometryError, UsageError
from circleLib.generators import generate
from circleLib.lab import collect_sequence, upper_gradient_spot_check
from circleLib.modulus import (
    annulus_problem,
    compute_modulus,
    discretize,
    nondegeneracy_probe,
    square_problem,
)
from circleLib.objects.artifacts import MapArtifact, ModulusArtifact, SequenceArtifact
from circleLib.objects.config import RunConfig
from circleLib.objects.misc import BoundingBox
from circleLib.objects.packing import Packing
from circleLib.render import render
from circleLib.serde import json as json_backend
from circleLib.uniformize import koebe_iterate
from circleLib.verify import SUITES, verify

__all__ = ["build_parser", "main"]

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ("carpet", "random_l2", "round", "points", "thin")
MODULUS_KINDS = ("square", "annulus", "packing")
VERIFY_FAILED = 2
"""Exit code of a verification whose suite did not pass."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _bounded(kind: type, strict: bool) -> Callable[[str], Any]:
    """An argparse type accepting positive (or with ``strict=False``,
    non-negative) numbers of ``kind``."""
    word = "positive" if strict else "non-negative"

    def convert(text: str) -> Any:
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid number: {text!r}") from None
        if not (value > 0 or (value == 0 and not strict)):
            raise argparse.ArgumentTypeError(f"must be {word}, got {text}")
        return value

    return convert


_count = _bounded(int, strict=True)
_index = _bounded(int, strict=False)
_positive = _bounded(float, strict=True)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--output-dir",
        help=f"directory of relative output paths (overridden by ${OUTPUT_DIR_ENV})",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed of random choices")


def _add_koebe(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="packing JSON")
    parser.add_argument("--tol", type=_positive, default=KOEBE_TOLERANCE)
    parser.add_argument("--max-sweeps", type=_count, default=MAX_SWEEPS)
    parser.add_argument("--degree", type=_index, default=LAURENT_DEGREE)
    parser.add_argument("--samples", type=_count, default=BOUNDARY_SAMPLES)
    for name, default in (("inf", None), ("0", None), ("1", None)):
        parser.add_argument(
            f"--zeta-{name}",
            default=default,
            help=f"point sent to {name}, e.g. 'inf' or '0.5+2j'",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="circlelib",
        description="Uniformize packings onto circle domains and compute "
        "transboundary moduli.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="more log output"
    )
    parser.add_argument("-q", "--quiet", action="count", default=0, help="less log output")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = commands.add_parser("generate", help="write a packing family")
    p.add_argument("kind", choices=GENERATOR_KINDS)
    p.add_argument("--level", type=_index, default=2, help="carpet generations")
    p.add_argument("--count", type=_count, help="number of continua")
    p.add_argument("--exponent", type=_positive, help="diameter decay exponent")
    p.add_argument(
        "--aspects", type=_positive, nargs="+", help="thin rectangle length to width ratios"
    )
    p.add_argument("-o", "--output", help="default: <kind>.json")
    _add_common(p)

    p = commands.add_parser("uniformize", help="map the first n continua onto a circle domain")
    _add_koebe(p)
    p.add_argument("-n", type=_index, help="number of continua, default all")
    p.add_argument("-o", "--output", default="map.json")
    _add_common(p)

    p = commands.add_parser("modulus", help="compute a discrete modulus")
    p.add_argument("kind", choices=MODULUS_KINDS)
    p.add_argument("input", nargs="?", help="packing JSON (packing kind only)")
    p.add_argument("--resolution", type=_count, default=GRID_RESOLUTION)
    p.add_argument("--stencil", choices=("wide", "rook"), default="wide")
    p.add_argument("--mode", choices=("plain", "transboundary"))
    p.add_argument("--tol", type=_positive, default=MODULUS_TOLERANCE)
    p.add_argument("--inner", type=_positive, default=1.0, help="annulus inner radius")
    p.add_argument("--outer", type=_positive, default=math.e, help="annulus outer radius")
    p.add_argument("-n", type=_index, help="continua of the packing to use")
    p.add_argument("--source", type=int, help="id of the source continuum")
    p.add_argument("--target", type=int, help="id of the target continuum")
    p.add_argument(
        "--forbid", type=int, nargs="*", default=[], help="ids curves must avoid"
    )
    p.add_argument(
        "--probe-ns",
        type=_index,
        nargs="*",
        default=[],
        help="also tabulate the modulus against the target for these n",
    )
    p.add_argument("-o", "--output", default="modulus.json")
    _add_common(p)

    p = commands.add_parser("sequence", help="uniformize the first n continua for several n")
    _add_koebe(p)
    p.add_argument("--ns", type=_index, nargs="+", required=True)
    p.add_argument(
        "--curves", type=_index, default=0, help="upper gradient curves per map"
    )
    p.add_argument("-o", "--output", default="sequence.json")
    _add_common(p)

    p = commands.add_parser("verify", help="run a verification suite")
    p.add_argument("artifact")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--tolerance", type=_positive, default=QUADRATURE_TOLERANCE)
    p.add_argument("-o", "--output", help="default: <artifact>-<suite>.json")
    _add_common(p)

    p = commands.add_parser("render", help="draw an artifact as SVG")
    p.add_argument("artifact")
    _add_common(p)
    return parser


def _output_dir(args: argparse.Namespace) -> str:
    return os.environ.get(OUTPUT_DIR_ENV) or args.output_dir or os.curdir


def _output_path(args: argparse.Namespace, name: str) -> str:
    return os.path.join(_output_dir(args), name)


def _load_packing(path: str) -> Packing:
    artifact = load_artifact(path)
    if not isinstance(artifact, Packing):
        raise ArtifactError(f"{path} holds a {artifact.kind} artifact, not a packing")
    return artifact


def _normalization(args: argparse.Namespace) -> List[str]:
    given = [args.zeta_inf, args.zeta_0, args.zeta_1]
    if any(z is None for z in given):
        if any(z is not None for z in given):
            raise UsageError("give all of --zeta-inf, --zeta-0 and --zeta-1, or none")
        return []
    return [str(z) for z in given]


def _config(args: argparse.Namespace, **kwargs: Any) -> RunConfig:
    return RunConfig(args.command, seed=args.seed, output_dir=_output_dir(args), **kwargs)


def _generate(args: argparse.Namespace) -> List[str]:
    params: Dict[str, Any] = {}
    if args.kind == "carpet":
        params["level"] = args.level
    elif args.kind == "thin":
        if args.aspects:
            params["aspects"] = tuple(args.aspects)
    else:
        params["seed"] = args.seed
        if args.count is not None:
            params["count"] = args.count
        if args.exponent is not None and args.kind != "points":
            params["exponent"] = args.exponent
    config = _config(
        args,
        parameters=[f"kind={args.kind}"] + [f"{k}={v}" for k, v in sorted(params.items())],
    )
    try:
        packing = generate(args.kind, **params)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, Error):
            raise
        raise UsageError(str(exc)) from exc
    packing.provenance = config.provenance()
    path = _output_path(args, args.output or f"{args.kind}.json")
    write_artifact(packing, path)
    return [path]


def _uniformize(args: argparse.Namespace) -> List[str]:
    normalization = _normalization(args)
    config = _config(
        args,
        input_path=args.input,
        tolerance=args.tol,
        max_sweeps=args.max_sweeps,
        degree=args.degree,
        samples=args.samples,
        n=args.n,
        normalization=normalization,
    )
    packing = _load_packing(args.input)
    M = koebe_iterate(
        packing,
        args.n,
        *(normalization or (None, None, None)),
        args.tol,
        args.max_sweeps,
        args.degree,
        args.samples,
    )
    path = _output_path(args, args.output)
    write_artifact(MapArtifact(M, config.provenance(), config), path)
    return [path]


def _window(packing: Packing, margin: float = 0.25) -> BoundingBox:
    bounds = packing.getBounds()
    if bounds is None:
        return BoundingBox(-1.0, -1.0, 1.0, 1.0)
    grow = margin * max(bounds.width, bounds.height, 1e-3)
    return bounds.expanded(grow)


def _modulus(args: argparse.Namespace) -> List[str]:
    parameters = [f"kind={args.kind}", f"stencil={args.stencil}"]
    reference: Optional[float] = None
    probes = None
    if args.kind == "square":
        mode = args.mode or "plain"
        problem = square_problem(args.resolution, args.stencil, mode)
        reference = 1.0
    elif args.kind == "annulus":
        mode = "plain"
        problem = annulus_problem(args.inner, args.outer, args.resolution, args.stencil)
        reference = 2 * math.pi / math.log(args.outer / args.inner)
        parameters += [f"inner={args.inner!r}", f"outer={args.outer!r}"]
    else:
        if args.input is None or args.source is None or args.target is None:
            raise UsageError("modulus packing needs INPUT, --source and --target")
        mode = args.mode or "transboundary"
        full = _load_packing(args.input)
        packing = full.first(args.n if args.n is not None else len(full))
        try:
            source, target = packing.by_id(args.source), packing.by_id(args.target)
        except KeyError as exc:
            raise GeometryError(
                f"no continuum with id {exc} among the first {len(packing)}"
            ) from None
        crossed = Packing([K for K in packing if K.id not in (source.id, target.id)])
        window = tuple(_window(packing))
        problem = discretize(
            window,
            crossed,
            args.resolution,
            source=source,
            target=target,
            mode=mode,
            forbidden=args.forbid,
            stencil=args.stencil,
        )
        parameters += [f"source={args.source}", f"target={args.target}"]
        parameters += [f"forbid={sorted(args.forbid)}", f"n={args.n}"]
        if args.probe_ns:
            others = Packing([K for K in full if K.id not in (source.id, target.id)])
            probes = nondegeneracy_probe(
                others,
                source,
                [target],
                args.probe_ns,
                tuple(_window(full)),
                exclusions=[args.forbid],
                resolution=args.resolution,
                tol=args.tol,
            )
            parameters.append(f"probe_ns={args.probe_ns}")
    parameters.append(f"mode={mode}")
    config = _config(
        args,
        input_path=args.input,
        modulus_tolerance=args.tol,
        resolution=args.resolution,
        parameters=parameters,
    )
    result = compute_modulus(problem, args.tol)
    artifact = ModulusArtifact(
        problem.setup, result, config.provenance(), reference, probes, config
    )
    path = _output_path(args, args.output)
    write_artifact(artifact, path)
    return [path]


def _sequence(args: argparse.Namespace) -> List[str]:
    normalization = _normalization(args)
    config = _config(
        args,
        input_path=args.input,
        tolerance=args.tol,
        max_sweeps=args.max_sweeps,
        degree=args.degree,
        samples=args.samples,
        ns=list(args.ns),
        normalization=normalization,
        parameters=[f"curves={args.curves}"],
    )
    packing = _load_packing(args.input)
    report, maps = collect_sequence(
        packing,
        args.ns,
        *(normalization or (None, None, None)),
        tol=args.tol,
        max_sweeps=args.max_sweeps,
        degree=args.degree,
        samples=args.samples,
        seed=args.seed,
        config_hash=config.config_hash(),
    )
    if args.curves:
        for M in maps:
            report.upper_gradient.extend(
                upper_gradient_spot_check(M, count=args.curves, seed=args.seed)
            )
    artifact = SequenceArtifact(
        packing.first(args.ns[-1]), report, config.provenance(), maps, config
    )
    path = _output_path(args, args.output)
    write_artifact(artifact, path)
    return [path]


def _verify(args: argparse.Namespace) -> List[str]:
    config = _config(
        args,
        input_path=args.artifact,
        quadrature_tolerance=args.tolerance,
        parameters=[f"suite={args.suite}"],
    )
    report = verify(
        args.artifact, args.suite, args.seed, args.tolerance, config.provenance()
    )
    stem = os.path.splitext(os.path.basename(args.artifact))[0]
    path = _output_path(args, args.output or f"{stem}-{args.suite}.json")
    write_artifact(report, path)
    args.failed = not report.passed
    return [path]


def _render(args: argparse.Namespace) -> List[str]:
    return render(args.artifact, _output_dir(args))


COMMANDS = {
    "generate": _generate,
    "uniformize": _uniformize,
    "modulus": _modulus,
    "sequence": _sequence,
    "verify": _verify,
    "render": _render,
}


def _report_error(exc: Error) -> int:
    payload = json_backend.dumps(exc.to_dict(), sort_keys=True, default=str)
    sys.stderr.write(payload.decode("utf-8") + "\n")
    return exc.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs the command line tool and returns its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _report_error(exc)
    level = logging.WARNING + 10 * (args.quiet - args.verbose)
    logging.basicConfig(
        level=max(logging.DEBUG, min(level, logging.CRITICAL)),
        format="%(levelname)s:%(name)s: %(message)s",
    )
    if args.command is None:
        parser.print_help(sys.stderr)
        return _report_error(UsageError("a command is required"))

    args.failed = False
    try:
        written = COMMANDS[args.command](args)
    except Error as exc:
        logger.debug("%s failed", args.command, exc_info=True)
        return _report_error(exc)
    except OSError as exc:
        return _report_error(ArtifactError(str(exc)))
    for path in written:
        print(path)
    if args.failed:
        logger.warning("verification suite %s failed", args.suite)
        return VERIFY_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
