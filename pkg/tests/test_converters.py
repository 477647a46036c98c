from __future__ import annotations

import json
import math
from typing import Any

import pytest

from circleLib.objects import (
    CheckResult,
    MobiusTransform,
    Packing,
    PeripheralContinuum,
    Provenance,
    RunConfig,
    SampledSet,
    SpherePoint,
)

# isort: off
cattrs = pytest.importorskip("cattrs")
from circleLib.converters import (  # noqa: E402
    binary_converter,
    format_float,
    register_hooks,
    structure,
    unstructure,
)


def _plain(data: Any) -> Any:
    # tuples and lists compare unequal, compare what a JSON reader would see
    return json.loads(json.dumps(data))


@pytest.mark.parametrize(
    "obj, expected",
    [
        (SpherePoint(0.5 - 2j), ["0.5", "-2.0"]),
        (SpherePoint.infinity(), "inf"),
        (
            PeripheralContinuum.point(1, 0.5 + 1j),
            {"id": 1, "kind": "point", "center": ["0.5", "1.0"]},
        ),
        (
            PeripheralContinuum.disk(2, 0j, 0.5),
            {"id": 2, "kind": "disk", "center": ["0.0", "0.0"], "radius": "0.5"},
        ),
        (
            PeripheralContinuum.polygon(3, [0, 1, 1j]),
            {
                "id": 3,
                "kind": "polygon",
                "vertices": [["0.0", "0.0"], ["1.0", "0.0"], ["0.0", "1.0"]],
            },
        ),
        (MobiusTransform(), {}),
        (
            MobiusTransform(0j, -1 + 0j, 1 + 0j, 0j),
            {
                "a": ["0.0", "0.0"],
                "b": ["-1.0", "0.0"],
                "c": ["1.0", "0.0"],
                "d": ["0.0", "0.0"],
            },
        ),
        (CheckResult("disjoint", True), {"name": "disjoint", "passed": True}),
        (
            CheckResult("fatness", False, {"tau": 0.25}, True, "thin"),
            {
                "name": "fatness",
                "passed": False,
                "values": {"tau": "0.25"},
                "informational": True,
                "message": "thin",
            },
        ),
        (
            RunConfig("generate"),
            {"command": "generate", "sphere_radius": "1.0", "seed": 0},
        ),
        (
            RunConfig("uniformize", "carpet.json", seed=3, n=5, tolerance=1e-8),
            {
                "command": "uniformize",
                "input_path": "carpet.json",
                "sphere_radius": "1.0",
                "seed": 3,
                "tolerance": "1e-08",
                "n": 5,
            },
        ),
        (
            Provenance("abc", 0, "1.0"),
            {"config_hash": "abc", "seed": 0, "version": "1.0"},
        ),
        (
            Packing(),
            {"continua": [], "sphere_radius": "1.0", "schema": "v1", "kind": "packing"},
        ),
        (
            Packing([PeripheralContinuum.point(1, 2j)], "one", tail_index=2),
            {
                "continua": [{"id": 1, "kind": "point", "center": ["0.0", "2.0"]}],
                "label": "one",
                "sphere_radius": "1.0",
                "schema": "v1",
                "kind": "packing",
                "tail_index": 2,
            },
        ),
        (
            SampledSet([1j], [4, 2, 4]),
            {"points": [["0.0", "1.0"]], "touched": [2, 4]},
        ),
    ],
)
def test_unstructure_structure(obj: Any, expected: Any) -> None:
    assert _plain(unstructure(obj)) == expected
    assert structure(expected, type(obj)) == obj


def test_format_float_round_trips() -> None:
    for value in (0.1, 1 / 3, 2.0**-1074, 1e300, -0.0, math.pi):
        assert float(format_float(value)) == value
    assert format_float(math.inf) == "inf"


def test_unstructure_numpy_scalars() -> None:
    np = pytest.importorskip("numpy")
    assert unstructure(np.float64(0.5), float) == "0.5"
    assert unstructure(np.complex128(1 - 1j), complex) == ["1.0", "-1.0"]


def test_binary_converter_keeps_native_floats() -> None:
    K = PeripheralContinuum.disk(2, 0.25 + 0j, 0.5)
    data = binary_converter.unstructure(K)
    assert data == {"id": 2, "kind": "disk", "center": [0.25, 0.0], "radius": 0.5}
    assert binary_converter.structure(data, PeripheralContinuum) == K


@pytest.mark.parametrize("forbid_extra_keys", [True, False])
def test_structure_forbid_extra_keys(forbid_extra_keys: bool) -> None:
    conv = cattrs.Converter(
        forbid_extra_keys=forbid_extra_keys,
        detailed_validation=False,
    )
    register_hooks(conv)
    data = {"name": "a", "passed": True, "foo": "bar"}
    if forbid_extra_keys:
        with pytest.raises(
            cattrs.errors.ForbiddenExtraKeysError,
            match="Extra fields in constructor for .*: foo",
        ):
            conv.structure(data, CheckResult)
    else:
        assert conv.structure(data, CheckResult) == CheckResult("a", True)


@pytest.mark.parametrize(
    "omit_if_default, obj, expected",
    [
        pytest.param(
            True,
            CheckResult("a", True),
            {"name": "a", "passed": True},
            id="True-CheckResult",
        ),
        pytest.param(
            False,
            CheckResult("a", True),
            {
                "name": "a",
                "passed": True,
                "values": {},
                "informational": False,
                "message": "",
            },
            id="False-CheckResult",
        ),
        pytest.param(
            True,
            SpherePoint(1 + 0j),
            ["1.0", "0.0"],
            id="True-SpherePoint",
        ),
    ],
)
def test_omit_if_default(obj: Any, expected: Any, omit_if_default: bool) -> None:
    conv = cattrs.Converter(omit_if_default=omit_if_default)
    register_hooks(conv)
    assert conv.unstructure(obj) == expected
    assert conv.structure(expected, type(obj)) == obj


def test_structure_accepts_numbers_for_floats() -> None:
    data = {"id": 1, "kind": "disk", "center": [0, 0], "radius": 0.5}
    K = structure(data, PeripheralContinuum)
    assert K == PeripheralContinuum.disk(1, 0j, 0.5)
