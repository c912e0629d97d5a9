import inspect
from pathlib import Path
from typing import Literal, Optional

import pytest

from mahlerbound.args import parse_arguments
from mahlerbound.errors import CommandLineError
from mahlerbound.params import (
    ParameterKind,
    bind_arguments,
    convert_parameter_kind,
    inspect_callable,
)


def scan_like(
    deg_min: int = 1,
    deg_max: int = 6,
    unit_endpoints: bool = False,
    min_alpha: Optional[int] = None,
    histogram_csv: Optional[Path] = None,
):
    pass


def family_like(a: int, b: int, c: int, k: int, n: int):
    pass


def measure_like(polynomial: str, format: Literal["json", "plain"] = "json"):
    pass


def bind(func, argv, aliases=None):
    return bind_arguments(inspect_callable(func), list(parse_arguments(argv)), aliases)


def test_convert_parameter_kind():
    assert (
        convert_parameter_kind(inspect.Parameter.POSITIONAL_ONLY) is ParameterKind.POSITIONAL_ONLY
    )
    assert (
        convert_parameter_kind(inspect.Parameter.POSITIONAL_OR_KEYWORD)
        is ParameterKind.POSITIONAL_OR_KEYWORD
    )
    assert convert_parameter_kind(inspect.Parameter.VAR_POSITIONAL) is ParameterKind.VAR_POSITIONAL
    assert convert_parameter_kind(inspect.Parameter.KEYWORD_ONLY) is ParameterKind.KEYWORD_ONLY
    assert convert_parameter_kind(inspect.Parameter.VAR_KEYWORD) is ParameterKind.VAR_KEYWORD

    with pytest.raises(ValueError):
        convert_parameter_kind("Not a valid parameter kind")


def test_inspect_callable():
    signature = inspect_callable(scan_like)

    assert [p.name for p in signature.parameters] == [
        "deg_min",
        "deg_max",
        "unit_endpoints",
        "min_alpha",
        "histogram_csv",
    ]
    assert all(p.kind is ParameterKind.POSITIONAL_OR_KEYWORD for p in signature.parameters)
    assert signature.parameter("deg_max").default == 6
    assert signature.parameter("unit_endpoints").is_switch
    assert not signature.parameter("deg_max").is_switch
    assert signature.parameter("missing") is None
    assert isinstance(signature.signature, inspect.Signature)


def test_inspect_callable_kinds():
    def func(a: int, /, b: str, *rest: str, c: bool = False, **extra: int):
        pass

    kinds = [p.kind for p in inspect_callable(func).parameters]

    assert kinds == [
        ParameterKind.POSITIONAL_ONLY,
        ParameterKind.POSITIONAL_OR_KEYWORD,
        ParameterKind.VAR_POSITIONAL,
        ParameterKind.KEYWORD_ONLY,
        ParameterKind.VAR_KEYWORD,
    ]
    assert inspect_callable(func).parameter("a").required
    assert not inspect_callable(func).parameter("c").required


def test_inspect_callable_rejects_non_callable():
    with pytest.raises(ValueError):
        inspect_callable(5)


def test_bind_flags_and_assignments():
    bound = bind(
        scan_like,
        ["--deg-max", "4", "--unit-endpoints", "--min_alpha=2", "--histogram-csv", "gaps.csv"],
    )

    assert bound == {
        "deg_max": 4,
        "unit_endpoints": True,
        "min_alpha": 2,
        "histogram_csv": Path("gaps.csv"),
    }


def test_bind_negative_values():
    bound = bind(family_like, ["--a", "2", "--b", "-3", "--c=-2", "--k", "1", "--n", "5"])

    assert bound == {"a": 2, "b": -3, "c": -2, "k": 1, "n": 5}


def test_bind_positionals():
    assert bind(family_like, ["1", "1", "-1", "1", "5"]) == {
        "a": 1,
        "b": 1,
        "c": -1,
        "k": 1,
        "n": 5,
    }
    assert bind(family_like, ["--a", "1", "1", "-1", "1", "5"]) == {
        "a": 1,
        "b": 1,
        "c": -1,
        "k": 1,
        "n": 5,
    }
    assert bind(measure_like, ["-x^3+x+1"]) == {"polynomial": "-x^3+x+1"}


def test_bind_aliases():
    assert bind(measure_like, ["x-1", "-f", "plain"], {"f": "format"}) == {
        "polynomial": "x-1",
        "format": "plain",
    }


@pytest.mark.parametrize(
    "func, argv, message",
    [
        (scan_like, ["--deg-top", "4"], "Unknown option --deg-top"),
        (scan_like, ["--deg-max", "4", "--deg-max=5"], "Option --deg-max given more than once"),
        (scan_like, ["--deg-max"], "Option --deg-max requires a value"),
        (scan_like, ["--deg-max", "--unit-endpoints"], "Option --deg-max requires a value"),
        (scan_like, ["1", "2", "3", "4", "5", "6"], "Unexpected argument '6'"),
        (family_like, ["1", "1", "-1", "1"], "Missing required argument n"),
        (measure_like, [], "Missing required argument polynomial"),
    ],
)
def test_bind_errors(func, argv, message):
    with pytest.raises(CommandLineError) as info:
        bind(func, argv)

    assert info.value.message == message


def test_bind_invalid_values():
    with pytest.raises(CommandLineError) as info:
        bind(scan_like, ["--deg-max", "six"])

    assert "deg_max" in info.value.message

    with pytest.raises(CommandLineError):
        bind(measure_like, ["x", "--format", "yaml"])
