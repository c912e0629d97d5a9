"""Command-line tokenizer for mahlerbound.

Raw arguments become Flag (``-v``, ``--deg-max``), Assignment (``--deg-max=6``) or Value
tokens. Polynomial text and negative numbers (``-x^3+1``, ``-2``) are always values."""

import re
from typing import Annotated, Callable, Iterable, Iterator, Union

from pydantic import BaseModel, Field

# ==========================================================================================
#                         Constants
# ==========================================================================================

DIGITS = "0123456789"
LOWER = "abcdefghijklmnopqrstuvwxyz"
UPPER = LOWER.upper()
ALPHA = LOWER + UPPER
ALNUM = ALPHA + DIGITS

END_OF_OPTIONS = "--"

# A leading minus followed by a digit, or by x and a polynomial operator, reads as a value
NEGATIVE_VALUE_PATTERN = re.compile(r"^-(\d|x(\^|\*|[+-]|$))")

# ==========================================================================================
#                         Models
# ==========================================================================================


class Flag(BaseModel):
    """A command-line flag, Eg. -v or --deg-max"""

    sentinel: Annotated[
        str, Field(description="Character(s) at the front which say this is a flag Eg. -")
    ]
    name: Annotated[str, Field(description="Name of the flag Eg. v or deg-max")]
    full: Annotated[str, Field(description="The entire flag Eg. --deg-max")]


class Assignment(BaseModel):
    """A command-line flag with an attached value, Eg. --precision=256"""

    sentinel: Annotated[str, Field(description="Eg. - or --")]
    name: Annotated[str, Field(description="Name of the flag Eg. precision")]
    flag: Annotated[str, Field(description="The flag part Eg. --precision")]
    delimiter: Annotated[str, Field(description="Separator between flag and value Eg. =")]
    value: Annotated[str, Field(description="The value Eg. 256")]
    full: Annotated[str, Field(description="The entire assignment Eg. --precision=256")]


class Value(BaseModel):
    """A bare command-line value, Eg. x^3-x-1 or 1,-1,-1"""

    value: Annotated[str, Field(description="The value")]
    full: Annotated[str, Field(description="The raw argument")]


Argument = Union[Flag, Assignment, Value]

Arguments = Iterable[Argument]

ArgumentParser = Callable[[str], Iterator[Argument]]
"""Yields the parsed argument, or nothing when the raw string is not its form"""

ArgumentParsers = Iterable[ArgumentParser]

InputArguments = Iterable[str]

# ==========================================================================================
#                         Functions
# ==========================================================================================


def _is_delimited_case(input_string: str, delimiter: str) -> bool:
    if not input_string:
        return False

    if input_string[0] not in ALNUM or input_string[-1] not in ALNUM:
        return False

    if delimiter * 2 in input_string:
        return False

    trimmed = input_string.replace(delimiter, "")

    return all(c in ALNUM for c in trimmed) and trimmed.islower()


def is_kebab_case(input_string: str) -> bool:
    return _is_delimited_case(input_string, "-")


def is_snake_case(input_string: str) -> bool:
    return _is_delimited_case(input_string, "_")


def to_snake_case(name: str) -> str:
    """The parameter name a flag binds to, Eg. deg-max -> deg_max"""

    return name.replace("-", "_")


def is_negative_value(input_argument: str) -> bool:
    """True for arguments like -2, -1,0,1 or -x^3+1 which are values despite the dash"""

    return bool(NEGATIVE_VALUE_PATTERN.match(input_argument))


def parse_single_dash_flag(input_argument: str) -> Iterator[Argument]:
    """One letter flags only, Eg. -v but not -vq"""

    if len(input_argument) != 2 or input_argument[0] != "-":
        return

    if input_argument[1] not in ALPHA or is_negative_value(input_argument):
        return

    yield Flag(sentinel="-", name=input_argument[1], full=input_argument)


def parse_double_dash_flag(input_argument: str) -> Iterator[Argument]:
    """Eg. --deg-max but not --deg-max=6 or --6"""

    if not input_argument.startswith("--") or len(input_argument) < 3:
        return

    if input_argument[2] not in ALPHA or "=" in input_argument:
        return

    name = input_argument[2:]

    if not (is_snake_case(name) or is_kebab_case(name)):
        return

    yield Flag(sentinel="--", name=name, full=input_argument)


def parse_single_dash_assignment(input_argument: str) -> Iterator[Argument]:
    """Eg. -p=256; the value may be empty"""

    if len(input_argument) < 3 or input_argument[0] != "-":
        return

    if input_argument[1] not in ALPHA or input_argument[2] != "=":
        return

    yield Assignment(
        sentinel="-",
        name=input_argument[1],
        flag=input_argument[:2],
        delimiter="=",
        value=input_argument[3:],
        full=input_argument,
    )


def parse_double_dash_assignment(input_argument: str) -> Iterator[Argument]:
    """Eg. --c=-2 or --format=plain; only the first = separates"""

    if not input_argument.startswith("--") or len(input_argument) < 4:
        return

    if input_argument[2] not in ALPHA or "=" not in input_argument:
        return

    flag, value = input_argument.split("=", 1)

    name = flag[2:]

    if not (is_snake_case(name) or is_kebab_case(name)):
        return

    yield Assignment(
        sentinel="--",
        name=name,
        flag=flag,
        delimiter="=",
        value=value,
        full=input_argument,
    )


# ==========================================================================================
#                         Sane Defaults
# ==========================================================================================

DEFAULT_ARGUMENT_PARSERS: ArgumentParsers = [
    parse_double_dash_assignment,
    parse_single_dash_assignment,
    parse_double_dash_flag,
    parse_single_dash_flag,
]

# ==========================================================================================


def parse_arguments(
    input_arguments: InputArguments, parsers: ArgumentParsers = DEFAULT_ARGUMENT_PARSERS
) -> Arguments:
    """Tokenize raw arguments; everything after a bare -- is a value"""

    only_values = False
    for input_argument in input_arguments:
        if only_values:
            yield Value(value=input_argument, full=input_argument)
            continue

        if input_argument == END_OF_OPTIONS:
            only_values = True
            continue

        if is_negative_value(input_argument):
            yield Value(value=input_argument, full=input_argument)
            continue

        for parser in parsers:
            # The first parser which successfully parses the argument wins
            parsed = False
            for argument in parser(input_argument):
                yield argument
                parsed = True

            if parsed:
                break
        else:
            yield Value(value=input_argument, full=input_argument)
