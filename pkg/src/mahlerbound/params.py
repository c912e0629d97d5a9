"""Binding parsed command-line tokens to the parameters of command functions"""

import inspect
from enum import Enum, auto, unique
from typing import Annotated, Any, Callable, Iterable, Mapping, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from mahlerbound.args import Argument, Assignment, Flag, Value, to_snake_case
from mahlerbound.errors import CommandLineError

# ==========================================================================================
#                         Enums
# ==========================================================================================


@unique
class ParameterKind(Enum):
    """The 'kind' of parameter"""

    POSITIONAL_ONLY = auto()
    POSITIONAL_OR_KEYWORD = auto()
    VAR_POSITIONAL = auto()
    KEYWORD_ONLY = auto()
    VAR_KEYWORD = auto()


PARAMETER_KINDS = {
    inspect.Parameter.POSITIONAL_ONLY: ParameterKind.POSITIONAL_ONLY,
    inspect.Parameter.POSITIONAL_OR_KEYWORD: ParameterKind.POSITIONAL_OR_KEYWORD,
    inspect.Parameter.VAR_POSITIONAL: ParameterKind.VAR_POSITIONAL,
    inspect.Parameter.KEYWORD_ONLY: ParameterKind.KEYWORD_ONLY,
    inspect.Parameter.VAR_KEYWORD: ParameterKind.VAR_KEYWORD,
}

# ==========================================================================================
#                         Models
# ==========================================================================================


class Parameter(BaseModel):
    """A callable parameter"""

    name: Annotated[str, Field(description="The name of the parameter")]
    kind: Annotated[ParameterKind, Field(description="The kind of parameter")]
    default: Annotated[Any, Field(description="The default value of the parameter")]
    annotation: Annotated[Any, Field(description="The annotation of the parameter")]

    @property
    def required(self) -> bool:
        return self.default is inspect.Parameter.empty

    @property
    def positional(self) -> bool:
        return self.kind in (ParameterKind.POSITIONAL_ONLY, ParameterKind.POSITIONAL_OR_KEYWORD)

    @property
    def is_switch(self) -> bool:
        return self.annotation is bool


class RuntimeSignature(BaseModel):
    """A callable signature, keeping the inspect.Signature it came from"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    parameters: Annotated[
        Sequence[Parameter], Field(description="The parameters of the callable")
    ]
    signature: inspect.Signature

    def parameter(self, name: str) -> Optional[Parameter]:
        return next((p for p in self.parameters if p.name == name), None)


# ==========================================================================================
#                        Free Functions
# ==========================================================================================


def convert_parameter_kind(kind: Any) -> ParameterKind:
    """Convert an inspect parameter kind to ParameterKind"""

    try:
        return PARAMETER_KINDS[kind]
    except KeyError:
        raise ValueError(f"Unknown ParameterKind: {kind}") from None


def inspect_callable(func: Callable) -> RuntimeSignature:
    """Inspect a Callable and return its Signature"""

    if not callable(func):
        raise ValueError("func is not callable")

    inspect_signature = inspect.signature(func)

    parameters = [
        Parameter(
            name=parameter.name,
            kind=convert_parameter_kind(parameter.kind),
            default=parameter.default,
            annotation=parameter.annotation,
        )
        for parameter in inspect_signature.parameters.values()
    ]

    return RuntimeSignature(parameters=parameters, signature=inspect_signature)


def convert_value(parameter: Parameter, raw: str) -> Any:
    """Validate a raw string against the parameter's annotation"""

    if parameter.annotation is inspect.Parameter.empty:
        return raw

    try:
        return TypeAdapter(parameter.annotation).validate_python(raw)
    except ValidationError as error:
        message = error.errors()[0]["msg"]
        raise CommandLineError(f"Invalid value {raw!r} for {parameter.name}: {message}") from None


def bind_arguments(
    signature: RuntimeSignature,
    arguments: Iterable[Argument],
    aliases: Optional[Mapping[str, str]] = None,
) -> dict[str, Any]:
    """Keyword arguments for a call, from Flag, Assignment and Value tokens

    Flags name parameters in kebab or snake case; ``aliases`` maps short names. Boolean
    parameters are switches, every other flag takes the following value. Bare values fill
    the positional parameters in order."""

    aliases = aliases or {}
    bound: dict[str, Any] = {}
    positionals: list[str] = []

    def lookup(name: str, full: str) -> Parameter:
        parameter = signature.parameter(to_snake_case(aliases.get(name, name)))
        if parameter is None or parameter.kind is ParameterKind.VAR_KEYWORD:
            raise CommandLineError(f"Unknown option {full}")
        if parameter.name in bound:
            raise CommandLineError(f"Option {full} given more than once")
        return parameter

    tokens = iter(arguments)
    for token in tokens:
        if isinstance(token, Value):
            positionals.append(token.value)

        elif isinstance(token, Assignment):
            parameter = lookup(token.name, token.flag)
            bound[parameter.name] = convert_value(parameter, token.value)

        elif isinstance(token, Flag):
            parameter = lookup(token.name, token.full)
            if parameter.is_switch:
                bound[parameter.name] = True
                continue

            following = next(tokens, None)
            if not isinstance(following, Value):
                raise CommandLineError(f"Option {token.full} requires a value")
            bound[parameter.name] = convert_value(parameter, following.value)

    open_positionals = [p for p in signature.parameters if p.positional and p.name not in bound]
    if len(positionals) > len(open_positionals):
        raise CommandLineError(f"Unexpected argument {positionals[len(open_positionals)]!r}")
    for parameter, raw in zip(open_positionals, positionals):
        bound[parameter.name] = convert_value(parameter, raw)

    missing = [p.name for p in signature.parameters if p.required and p.name not in bound]
    if missing:
        raise CommandLineError(f"Missing required argument {missing[0]}")

    return bound
