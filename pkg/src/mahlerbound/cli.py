"""The mahlerbound command line.

    mahlerbound [--precision BITS] [--format json|plain] [--verbose|--quiet] [--workers N]
                COMMAND [ARGS...]

Every command prints one CommandResult: JSON on standard output by default, or aligned
``key: value`` lines with ``--format plain``. Logs go to standard error. Exit codes are 0 on
success, 2 for input errors, 3 for numeric failures and 4 when a scan finds a polynomial
below the bound."""

import sys
from logging import getLogger
from pathlib import Path
from typing import IO, Annotated, Any, Callable, Literal, Mapping, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console

from mahlerbound.args import Argument, Flag, Value, parse_arguments, to_snake_case
from mahlerbound.certificate import certify_normalized
from mahlerbound.errors import CommandLineError, InputError, NumericError
from mahlerbound.logging import configure, level_for
from mahlerbound.mahler import graeffe_measure, is_kronecker, mahler_measure, root_partition
from mahlerbound.nonreciprocal import detect_k, golden_ratio_consequence, theorem_bound
from mahlerbound.params import RuntimeSignature, bind_arguments, inspect_callable
from mahlerbound.poly import (
    IntPolynomial,
    format_dense,
    format_sparse,
    is_reciprocal,
    normalize_signs,
    parse_polynomial,
    reciprocal,
    strip_zero_roots,
)
from mahlerbound.scan import (
    ScanConfig,
    odd_alpha_survey,
    scan_bounds,
    scan_polynomials,
    write_histogram_csv,
)
from mahlerbound.settings import Settings
from mahlerbound.sharp_family import SharpFamilyParams, verify_sharpness

logger = getLogger(__name__)

# ==========================================================================================
#                         Constants
# ==========================================================================================

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERIC_ERROR = 3
EXIT_VIOLATION = 4

SHORT_ALIASES = {"p": "precision", "v": "verbose", "q": "quiet", "w": "workers"}

# ==========================================================================================
#                         Models
# ==========================================================================================


class GlobalOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    settings: Settings
    format: Literal["json", "plain"] = "json"
    verbose: bool = False
    quiet: bool = False


class CommandStatus(BaseModel):
    state: Literal["ok", "error"]
    code: int
    message: Optional[str] = None


class CommandResult(BaseModel):
    """What every command prints; payload is present exactly when state is ok"""

    command: Annotated[Optional[str], Field(description="The command as given")]
    input: Annotated[Optional[str], Field(description="Input polynomial in dense form")] = None
    payload: Optional[dict[str, Any]] = None
    status: CommandStatus


class Outcome(BaseModel):
    """What a command function hands back to the dispatcher"""

    input: Optional[IntPolynomial] = None
    payload: dict[str, Any]
    code: int = EXIT_OK
    message: Optional[str] = None


class Streams(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    stdin: Any
    stdout: Any


# ==========================================================================================
#                         Commands
# ==========================================================================================


def _dump(model: BaseModel) -> dict[str, Any]:
    return model.model_dump(mode="json", by_alias=True)


def measure_command(options: GlobalOptions, streams: Streams, polynomial: str) -> Outcome:
    """Certified Mahler measure and root partition"""

    f = parse_polynomial(polynomial)
    result = mahler_measure(
        f,
        options.settings.precision_bits,
        max_precision_bits=options.settings.max_precision_bits,
    )
    payload = _dump(result) | {
        "root_partition": root_partition(result),
        "is_kronecker": is_kronecker(result),
    }
    return Outcome(input=f, payload=payload)


def bound_command(options: GlobalOptions, streams: Streams, polynomial: str) -> Outcome:
    """k, alpha and the lower bound"""

    f = parse_polynomial(polynomial)
    stripped, _ = strip_zero_roots(f)
    profile = theorem_bound(stripped, options.settings.precision_bits)
    payload = _dump(profile) | {"golden_ratio_consequence": golden_ratio_consequence(profile)}
    return Outcome(input=f, payload=payload)


def certify_command(
    options: GlobalOptions, streams: Streams, polynomial: str, trunc: Optional[int] = None
) -> Outcome:
    """Rebuild the lower bound argument for one polynomial and check every step"""

    f = parse_polynomial(polynomial)
    certificate = certify_normalized(f, trunc, options.settings.precision_bits)
    payload = _dump(certificate) | {"failed_checks": certificate.failed_checks()}
    message = None
    if not certificate.all_passed:
        message = f"Failed checks: {', '.join(certificate.failed_checks())}"
    return Outcome(input=f, payload=payload, message=message)


def family_command(
    options: GlobalOptions, streams: Streams, a: int, b: int, c: int, k: int, n: int
) -> Outcome:
    """Build a sharp family member and compare bound, closed form and measure"""

    params = SharpFamilyParams(a=a, b=b, c=c, k=k, n=n)
    report = verify_sharpness(params, options.settings.precision_bits)
    payload = _dump(report) | {"sharp": report.sharp}
    return Outcome(input=report.polynomial, payload=payload)


def _scan_config(options: GlobalOptions, **fields: Any) -> ScanConfig:
    return ScanConfig(
        precision_bits=options.settings.precision_bits,
        max_precision_bits=options.settings.max_precision_bits,
        worker_count=options.settings.worker_count,
        violation_tolerance_exponent=options.settings.violation_tolerance_exponent,
        **fields,
    )


def _read_corpus(streams: Streams, corpus: str) -> list[IntPolynomial]:
    if corpus == "-":
        lines = streams.stdin.read().splitlines()
    else:
        lines = Path(corpus).read_text().splitlines()
    return [parse_polynomial(line) for line in lines if line.strip() and not line.startswith("#")]


def scan_command(
    options: GlobalOptions,
    streams: Streams,
    deg_min: int = 1,
    deg_max: int = 6,
    height: int = 1,
    unit_endpoints: bool = False,
    odd_alpha: bool = False,
    min_alpha: Optional[int] = None,
    all_instances: bool = False,
    entry_points: bool = False,
    corpus: Optional[str] = None,
    histogram_csv: Optional[Path] = None,
) -> Outcome:
    """Check the bound on a coefficient box, or on a corpus with --corpus FILE|-"""

    config = _scan_config(
        options,
        degree_min=deg_min,
        degree_max=deg_max,
        height=height,
        unit_endpoints_only=unit_endpoints,
        odd_alpha_only=odd_alpha,
        min_alpha=min_alpha,
        require_applicable=not all_instances,
        load_entry_points=entry_points,
    )

    if corpus is None:
        report = scan_bounds(config, progress=not options.quiet)
    else:
        report = scan_polynomials(_read_corpus(streams, corpus), config)

    if histogram_csv is not None:
        write_histogram_csv(report.gap_histogram, histogram_csv)

    if report.violations:
        return Outcome(
            payload=_dump(report),
            code=EXIT_VIOLATION,
            message=f"Bound violated by {len(report.violations)} polynomials",
        )

    return Outcome(payload=_dump(report))


def survey_command(
    options: GlobalOptions,
    streams: Streams,
    deg_min: int = 1,
    deg_max: int = 8,
    height: int = 2,
    histogram_csv: Optional[Path] = None,
) -> Outcome:
    """Smallest gap to the bound among unit-endpoint polynomials with odd alpha"""

    config = _scan_config(options, degree_min=deg_min, degree_max=deg_max, height=height)
    survey = odd_alpha_survey(config, progress=not options.quiet)

    if histogram_csv is not None:
        write_histogram_csv(survey.histogram, histogram_csv)

    if survey.scan.violations:
        return Outcome(
            payload=_dump(survey),
            code=EXIT_VIOLATION,
            message=f"Bound violated by {len(survey.scan.violations)} polynomials",
        )

    return Outcome(payload=_dump(survey))


def reciprocal_command(options: GlobalOptions, streams: Streams, polynomial: str) -> Outcome:
    """f*, whether f = +-f*, the detected k and the sign-normalized form"""

    f = parse_polynomial(polynomial)
    stripped, zero_roots = strip_zero_roots(f)
    payload = {
        "reciprocal": format_dense(reciprocal(f)),
        "is_reciprocal": is_reciprocal(f),
        "k": detect_k(stripped),
        "zero_root_multiplicity": zero_roots,
        "normalized": format_dense(normalize_signs(stripped)),
        "sparse": format_sparse(f),
    }
    return Outcome(input=f, payload=payload)


def graeffe_command(
    options: GlobalOptions, streams: Streams, polynomial: str, iterations: int = 10
) -> Outcome:
    """An enclosure of M(f) from exact root squaring"""

    f = parse_polynomial(polynomial)
    stripped, _ = strip_zero_roots(f)
    interval = graeffe_measure(
        stripped, iterations, max_bits=options.settings.graeffe_max_bits
    )
    return Outcome(input=f, payload=_dump(interval))


COMMANDS: Mapping[str, Callable[..., Outcome]] = {
    "measure": measure_command,
    "bound": bound_command,
    "certify": certify_command,
    "family": family_command,
    "scan": scan_command,
    "survey": survey_command,
    "reciprocal": reciprocal_command,
    "graeffe": graeffe_command,
}

# ==========================================================================================
#                         Dispatch
# ==========================================================================================


def _global_options(
    precision: Optional[int] = None,
    format: Literal["json", "plain"] = "json",
    verbose: bool = False,
    quiet: bool = False,
    workers: Optional[int] = None,
) -> dict[str, Any]:
    return locals()


GLOBAL_SIGNATURE = inspect_callable(_global_options)


def command_signature(function: Callable[..., Outcome]) -> RuntimeSignature:
    """The parameters a command takes from the command line, after options and streams"""

    signature = inspect_callable(function)
    return signature.model_copy(update={"parameters": list(signature.parameters)[2:]})


def split_arguments(
    arguments: Sequence[Argument],
) -> tuple[Optional[str], list[Argument], list[Argument]]:
    """(command, global tokens, command tokens); global flags may appear anywhere"""

    command = None
    global_tokens: list[Argument] = []
    command_tokens: list[Argument] = []

    index = 0
    while index < len(arguments):
        token = arguments[index]
        index += 1

        if isinstance(token, Value):
            if command is None:
                command = token.value
            else:
                command_tokens.append(token)
            continue

        name = to_snake_case(SHORT_ALIASES.get(token.name, token.name))
        parameter = GLOBAL_SIGNATURE.parameter(name)
        if parameter is None:
            command_tokens.append(token)
            continue

        global_tokens.append(token)
        if isinstance(token, Flag) and not parameter.is_switch and index < len(arguments):
            global_tokens.append(arguments[index])
            index += 1

    return command, global_tokens, command_tokens


def resolve_options(
    tokens: Sequence[Argument], environ: Optional[Mapping[str, str]] = None
) -> GlobalOptions:
    """Global options; flags win over the environment"""

    bound = bind_arguments(GLOBAL_SIGNATURE, tokens, SHORT_ALIASES)
    settings = Settings.from_environ(environ)

    overrides = {}
    if bound.get("precision") is not None:
        overrides["precision_bits"] = bound["precision"]
    if bound.get("workers") is not None:
        overrides["worker_count"] = bound["workers"]
    if overrides:
        settings = Settings.model_validate(settings.model_dump() | overrides)

    return GlobalOptions(
        settings=settings,
        format=bound.get("format", "json"),
        verbose=bound.get("verbose", False),
        quiet=bound.get("quiet", False),
    )


def _flatten(value: Any, prefix: str) -> list[tuple[str, Any]]:
    if isinstance(value, dict):
        return [
            row for key, item in value.items() for row in _flatten(item, f"{prefix}.{key}")
        ]
    if isinstance(value, list):
        return [
            row for index, item in enumerate(value) for row in _flatten(item, f"{prefix}[{index}]")
        ]
    return [(prefix, value)]


def emit(result: CommandResult, output_format: str, stdout: IO[str]) -> None:
    if output_format == "json":
        stdout.write(result.model_dump_json(indent=2) + "\n")
        return

    console = Console(
        file=stdout, soft_wrap=True, highlight=False, markup=False, emoji=False
    )
    for key, value in result.model_dump(mode="json").items():
        for name, item in _flatten(value, key):
            console.print(f"{name}: {'' if item is None else item}")


def _error(command: Optional[str], code: int, error: Exception) -> CommandResult:
    return CommandResult(
        command=command, status=CommandStatus(state="error", code=code, message=str(error))
    )


def run(
    argv: Sequence[str],
    *,
    stdin: Optional[IO[str]] = None,
    stdout: Optional[IO[str]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> int:
    """Run one command and return its exit code"""

    streams = Streams(
        stdin=sys.stdin if stdin is None else stdin,
        stdout=sys.stdout if stdout is None else stdout,
    )

    arguments = list(parse_arguments(argv))
    command, global_tokens, command_tokens = split_arguments(arguments)

    try:
        options = resolve_options(global_tokens, environ)
    except (InputError, ValidationError) as error:
        emit(_error(command, EXIT_INPUT_ERROR, error), "json", streams.stdout)
        return EXIT_INPUT_ERROR

    configure(level_for(options.verbose, options.quiet))

    try:
        if command is None:
            raise CommandLineError(f"No command given; expected one of {', '.join(COMMANDS)}")
        if command not in COMMANDS:
            raise CommandLineError(f"Unknown command {command!r}")

        function = COMMANDS[command]
        keywords = bind_arguments(command_signature(function), command_tokens)

        logger.debug(f"Running {command} with {keywords}")
        outcome = function(options, streams, **keywords)

    except (InputError, ValidationError) as error:
        logger.debug(f"Input error: {error}")
        emit(_error(command, EXIT_INPUT_ERROR, error), options.format, streams.stdout)
        return EXIT_INPUT_ERROR

    except NumericError as error:
        logger.warning(f"Numeric failure: {error}")
        emit(_error(command, EXIT_NUMERIC_ERROR, error), options.format, streams.stdout)
        return EXIT_NUMERIC_ERROR

    result = CommandResult(
        command=command,
        input=format_dense(outcome.input) if outcome.input is not None else None,
        payload=outcome.payload,
        status=CommandStatus(state="ok", code=outcome.code, message=outcome.message),
    )
    emit(result, options.format, streams.stdout)

    return outcome.code
