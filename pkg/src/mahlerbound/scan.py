"""Exhaustive checks of the k-nonreciprocal bound over boxes of integer polynomials.

The box of degree d and height h holds every f with a_n > 0, a_0 != 0 and |a_i| <= h. Since
f and -f have the same measure and the same bound, restricting to a_n > 0 loses nothing.
The box is split into shards on (degree, a_n, a_{n-1}); shards are scanned independently and
their reports merged, so the result does not depend on the number of workers."""

import csv
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from itertools import chain, product
from logging import getLogger
from pathlib import Path
from typing import Annotated, Any, Iterable, Iterator, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from mahlerbound.errors import GraeffeOverflowError, InvalidParametersError, NumericError
from mahlerbound.filters import accepts, filter_manager
from mahlerbound.mahler import (
    MahlerResult,
    circle_tolerance,
    graeffe_measure,
    is_kronecker,
    mahler_measure,
)
from mahlerbound.nonreciprocal import (
    NonreciprocalProfile,
    Triviality,
    bound_exceeds,
    golden_ratio_consequence,
    theorem_bound,
)
from mahlerbound.poly import IntPolynomial, format_sparse, require_nonzero, strip_zero_roots
from mahlerbound.precision import render, tolerance
from mahlerbound.settings import DEFAULT_SETTINGS

logger = getLogger(__name__)

# ==========================================================================================
#                         Constants
# ==========================================================================================

GAP_HISTOGRAM_EDGES = (1e-9, 1e-6, 1e-3, 1e-2, 1e-1, 0.5, 1.0, 2.0, 5.0)
"""Bin edges for measure - bound; the first bin is open below, the last open above"""

GRAEFFE_ITERATIONS = 10

# ==========================================================================================
#                         Models
# ==========================================================================================


class ScanConfig(BaseModel):
    """What to enumerate and which instances to check"""

    model_config = ConfigDict(frozen=True)

    degree_min: int = 1
    degree_max: int = 6
    height: int = 1
    require_applicable: Annotated[
        bool, Field(description="Only measure polynomials the bound applies to")
    ] = True
    precision_bits: int = DEFAULT_SETTINGS.precision_bits
    max_precision_bits: int = DEFAULT_SETTINGS.max_precision_bits
    worker_count: Annotated[int, Field(ge=1)] = DEFAULT_SETTINGS.worker_count
    unit_endpoints_only: bool = False
    odd_alpha_only: bool = False
    min_alpha: Optional[int] = None
    load_entry_points: Annotated[
        bool, Field(description="Also apply filter plugins installed under mahlerbound.filters")
    ] = False
    injected: Annotated[
        tuple[IntPolynomial, ...],
        Field(description="Polynomials checked in addition to the box"),
    ] = ()
    violation_tolerance_exponent: int = DEFAULT_SETTINGS.violation_tolerance_exponent

    @model_validator(mode="after")
    def _check_box(self) -> "ScanConfig":
        if self.degree_min < 1:
            raise InvalidParametersError("scan configuration", "degree_min >= 1")
        if self.degree_max < self.degree_min:
            raise InvalidParametersError("scan configuration", "degree_max >= degree_min")
        if self.height < 1:
            raise InvalidParametersError("scan configuration", "height >= 1")
        return self


class Shard(BaseModel):
    """All polynomials of one degree with fixed a_n and, for degree >= 2, fixed a_{n-1}"""

    model_config = ConfigDict(frozen=True)

    degree: int
    leading: int
    next_coefficient: Optional[int] = None


class Violation(BaseModel):
    """An instance whose certified measure fell below the bound"""

    polynomial: IntPolynomial
    bound: float
    measure: float
    residual: Annotated[float, Field(description="bound - (measure + error)")]
    graeffe_lower: Optional[float] = None
    graeffe_upper: Optional[float] = None


class IncompleteInstance(BaseModel):
    polynomial: IntPolynomial
    reason: str


class GapWitness(BaseModel):
    polynomial: IntPolynomial
    gap: float
    bound: float
    measure: float

    def sort_key(self) -> tuple[float, tuple[int, ...]]:
        return self.gap, self.polynomial.coeffs


class HistogramBin(BaseModel):
    lower: Optional[float]
    upper: Optional[float]
    count: int = 0


class RuntimeStats(BaseModel):
    elapsed_seconds: float
    shard_count: int
    worker_count: int


class ScanReport(BaseModel):
    """Aggregate outcome of a scan; shard reports merge into one of these"""

    total_enumerated: int = 0
    reciprocal_count: int = 0
    applicable_count: int = 0
    filtered_count: int = 0
    checked_count: int = 0
    nontrivial_count: int = 0
    retried_count: int = 0
    zero_roots_stripped: int = 0
    graeffe_disagreements: int = 0
    violations: list[Violation] = Field(default_factory=list)
    incomplete: list[IncompleteInstance] = Field(default_factory=list)
    nontrivial_exact_failures: list[IntPolynomial] = Field(default_factory=list)
    min_gap_witness: Optional[GapWitness] = None
    gap_histogram: list[HistogramBin] = Field(default_factory=lambda: _empty_histogram())
    min_measure_nonreciprocal: Optional[float] = None
    golden_min_measure: Annotated[
        Optional[float],
        Field(description="Smallest measure with |a_0| = |a_n| = 1 and alpha >= 2"),
    ] = None
    golden_min_bound: Optional[float] = None
    runtime_stats: Optional[RuntimeStats] = None

    def deterministic_view(self) -> dict[str, Any]:
        """Everything except timings, for comparing two runs"""

        return self.model_dump(mode="json", exclude={"runtime_stats"})


class SurveyReport(BaseModel):
    """Empirical gaps for unit endpoints and odd alpha; no sharpness claim is made"""

    instances: int
    no_instances: bool
    min_gap_odd_alpha: Optional[float]
    witness: Optional[GapWitness]
    histogram: list[HistogramBin]
    scan: ScanReport


# ==========================================================================================
#                         Enumeration
# ==========================================================================================


def _empty_histogram() -> list[HistogramBin]:
    lowers = (None,) + GAP_HISTOGRAM_EDGES
    uppers = GAP_HISTOGRAM_EDGES + (None,)
    return [HistogramBin(lower=lower, upper=upper) for lower, upper in zip(lowers, uppers)]


def _histogram_index(gap: float) -> int:
    return sum(1 for edge in GAP_HISTOGRAM_EDGES if gap >= edge)


def shards(config: ScanConfig) -> list[Shard]:
    """Disjoint pieces of the box, in enumeration order"""

    h = config.height
    pieces = []
    for degree in range(config.degree_min, config.degree_max + 1):
        for leading in range(1, h + 1):
            if degree == 1:
                pieces.append(Shard(degree=degree, leading=leading))
                continue
            for next_coefficient in range(-h, h + 1):
                pieces.append(
                    Shard(degree=degree, leading=leading, next_coefficient=next_coefficient)
                )
    return pieces


def enumerate_shard(shard: Shard, height: int) -> Iterator[IntPolynomial]:
    coefficients = range(-height, height + 1)
    constants = [a for a in coefficients if a != 0]

    top = (shard.leading,) if shard.next_coefficient is None else (
        shard.next_coefficient,
        shard.leading,
    )
    free = max(shard.degree - len(top), 0)

    for middle in product(coefficients, repeat=free):
        for constant in constants:
            yield IntPolynomial(coeffs=(constant, *middle, *top))


def enumerate_polynomials(config: ScanConfig) -> Iterator[IntPolynomial]:
    """Every f in the box exactly once: a_n > 0, a_0 != 0, |a_i| <= height"""

    return chain.from_iterable(enumerate_shard(shard, config.height) for shard in shards(config))


def enumeration_count(config: ScanConfig) -> int:
    """Size of the box, sum over d of h (2h+1)^(d-1) 2h"""

    h = config.height
    return sum(
        h * (2 * h + 1) ** (d - 1) * 2 * h
        for d in range(config.degree_min, config.degree_max + 1)
    )


# ==========================================================================================
#                         Per-Instance Checks
# ==========================================================================================


def _measure_with_retry(
    f: IntPolynomial, config: ScanConfig, report: ScanReport
) -> Optional[MahlerResult]:
    try:
        return mahler_measure(
            f, config.precision_bits, max_precision_bits=config.max_precision_bits
        )
    except NumericError as error:
        logger.info(f"Retrying {format_sparse(f)} at doubled precision: {error}")
        report.retried_count += 1

    try:
        return mahler_measure(
            f, 2 * config.precision_bits, max_precision_bits=2 * config.max_precision_bits
        )
    except NumericError as error:
        report.incomplete.append(IncompleteInstance(polynomial=f, reason=str(error)))
        return None


def _reverify(
    f: IntPolynomial, profile: NonreciprocalProfile, config: ScanConfig, report: ScanReport
) -> Optional[Violation]:
    """Recheck a violation candidate at 4x precision and against a Graeffe enclosure"""

    logger.warning(f"Violation candidate {format_sparse(f)}; re-verifying")

    bits = 4 * config.precision_bits
    try:
        result = mahler_measure(f, bits, max_precision_bits=max(bits, config.max_precision_bits))
    except NumericError as error:
        report.incomplete.append(IncompleteInstance(polynomial=f, reason=str(error)))
        return None

    bound = profile.bound_exact.value(bits)
    residual = bound - (result.measure + result.error_bound)
    if residual <= tolerance(config.violation_tolerance_exponent):
        logger.info(f"Candidate {format_sparse(f)} cleared at {bits} bits")
        return None

    graeffe_lower = graeffe_upper = None
    try:
        interval = graeffe_measure(f, GRAEFFE_ITERATIONS)
        graeffe_lower, graeffe_upper = render(interval.lower), render(interval.upper)
        if not interval.contains(result.measure):
            report.graeffe_disagreements += 1
    except GraeffeOverflowError as error:
        logger.info(f"No Graeffe enclosure for {format_sparse(f)}: {error}")

    logger.error(f"Bound violated by {format_sparse(f)}: residual {render(residual)}")

    return Violation(
        polynomial=f,
        bound=render(bound),
        measure=render(result.measure),
        residual=render(residual),
        graeffe_lower=graeffe_lower,
        graeffe_upper=graeffe_upper,
    )


def _record_gap(report: ScanReport, witness: GapWitness) -> None:
    report.gap_histogram[_histogram_index(witness.gap)].count += 1
    if report.min_gap_witness is None or witness.sort_key() < report.min_gap_witness.sort_key():
        report.min_gap_witness = witness


def _minimum(current: Optional[float], value: Optional[float]) -> Optional[float]:
    if value is None:
        return current
    if current is None:
        return value
    return min(current, value)


def check_instance(
    f: IntPolynomial, config: ScanConfig, report: ScanReport, manager: Any
) -> None:
    """Run one polynomial through the scan pipeline, updating ``report`` in place"""

    report.total_enumerated += 1

    profile = theorem_bound(f, config.precision_bits)
    if profile.k is None:
        report.reciprocal_count += 1
        if config.require_applicable:
            return
    if profile.theorem_applicable:
        report.applicable_count += 1
    elif config.require_applicable:
        return

    if not accepts(manager, f, profile):
        report.filtered_count += 1
        return

    if profile.triviality is Triviality.NONTRIVIAL:
        report.nontrivial_count += 1
        if not bound_exceeds(profile, profile.trivial_bound):
            report.nontrivial_exact_failures.append(f)

    if profile.k is None:
        return

    result = _measure_with_retry(f, config, report)
    if result is None:
        return

    report.checked_count += 1

    measure = result.measure
    if not is_kronecker(result) and measure > 1 + circle_tolerance(config.precision_bits):
        report.min_measure_nonreciprocal = _minimum(
            report.min_measure_nonreciprocal, render(measure)
        )

    if not profile.theorem_applicable:
        return

    bound = profile.bound_value
    if measure + result.error_bound < bound - tolerance(config.violation_tolerance_exponent):
        violation = _reverify(f, profile, config, report)
        if violation is not None:
            report.violations.append(violation)

    _record_gap(
        report,
        GapWitness(
            polynomial=f,
            gap=render(measure - bound),
            bound=render(bound),
            measure=render(measure),
        ),
    )

    if golden_ratio_consequence(profile):
        report.golden_min_measure = _minimum(report.golden_min_measure, render(measure))
        report.golden_min_bound = _minimum(report.golden_min_bound, render(bound))


def _manager(config: ScanConfig) -> Any:
    return filter_manager(
        unit_endpoints_only=config.unit_endpoints_only,
        odd_alpha_only=config.odd_alpha_only,
        min_alpha=config.min_alpha,
        load_entry_points=config.load_entry_points,
    )


def scan_shard(shard: Shard, config: ScanConfig) -> ScanReport:
    """Scan one shard; runs inside worker processes"""

    logger.debug(f"Starting shard {shard}")

    manager = _manager(config)
    report = ScanReport()
    for f in enumerate_shard(shard, config.height):
        check_instance(f, config, report, manager)

    logger.debug(f"Finished shard {shard}: {report.checked_count} checked")

    return report


def scan_polynomials(polys: Iterable[IntPolynomial], config: ScanConfig) -> ScanReport:
    """The scan pipeline over an explicit list of polynomials

    Roots at zero are stripped before checking and counted in zero_roots_stripped."""

    manager = _manager(config)
    report = ScanReport()
    for f in polys:
        require_nonzero(f, "scan_polynomials")
        stripped, zero_roots = strip_zero_roots(f)
        if zero_roots:
            report.zero_roots_stripped += 1
        check_instance(stripped, config, report, manager)

    return report


# ==========================================================================================
#                         Aggregation
# ==========================================================================================


def merge(reports: Sequence[ScanReport]) -> ScanReport:
    """Combine shard reports; the result does not depend on their order"""

    merged = ScanReport()
    counters = (
        "total_enumerated",
        "reciprocal_count",
        "applicable_count",
        "filtered_count",
        "checked_count",
        "nontrivial_count",
        "retried_count",
        "zero_roots_stripped",
        "graeffe_disagreements",
    )

    for report in reports:
        for counter in counters:
            setattr(merged, counter, getattr(merged, counter) + getattr(report, counter))

        merged.violations.extend(report.violations)
        merged.incomplete.extend(report.incomplete)
        merged.nontrivial_exact_failures.extend(report.nontrivial_exact_failures)

        for total, part in zip(merged.gap_histogram, report.gap_histogram):
            total.count += part.count

        witness = report.min_gap_witness
        if witness is not None and (
            merged.min_gap_witness is None or witness.sort_key() < merged.min_gap_witness.sort_key()
        ):
            merged.min_gap_witness = witness

        merged.min_measure_nonreciprocal = _minimum(
            merged.min_measure_nonreciprocal, report.min_measure_nonreciprocal
        )
        merged.golden_min_measure = _minimum(merged.golden_min_measure, report.golden_min_measure)
        merged.golden_min_bound = _minimum(merged.golden_min_bound, report.golden_min_bound)

    merged.violations.sort(key=lambda v: v.polynomial.coeffs)
    merged.incomplete.sort(key=lambda i: i.polynomial.coeffs)
    merged.nontrivial_exact_failures.sort(key=lambda f: f.coeffs)

    return merged


# ==========================================================================================
#                         Drivers
# ==========================================================================================


def _progress(enabled: bool) -> Progress:
    return Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=Console(stderr=True),
        disable=not enabled,
    )


def _run_shards(work: list[Shard], config: ScanConfig, progress: bool) -> list[ScanReport]:
    results: list[Optional[ScanReport]] = [None] * len(work)

    with _progress(progress) as bar:
        task = bar.add_task("Scanning shards", total=len(work))

        if config.worker_count == 1:
            for index, shard in enumerate(work):
                results[index] = scan_shard(shard, config)
                bar.advance(task)
        else:
            with ProcessPoolExecutor(max_workers=config.worker_count) as executor:
                futures = {
                    executor.submit(scan_shard, shard, config): index
                    for index, shard in enumerate(work)
                }
                for future in as_completed(futures):
                    results[futures[future]] = future.result()
                    bar.advance(task)

    return [result for result in results if result is not None]


def scan_bounds(config: ScanConfig, *, progress: bool = False) -> ScanReport:
    """Check the bound on every polynomial of the box plus the injected ones"""

    started = time.perf_counter()

    work = shards(config)
    logger.info(
        f"Scanning {enumeration_count(config)} polynomials in {len(work)} shards "
        f"with {config.worker_count} workers"
    )

    reports = _run_shards(work, config, progress)
    if config.injected:
        reports.append(scan_polynomials(config.injected, config))

    report = merge(reports)
    report.runtime_stats = RuntimeStats(
        elapsed_seconds=time.perf_counter() - started,
        shard_count=len(work),
        worker_count=config.worker_count,
    )

    if report.violations:
        logger.error(f"{len(report.violations)} violations found")
    if report.incomplete:
        logger.warning(f"{len(report.incomplete)} instances could not be certified")

    return report


def odd_alpha_survey(config: ScanConfig, *, progress: bool = False) -> SurveyReport:
    """Smallest observed measure - bound with |a_0| = |a_n| = 1 and alpha odd"""

    survey_config = config.model_copy(
        update={"unit_endpoints_only": True, "odd_alpha_only": True, "require_applicable": True}
    )
    report = scan_bounds(survey_config, progress=progress)

    witness = report.min_gap_witness
    if report.checked_count == 0:
        logger.info("No polynomial with unit endpoints and odd alpha in the box")

    return SurveyReport(
        instances=report.checked_count,
        no_instances=report.checked_count == 0,
        min_gap_odd_alpha=witness.gap if witness is not None else None,
        witness=witness,
        histogram=report.gap_histogram,
        scan=report,
    )


def write_histogram_csv(histogram: Sequence[HistogramBin], path: Path) -> None:
    """Write the gap histogram as lower,upper,count rows"""

    with path.open("w", newline="") as file:
        writer = csv.writer(file)
        writer.writerow(["lower", "upper", "count"])
        for row in histogram:
            writer.writerow(
                [
                    "" if row.lower is None else repr(row.lower),
                    "" if row.upper is None else repr(row.upper),
                    row.count,
                ]
            )
