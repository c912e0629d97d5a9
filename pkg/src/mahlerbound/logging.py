from logging import DEBUG, INFO, WARNING, basicConfig, getLogger

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "mahlerbound"


def level_for(verbose: bool = False, quiet: bool = False) -> int:
    """DEBUG with --verbose, WARNING with --quiet, otherwise INFO"""

    if verbose:
        return DEBUG
    if quiet:
        return WARNING
    return INFO


def configure(level: int = INFO):
    """Configure logging to standard error, leaving standard output to command results."""
    basicConfig(
        level=WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True)],
        force=True,
    )

    getLogger(PACKAGE_LOGGER).setLevel(level)
