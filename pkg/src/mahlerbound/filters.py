"""Instance filters for exhaustive scans, as pluggy plugins.

A filter implements ``accept_instance(polynomial, profile)`` and returns False to drop a
polynomial, True to keep it, or None to abstain. An instance is scanned only when no
registered filter rejects it. Third-party filters register under the ``mahlerbound.filters``
entry point group."""

from logging import getLogger
from typing import Optional

import pluggy

from mahlerbound.nonreciprocal import NonreciprocalProfile
from mahlerbound.poly import IntPolynomial

logger = getLogger(__name__)

PROJECT_NAME = "mahlerbound"
ENTRY_POINT_GROUP = "mahlerbound.filters"

hookspec = pluggy.HookspecMarker(PROJECT_NAME)
hookimpl = pluggy.HookimplMarker(PROJECT_NAME)

# ==========================================================================================
#                         Hook Specifications
# ==========================================================================================


class FilterSpec:
    @hookspec
    def accept_instance(
        self, polynomial: IntPolynomial, profile: NonreciprocalProfile
    ) -> Optional[bool]:
        """Whether the scan should check ``polynomial``; None abstains"""


# ==========================================================================================
#                         Built-in Filters
# ==========================================================================================


class UnitEndpointsFilter:
    """Keeps polynomials with |a_0| = |a_n| = 1"""

    @hookimpl
    def accept_instance(
        self, polynomial: IntPolynomial, profile: NonreciprocalProfile
    ) -> Optional[bool]:
        return abs(profile.a0) == 1 and abs(profile.an) == 1


class OddAlphaFilter:
    """Keeps polynomials whose alpha is odd"""

    @hookimpl
    def accept_instance(
        self, polynomial: IntPolynomial, profile: NonreciprocalProfile
    ) -> Optional[bool]:
        return profile.alpha is not None and profile.alpha % 2 == 1


class MinAlphaFilter:
    """Keeps polynomials with alpha >= minimum"""

    def __init__(self, minimum: int):
        self.minimum = minimum

    @hookimpl
    def accept_instance(
        self, polynomial: IntPolynomial, profile: NonreciprocalProfile
    ) -> Optional[bool]:
        return profile.alpha is not None and profile.alpha >= self.minimum


# ==========================================================================================
#                         Plugin Manager
# ==========================================================================================


def filter_manager(
    *,
    unit_endpoints_only: bool = False,
    odd_alpha_only: bool = False,
    min_alpha: Optional[int] = None,
    load_entry_points: bool = False,
) -> pluggy.PluginManager:
    """A plugin manager carrying the requested built-in filters"""

    manager = pluggy.PluginManager(PROJECT_NAME)
    manager.add_hookspecs(FilterSpec)

    if unit_endpoints_only:
        manager.register(UnitEndpointsFilter(), name="unit-endpoints")
    if odd_alpha_only:
        manager.register(OddAlphaFilter(), name="odd-alpha")
    if min_alpha is not None:
        manager.register(MinAlphaFilter(min_alpha), name="min-alpha")

    if load_entry_points:
        loaded = manager.load_setuptools_entrypoints(ENTRY_POINT_GROUP)
        logger.debug(f"Loaded {loaded} filter plugins from {ENTRY_POINT_GROUP}")

    return manager


def accepts(
    manager: pluggy.PluginManager, polynomial: IntPolynomial, profile: NonreciprocalProfile
) -> bool:
    """True unless some registered filter returned False"""

    return all(manager.hook.accept_instance(polynomial=polynomial, profile=profile))
