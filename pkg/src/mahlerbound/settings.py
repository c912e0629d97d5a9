"""Runtime settings for mahlerbound, with environment overrides."""

import os
from typing import Annotated, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from mahlerbound.errors import InvalidParametersError

# ==========================================================================================
#                         Constants
# ==========================================================================================

ENV_PRECISION = "MAHLERBOUND_PRECISION"
ENV_MAX_PRECISION = "MAHLERBOUND_MAX_PRECISION"
ENV_WORKERS = "MAHLERBOUND_WORKERS"

# ==========================================================================================
#                         Models
# ==========================================================================================


class Settings(BaseModel):
    """Defaults shared by the library and the command line"""

    model_config = ConfigDict(frozen=True)

    precision_bits: Annotated[
        int, Field(ge=16, description="Working precision in bits for root finding")
    ] = 128
    max_precision_bits: Annotated[
        int, Field(ge=16, description="Cap for precision escalation in bits")
    ] = 1024
    graeffe_max_bits: Annotated[
        int,
        Field(ge=64, description="Largest coefficient bit length Graeffe may produce"),
    ] = 2_000_000
    worker_count: Annotated[
        int, Field(ge=1, description="Worker processes used by exhaustive scans")
    ] = 1
    violation_tolerance_exponent: Annotated[
        int,
        Field(ge=1, description="Violations are gaps below -2**-exponent"),
    ] = 40
    certificate_min_truncation: Annotated[
        int, Field(ge=1, description="Smallest default certificate truncation L")
    ] = 16

    @classmethod
    def from_environ(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """Build settings from environment variables, falling back to defaults"""

        environ = os.environ if environ is None else environ

        overrides: dict[str, str] = {}
        if ENV_PRECISION in environ:
            overrides["precision_bits"] = environ[ENV_PRECISION]
        if ENV_MAX_PRECISION in environ:
            overrides["max_precision_bits"] = environ[ENV_MAX_PRECISION]
        if ENV_WORKERS in environ:
            overrides["worker_count"] = environ[ENV_WORKERS]

        try:
            return cls.model_validate(overrides)
        except ValidationError as error:
            raise InvalidParametersError("environment settings", str(error)) from error


DEFAULT_SETTINGS = Settings()
