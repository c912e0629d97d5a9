"""Per-thread mpmath contexts keyed by working precision.

mpmath's global ``mp`` context carries a mutable precision, so concurrent callers asking for
different precisions would race on it. Every computation here instead takes its own
``MPContext`` at a fixed precision; contexts are cached per thread."""

import threading
from typing import Annotated, Any

from mpmath import MPContext
from pydantic import PlainSerializer

_local = threading.local()

# ==========================================================================================
#                         Contexts
# ==========================================================================================


def context(precision_bits: int) -> MPContext:
    """An mpmath context working at ``precision_bits`` bits, private to the calling thread"""

    contexts: dict[int, MPContext] = _local.__dict__.setdefault("contexts", {})

    ctx = contexts.get(precision_bits)
    if ctx is None:
        ctx = MPContext()
        ctx.prec = precision_bits
        contexts[precision_bits] = ctx

    return ctx


def tolerance(exponent: int, precision_bits: int = 64) -> Any:
    """The number 2**-exponent as an mpf"""

    ctx = context(precision_bits)
    return ctx.ldexp(ctx.mpf(1), -exponent)


# ==========================================================================================
#                         Rendering
# ==========================================================================================


def render(value: Any, digits: int = 15) -> float:
    """Round an mpmath number to ``digits`` significant digits for JSON output"""

    ctx = context(64)
    return float(ctx.nstr(ctx.mpf(value), digits))


def render_complex(value: Any, digits: int = 15) -> dict[str, float]:
    ctx = context(64)
    z = ctx.mpc(value)
    return {"re": render(z.real, digits), "im": render(z.imag, digits)}


MpReal = Annotated[Any, PlainSerializer(render, return_type=float)]
"""A high-precision real (mpmath mpf), serialized at 15 significant digits"""

MpComplex = Annotated[Any, PlainSerializer(render_complex, return_type=dict)]
"""A high-precision complex (mpmath mpc), serialized as {"re": ..., "im": ...}"""
