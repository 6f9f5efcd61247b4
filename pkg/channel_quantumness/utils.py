import math
import re

# --- Exceptions ---
# Library code raises these; the CLI maps them onto exit codes.


class QuantumnessError(Exception):
    pass


class InputError(QuantumnessError, ValueError):
    """Rejected input. Reported as a usage error (exit code 2) by the CLI."""


class DimensionMismatchError(InputError):
    pass


class UnsupportedDimensionError(InputError):
    pass


class InvalidMatrixError(InputError):
    pass


class InvalidStateError(InputError):
    pass


class InvalidBlochVectorError(InputError):
    pass


class ChannelParameterError(InputError):
    pass


class InvalidKernelValueError(ChannelParameterError):
    pass


class IncompleteChannelError(InputError):
    pass


class UnknownChannelError(InputError):
    pass


class MissingParameterError(InputError):
    pass


class SweepSpecError(InputError):
    pass


class HypothesisViolationError(InputError):
    pass


class OptimizerConfigError(InputError):
    pass


class ConsistencyError(QuantumnessError, ArithmeticError):
    """A quantity that must be real carried an imaginary residue above tolerance."""


# --- Argument parsing ---

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _parse_float(text: str, context: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"{context}: '{text}' is not a number.") from None
    if not math.isfinite(value):
        raise InputError(f"{context}: '{text}' is not finite.")
    return value


def parse_assignments(items: list[str] | None) -> dict[str, float]:
    """
    Parses ``--set`` values of the form ``k=v[,k=v...]``.
    The option may be repeated; later assignments override earlier ones.
    """
    params: dict[str, float] = {}
    for item in items or []:
        for chunk in item.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            name, sep, raw = chunk.partition("=")
            name = name.strip()
            if not sep or not _NAME_RE.match(name):
                raise InputError(f"Malformed assignment '{chunk}', expected name=value.")
            params[name] = _parse_float(raw.strip(), f"parameter '{name}'")
    return params


def parse_sweep(text: str) -> tuple[str, float, float, float]:
    """Parses ``--sweep k=start:stop:step``."""
    name, sep, bounds = text.partition("=")
    name = name.strip()
    parts = bounds.split(":")
    if not sep or not _NAME_RE.match(name) or len(parts) != 3:
        raise SweepSpecError(f"Malformed sweep '{text}', expected name=start:stop:step.")
    start, stop, step = (_parse_float(p.strip(), f"sweep '{name}'") for p in parts)
    return name, start, stop, step
