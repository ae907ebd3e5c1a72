"""Number backends used throughout the package.

Every analytic routine is generic over two interchangeable scalar types:
exact rationals (``fractions.Fraction``) and IEEE doubles.  Exact values
reproduce published constants bit for bit; doubles are used where
eigenvalues force us out of the rational field.  Comparisons of float
results against expected values must always use an explicit tolerance.
"""

from __future__ import annotations

import re
from fractions import Fraction

# Dead zone for sign classification under the float backend.  The exact
# backend decides signs exactly and never consults this.
FAIR_TOLERANCE = 1e-12

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class ScalarParseError(ValueError):
    """Text that is not an integer or an integer ratio."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a canonical-form Fraction.

    >>> parse_rational("2/6")
    Fraction(1, 3)
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ScalarParseError(f"not a rational literal: {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ScalarParseError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_scalar(x) -> str:
    """Canonical text form: ``p/q`` with no spaces, ``p`` for integers,
    shortest round-trip decimal for floats."""
    if isinstance(x, (Fraction, int)):
        return str(x)
    return repr(float(x))


def to_float(x) -> float:
    """Nearest double to the exact value (identity on floats)."""
    return float(x)


def is_exact(x) -> bool:
    """True when ``x`` carries exact (rational) arithmetic."""
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)
