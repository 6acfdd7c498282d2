"""Exception hierarchy for weilkit.

Every rejection the kernel can make is a distinct exception type so the
CLI can map them onto its exit-code contract (2 = parse/usage, 3 =
semantic rejection) and so tests can assert on the precise failure mode.
"""

from __future__ import annotations


class WeilkitError(Exception):
    """Base class for all weilkit errors."""


class ParseError(WeilkitError):
    """Malformed polynomial/expression/config text.

    Carries the offending position when known.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ImproperIdeal(WeilkitError):
    """The presented ideal is the whole ring (the quotient would be zero)."""


class BasePointViolation(WeilkitError):
    """A nilpotent-part constraint on a point/element was violated."""


class IdealViolation(WeilkitError):
    """Candidate morphism data fails to annihilate the source ideal."""


class AlgebraMismatch(WeilkitError):
    """Operands belong to different algebras (or wrong arity for one)."""


class ScalarModeError(WeilkitError):
    """Exact-rational and float scalars were mixed, or an operation
    cannot be carried out exactly in rational mode."""


class DomainError(WeilkitError):
    """A primitive's guard fails at the augmentation (log at 0, division
    by an element with zero augmentation, sqrt at 0, ...)."""


class DegreeOverflow(WeilkitError):
    """A substitution would exceed the degree bound of a polynomial
    fragment; reported rather than silently truncated."""


class ConfigError(WeilkitError):
    """Malformed verify-suite configuration."""
