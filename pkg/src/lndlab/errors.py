"""Shared exception types.

The CLI maps these onto exit codes: user-facing input problems (parse
errors, ring mismatches, violated preconditions) are "usage" failures,
while InternalInvariantError marks a broken internal certificate and is
never expected in correct use.
"""


class LndLabError(Exception):
    """Base class for all errors raised by this package."""


class PolyParseError(LndLabError):
    """Polynomial text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RingMismatch(LndLabError):
    """Operands live in different polynomial rings."""


class ArityMismatch(LndLabError):
    """A point or image list has the wrong number of components."""


class TangencyError(LndLabError):
    """Proposed derivation images do not preserve the defining ideal."""

    def __init__(self, defining, residue):
        super().__init__(
            f"images are not tangent to {defining}: residue {residue} is not in the ideal"
        )
        self.defining = defining
        self.residue = residue


class ShearConditionViolated(LndLabError):
    """Multiplier f has D(f) != 0, so f*D is not a shear of D."""

    def __init__(self, residue):
        super().__init__(f"D(f) = {residue} is nonzero")
        self.residue = residue


class OvershearConditionViolated(LndLabError):
    """Multiplier f has D^2(f) != 0, so f*D is not an overshear of D."""

    def __init__(self, residue):
        super().__init__(f"D^2(f) = {residue} is nonzero")
        self.residue = residue


class PointNotOnVariety(LndLabError):
    """An exact point fails a defining equation."""


class UncertifiedDerivation(LndLabError):
    """An operation that needs a nilpotency certificate got a bare derivation."""


class InternalInvariantError(LndLabError):
    """A certificate or self-check failed; indicates a bug, not bad input."""
