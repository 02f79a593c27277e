"""Exceptions shared across the package."""


class PoringLabError(Exception):
    """Base class for package-specific failures."""


class NotModuleFinite(PoringLabError):
    """Order-mode closure failed to stabilize (non-integral generator)."""


class TheoremViolation(PoringLabError):
    """A verified mathematical invariant failed; this must never happen on
    valid inputs and indicates a bug, not a bad input."""
