"""Exception types shared across the package.

The CLI maps these onto its exit codes: invalid input and inapplicable
algorithms exit 2, tripped resource guards exit 3.
"""


class EffectorsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstanceError(EffectorsError):
    """A graph, instance file, or operation input is malformed."""


class NotApplicableError(EffectorsError):
    """An algorithm's preconditions do not hold for the given instance."""


class ResourceLimitError(EffectorsError):
    """An exact code path refused to run past its configured ceiling."""
