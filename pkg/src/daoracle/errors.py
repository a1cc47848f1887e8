"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed arguments: out-of-range indices, bad shapes, empty sets."""


class ParameterError(ValueError):
    """Inconsistent configuration (divisibility, sizing, feasibility checks)."""


class ConstructionError(RuntimeError):
    """A build step cannot proceed (rank deficiency, cycle-count overflow)."""


class UnsupportedRegimeError(RuntimeError):
    """Inputs outside the regime the closed-form accounting assumes."""


class InfeasibleError(Exception):
    """No parameter choice satisfies the requested bound.

    Deliberately not a ValueError: callers distinguish infeasibility
    (a legitimate analysis outcome) from malformed input.
    """
