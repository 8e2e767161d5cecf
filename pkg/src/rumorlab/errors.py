"""Exception types shared across the package."""


class NumericFault(RuntimeError):
    """A numeric routine failed to converge or violated its own invariant.

    Raised only for faults that must not occur on valid inputs (e.g. a root
    finder exhausting its iteration cap); callers may map it to a dedicated
    process exit code.
    """
