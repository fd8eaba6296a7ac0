"""Exception types shared across the package."""


class OrdstatError(Exception):
    """Base class for all errors raised by ordstat."""


class SequenceError(OrdstatError, ValueError):
    """Invalid input sequence: empty, non-finite values, or bad indices."""


class RankError(OrdstatError, ValueError):
    """Rank outside 1..N for the given sequence."""


class BudgetError(OrdstatError, RuntimeError):
    """Estimated work exceeds the configured recursion budget."""


class ExprError(OrdstatError, ValueError):
    """Malformed expression, bad evaluation input, or wrong expression form."""


class TextParseError(OrdstatError, ValueError):
    """Text that does not parse as a number list or as a formula."""
