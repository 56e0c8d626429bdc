"""Shared exception types for the engine."""


class ProcohomError(Exception):
    """Base class for all engine errors."""


class BudgetExceeded(ProcohomError):
    """A computation would exceed a configured size budget."""


class CompositionNonzero(ProcohomError):
    """Two consecutive differentials do not compose to zero."""


class InvalidSubgroup(ProcohomError):
    """A subgroup descriptor fails its validity or normality check."""


class NotAHomomorphism(ProcohomError):
    """An index map between group tables is not a homomorphism."""


class UnsupportedGroupShape(ProcohomError):
    """The requested operation only supports a restricted descriptor grammar."""


class UnknownFormat(ProcohomError):
    """An unrecognized chart or report format was requested."""


class ScenarioInvalid(ProcohomError):
    """A scenario file failed parsing or validation."""
