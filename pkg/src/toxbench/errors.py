"""Exception hierarchy shared across the workbench."""


class ToxbenchError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(ToxbenchError):
    """An input file does not have the expected columns or layout."""


class CsvParseError(ToxbenchError):
    """A data row could not be parsed; carries the 1-based row number."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class LexiconError(ToxbenchError):
    """A lexicon file is missing or violates its format invariants."""


class StratificationError(ToxbenchError):
    """A class is too small for the requested partition scheme."""


class SamplingError(ToxbenchError):
    """Rebalancing cannot proceed (empty dataset or class)."""


class ContractError(ToxbenchError):
    """A caller violated an operation contract (e.g. dimension mismatch)."""


class CapabilityError(ToxbenchError):
    """The operation is not supported for this model family."""


class InsufficientDataError(ToxbenchError):
    """Too few instances for the requested statistic."""


class ConsistencyError(ToxbenchError):
    """Internal invariant violated; indicates a bug, not bad input."""
