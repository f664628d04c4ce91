from typing import NamedTuple, Sequence, Tuple


class KinkPanelError(ValueError):
    """Base class of all errors raised by kinkpanel"""

    # usage errors are the caller's fault (bad input files, unknown names),
    # everything else is an estimation failure
    usage = False


class RowError(NamedTuple):
    source: str
    line: int
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.source}:{self.line}: {self.field}: {self.message}"


class IngestError(KinkPanelError):
    usage = True

    def __init__(self, message: str, errors: Sequence[RowError] = ()):
        self.errors: Tuple[RowError, ...] = tuple(errors)
        if self.errors:
            shown = "\n".join(f"  {e}" for e in self.errors[:20])
            more = len(self.errors) - 20
            if more > 0:
                shown += f"\n  ... and {more} more"
            message = f"{message}\n{shown}"
        super().__init__(message)


class SpecError(KinkPanelError):
    usage = True


class ConfigError(KinkPanelError):
    usage = True


class IdentificationError(KinkPanelError):
    def __init__(self, message: str, column: str = ""):
        self.column = column
        super().__init__(message)


class ConvergenceError(KinkPanelError):
    def __init__(self, sweeps: int, max_change: float):
        self.sweeps = sweeps
        self.max_change = max_change
        super().__init__(
            f"within transformation did not converge after {sweeps} sweeps"
            f" (last max change {max_change:.3e})"
        )


class GridError(KinkPanelError):
    pass


class BootstrapError(KinkPanelError):
    pass
