"""Exception hierarchy shared by every stage of the pipeline."""


class SensorFFTError(Exception):
    """Base class. ``stage`` is filled in by the pipeline when known."""

    stage: str | None = None


class FormatError(SensorFFTError):
    pass


class RowError(SensorFFTError):
    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class InsufficientDataError(SensorFFTError):
    pass


class ParameterError(SensorFFTError, ValueError):
    pass


class SelectionError(SensorFFTError):
    pass


class VerificationError(SensorFFTError):
    pass
