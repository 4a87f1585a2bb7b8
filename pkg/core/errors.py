# --- Error Hierarchy ---
# Every failure the pipeline can report. The CLI maps the four families
# below onto its exit codes; nothing else in the package exits the process.
from typing import Optional


class RecoverCastError(Exception):
    """Root of all recovercast errors."""

    exit_code = 1


# --- Data errors (exit 2) ---
class DataError(RecoverCastError):
    exit_code = 2


class MalformedHeader(DataError):
    pass


class RaggedRow(DataError):
    def __init__(self, line_number: int, expected: int, found: int):
        super().__init__(
            f"line {line_number}: expected {expected} fields, found {found}"
        )
        self.line_number = line_number
        self.expected = expected
        self.found = found


class NonNumericCount(DataError):
    def __init__(self, line_number: int, column: str, value: str):
        super().__init__(
            f"line {line_number}: count for '{column}' is not an integer: {value!r}"
        )
        self.line_number = line_number
        self.column = column
        self.value = value


class InvalidCoordinate(DataError):
    def __init__(self, line_number: int, column: str, value: str):
        super().__init__(
            f"line {line_number}: {column} is not a number: {value!r}"
        )
        self.line_number = line_number
        self.column = column
        self.value = value


class EmptyTable(DataError):
    pass


class SeriesTooShort(DataError):
    pass


class EmptyInput(DataError):
    pass


class DegenerateRange(DataError):
    pass


class TestTooLarge(DataError):
    __test__ = False  # not a unittest/pytest case


class EmptyDataset(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EmptyTest(DataError):
    __test__ = False


# --- Config errors (exit 3) ---
class ConfigError(RecoverCastError):
    exit_code = 3

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


# --- Model errors (exit 4) ---
class ModelError(RecoverCastError):
    exit_code = 4


class DimensionMismatch(ModelError):
    pass


class EmptyWindow(ModelError):
    pass


class WindowLengthMismatch(ModelError):
    pass


# --- Checkpoint errors (exit 4) ---
class CheckpointError(RecoverCastError):
    exit_code = 4

    def __init__(self, message: str, field: Optional[str] = None):
        if field:
            message = f"checkpoint field '{field}': {message}"
        super().__init__(message)
        self.field = field
