"""Exception hierarchy shared across the package."""


class StackevoError(Exception):
    """Base class for all errors raised by stackevo."""


class DataError(StackevoError):
    """Problem with input data (exit code 3 at the CLI)."""


class MissingFileError(DataError):
    pass


class CellParseError(DataError):
    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r} as a finite real")


class MissingLabelColumnError(DataError):
    pass


class TooFewClassesError(DataError):
    pass


class SplitError(DataError):
    pass


class WidthMismatchError(StackevoError):
    def __init__(self, expected, actual, where="input"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{where} width mismatch: expected {expected} columns, got {actual}")


class GenomeError(StackevoError):
    pass


class ConfigError(StackevoError):
    """Invalid configuration (exit code 2 at the CLI)."""


class SchemaError(ConfigError):
    pass
