"""Exception hierarchy shared by every module."""


class SpectraError(Exception):
    """Base class for all errors raised by the library."""

    stage = "core"


class MalformedInputError(SpectraError, ValueError):
    """A word, alphabet or configuration is structurally invalid."""


class ConcatenationError(SpectraError):
    """Two words cannot be joined because the junction pair is not allowed."""

    def __init__(self, index: int, pair):
        self.index = index
        self.pair = pair
        super().__init__(f"inadmissible junction at index {index}: {pair[0]} -> {pair[1]}")


class IncompleteSubshiftError(SpectraError):
    """Some ordered pair of alphabet words does not concatenate admissibly."""

    def __init__(self, first, second):
        self.first = first
        self.second = second
        super().__init__(f"concatenation {first} . {second} is not admissible")


class EnumerationOverflowError(SpectraError):
    """Enumeration reached the hard depth cap before the stop predicate fired."""


class ExtractionImpossible(SpectraError):
    """The sublevel set is empty (or too thin) to extract anything."""

    stage = "base_alphabet"


class CertificationFailed(SpectraError):
    """Containment of a candidate subshift in the sublevel set could not be proven."""

    def __init__(self, message: str, window=None, bound: float | None = None):
        self.window = window
        self.bound = bound
        super().__init__(message)


class InconclusiveError(SpectraError):
    """A certified gap or bound could not be established within the search budget."""


class RealizationError(SpectraError):
    """A realized sequence failed its numerical verification."""

    def __init__(self, message: str, window=None):
        self.window = window
        super().__init__(message)


class StageError(SpectraError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")


class ConfigError(SpectraError):
    """Configuration failed validation; `path` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
