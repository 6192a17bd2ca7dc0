"""Exception hierarchy shared by the library, the CLI and the HTTP service."""


class SchurError(Exception):
    """Base class for every error raised by schur_stability."""

    error_code = "SCHUR_ERROR"


class InvalidInput(SchurError, ValueError):
    """Malformed coefficients, parameters or grid specifications."""

    error_code = "INVALID_INPUT"


class BackendMismatch(InvalidInput):
    """Exact and float scalars were mixed in one computation."""

    error_code = "BACKEND_MISMATCH"


class UnknownMapping(InvalidInput):
    error_code = "UNKNOWN_MAPPING"


class InvalidCell(InvalidInput):
    """A parameter-plane point that does not define a polynomial (e.g. a = 0)."""

    error_code = "INVALID_CELL"


class RootFindingError(SchurError):
    """The simultaneous root iteration did not converge."""

    error_code = "ROOT_FINDING_FAILED"
