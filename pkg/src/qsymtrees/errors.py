"""Shared exception types.  Everything deriving from DomainError maps to CLI
exit code 1; usage errors are left to argparse (exit code 2)."""


class DomainError(ValueError):
    """Mathematically invalid input: bad composition, cycle, basis clash..."""


class BasisMismatchError(DomainError):
    """Operation applied to expressions in incompatible bases."""


class UnrealizableError(DomainError):
    """No labeling realizes the requested strict/weak edge assignment."""


class ParseError(DomainError):
    """Malformed poset/digraph text, with the offending line when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GuardExceeded(DomainError):
    """Requested size is over the safety guard (raise it with --force or
    the QSYM_GUARD_MAX_N environment variable)."""


class CheckpointError(DomainError):
    """Checkpoint file is corrupt or belongs to a different scan."""
