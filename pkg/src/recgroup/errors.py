"""Exception hierarchy.

Each class carries the CLI exit code it maps to.
"""


class RecgroupError(Exception):
    exit_code = 1


class ValidationError(RecgroupError, ValueError):
    """Input violates a structural or algebraic precondition."""

    exit_code = 1

    def __init__(self, message, violations=None):
        self.violations = list(violations or [])
        if self.violations:
            message = message + "\n" + "\n".join("  - " + str(v) for v in self.violations)
        super().__init__(message)


class ResourceCapError(RecgroupError):
    """A configured size cap would be exceeded."""

    exit_code = 2

    def __init__(self, what, size, cap, hint=""):
        self.what = what
        self.size = size
        self.cap = cap
        msg = f"{what}: size {size} exceeds cap {cap}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class EntropyError(RecgroupError):
    """The entropy estimator cannot produce a slope at this resolution."""

    exit_code = 1


class TheoremViolation(RecgroupError):
    """A computed result contradicts a statement the tool checks as a theorem."""

    exit_code = 3
