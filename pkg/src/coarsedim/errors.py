"""Exception hierarchy shared by every layer.

The CLI maps these onto exit codes: input problems are 2, resource or
window exhaustion is 3, failed hypothesis checks are 1.
"""


class CoarseDimError(Exception):
    """Base class."""

    exit_code = 1

    def __init__(self, message, stage=None, witness=None):
        super().__init__(message)
        self.stage = stage
        self.witness = witness

    def __str__(self):
        msg = super().__str__()
        if self.stage:
            msg = f"[{self.stage}] {msg}"
        return msg


class InputError(CoarseDimError, ValueError):
    """Malformed input: unknown points, bad words, non-injective maps."""

    exit_code = 2


class SpecError(InputError):
    """A group spec is inconsistent or uses an unsupported construction."""


class DegenerateSpecError(SpecError):
    """A construction whose Bass-Serre structure collapses (e.g. A = G onto)."""


class WindowExhausted(CoarseDimError):
    """The answer could depend on points beyond the enumerated window."""

    exit_code = 3


class ResourceError(CoarseDimError):
    """An enumeration exceeded its point cap."""

    exit_code = 3

    def __init__(self, message, stage=None, witness=None, growth=None):
        super().__init__(message, stage=stage, witness=witness)
        self.growth = growth or []


class HypothesisFailure(CoarseDimError):
    """A checked hypothesis of a cover construction did not hold."""

    exit_code = 1
