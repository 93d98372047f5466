"""Exception hierarchy shared by all modules."""


class NabaError(Exception):
    """Base class for library errors."""


class PoleError(NabaError, ZeroDivisionError):
    """A rational function was evaluated at one of its poles."""


class ShapeError(NabaError, ValueError):
    """Operator or vector dimensions do not match."""


class ParamError(NabaError, ValueError):
    """A parameter cannot be represented in the requested field."""


class CommutationError(NabaError, ValueError):
    """A required commutation precondition failed."""


class NoConvergence(NabaError, RuntimeError):
    """Newton iteration did not reach the requested tolerance."""


class DegenerateRoot(NabaError, ValueError):
    """A Bethe root has coinciding parameters."""


class SingularTransfer(NabaError, ValueError):
    """A transfer matrix that must be inverted is singular."""


class SingularTwist(NabaError, ValueError):
    """A twist matrix is not invertible or has a vanishing (1,1) entry."""


class ConfigError(NabaError, ValueError):
    """Invalid configuration; ``pointer`` is a JSON pointer to the field."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
