"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BallCoverError(Exception):
    """Base class for all errors raised by ballcover."""


class InputError(BallCoverError, ValueError):
    """Malformed or out-of-range input."""


class PreconditionError(BallCoverError, ValueError):
    """The arguments are well formed but violate an operation's precondition."""


class NoPathError(BallCoverError):
    """Two vertices lie in different components."""


class EmptyError(BallCoverError, ValueError):
    """An operation that needs a nonempty collection received an empty one."""


class InternalError(BallCoverError, AssertionError):
    """A structural assertion that should be unreachable failed."""


class BudgetError(BallCoverError):
    """A search exceeded its node budget.

    ``best`` holds the best bound known when the search stopped and
    ``certificate`` the corresponding witness, if any.
    """

    def __init__(self, message: str, best=None, certificate=None):
        super().__init__(message)
        self.best = best
        self.certificate = certificate


class DensityWitnessError(BallCoverError):
    """The input is denser than the declared density bound ``d``.

    The attributes carry whatever evidence was gathered: ``graph`` is the
    offending (pattern) graph, ``model`` an explicit minor model of it in the
    host when one could be built, and ``average_degree`` its exact average
    degree.
    """

    def __init__(self, message: str, graph=None, model=None, average_degree=None, vertices=None):
        super().__init__(message)
        self.graph = graph
        self.model = model
        self.average_degree = average_degree
        self.vertices = vertices
