"""Exception types shared across the package."""


class LamplighterError(Exception):
    """Base class for every error raised by this package."""

    code = 1


class UsageError(LamplighterError, ValueError):
    """Invalid arguments: mismatched moduli, empty arcs, bad parameters."""

    code = 2


class SizeGuardError(LamplighterError):
    """A computation would exceed one of the configured size guards."""

    code = 3


class DegenerateError(LamplighterError):
    """An embedding collapses distinct points, or a bound degenerates."""

    code = 4


class GenerationError(LamplighterError):
    """A generating set fails to generate the whole group."""

    code = 5


class ConsistencyError(LamplighterError):
    """An internal identity that must hold exactly was violated."""

    code = 6


class CommandError(LamplighterError):
    """An unknown command-line subcommand."""

    code = 7
