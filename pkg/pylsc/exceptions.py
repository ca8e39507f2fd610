"""
Exception types raised by pylsc. Every class carries the exit code the
command-line tools report for it.
"""


class LSCError(Exception):
    exit_code = 1


class ConfigError(LSCError, ValueError):
    """invalid scenario/run configuration or override"""
    exit_code = 4


class ConfigNotFoundError(ConfigError):
    exit_code = 3


class ShapeError(LSCError, ValueError):
    exit_code = 1


class NonFiniteError(LSCError, ArithmeticError):
    exit_code = 7


class TapeMismatchError(LSCError):
    exit_code = 1


class ConvergenceError(LSCError, RuntimeError):
    """the simulated CBRP rounds did not settle within the round cap"""
    exit_code = 8


class CheckpointError(LSCError):
    exit_code = 6


class ActionSpaceMismatchError(CheckpointError):
    exit_code = 5


class EmptyBatchError(LSCError, ValueError):
    exit_code = 1
