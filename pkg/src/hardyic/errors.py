"""Exception hierarchy shared by all modules."""


class HardyICError(Exception):
    """Base class; the CLI maps these to exit status 3."""


class WeightSumError(HardyICError):
    pass


class NegativeWeightError(HardyICError):
    pass


class InfeasibleError(HardyICError):
    """Behavior is not in the convex hull of the requested vertex support."""


class DomainError(HardyICError):
    pass


class ConvergenceError(HardyICError):
    pass


class BudgetError(HardyICError):
    pass
