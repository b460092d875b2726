"""Exception types shared by all modules."""


class QTraceError(Exception):
    """Base class for evaluation errors."""


class NonConvergentNome(QTraceError):
    pass


class PoleError(QTraceError):
    def __init__(self, msg, location=None, source=None):
        super().__init__(msg)
        self.location = location
        self.source = source


class DivergenceError(QTraceError):
    pass


class ConditionViolated(QTraceError):
    pass


class RootOfUnityError(QTraceError):
    pass


class RegionError(QTraceError):
    pass


class QuadratureError(QTraceError):
    pass


class TailNondecay(DivergenceError):
    pass


class BranchHazard(QTraceError):
    pass


class QOverflowError(QTraceError):
    pass
