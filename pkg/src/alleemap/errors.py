"""Exception hierarchy shared by the library and the command-line front end."""


class DomainError(ValueError):
    """Parameters or states outside the admissible domain."""


class AnalysisError(RuntimeError):
    """A numerical procedure could not produce a meaningful answer."""


class NotAFixedPoint(AnalysisError):
    pass


class AbsentFixedPoint(AnalysisError):
    pass


class NoSignChange(AnalysisError):
    pass


class ExistenceLost(AnalysisError):
    pass


class DiscriminantNonNegative(AnalysisError):
    pass


class NotCritical(AnalysisError):
    pass


class DegenerateSigma(AnalysisError):
    pass


class NoFateChange(AnalysisError):
    pass


class InvalidAxes(AnalysisError):
    pass
