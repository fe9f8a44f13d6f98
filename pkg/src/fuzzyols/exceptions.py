"""Exception hierarchy. Everything raised on purpose derives from FuzzyOLSError."""


class FuzzyOLSError(Exception):
    """Base class for library errors."""


class IncompleteSampleError(FuzzyOLSError, ValueError):
    pass


class UncoveredSampleError(FuzzyOLSError, ValueError):
    pass


class InsufficientDistinctValuesError(FuzzyOLSError, ValueError):
    pass


class DegenerateColumnError(FuzzyOLSError, ValueError):
    pass


class ZeroVarianceOutputError(FuzzyOLSError, ValueError):
    pass


class NoCoveredSamplesError(FuzzyOLSError, ValueError):
    pass


class EmptyRuleBaseError(FuzzyOLSError, ValueError):
    pass


class NoActiveSamplesError(FuzzyOLSError, ValueError):
    pass


class CoverageConstraintError(FuzzyOLSError):
    """No candidate system reaches the coverage threshold."""

    def __init__(self, message, best_ci):
        super().__init__(message)
        self.best_ci = best_ci


class DataFormatError(FuzzyOLSError, ValueError):
    pass


class FisFormatError(FuzzyOLSError, ValueError):
    pass


class FisVersionError(FisFormatError):
    pass
