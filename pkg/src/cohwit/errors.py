"""Exception types shared by every module.

Each error carries a short machine-readable ``code`` used by the command line
front end when it reports failures as JSON.
"""


class CohwitError(Exception):
    code = "error"

    def __init__(self, message="", **detail):
        super().__init__(message)
        self.detail = detail

    def to_dict(self):
        out = {"error": self.code, "detail": str(self)}
        out.update(self.detail)
        return out


class NonHermitianInput(CohwitError):
    code = "NonHermitianInput"


class DimensionMismatch(CohwitError):
    code = "DimensionMismatch"


class NotADensityMatrix(CohwitError):
    code = "NotADensityMatrix"


class NegativeDiagonal(CohwitError):
    code = "NegativeDiagonal"


class NoNegativeEigenvalue(CohwitError):
    code = "NoNegativeEigenvalue"


class IncoherentInput(CohwitError):
    code = "IncoherentInput"


# both names are used for the same condition
InputIncoherent = IncoherentInput


class EmptyInput(CohwitError):
    code = "EmptyInput"


class ExtractionFailed(CohwitError):
    code = "ExtractionFailed"


class NotDetected(CohwitError):
    code = "NotDetected"


class PreconditionViolated(CohwitError):
    code = "PreconditionViolated"


class TauUndefined(CohwitError):
    code = "TauUndefined"


class InfeasibleProgram(CohwitError):
    code = "InfeasibleProgram"


class UnboundedProgram(CohwitError):
    code = "UnboundedProgram"


class ParseError(CohwitError):
    code = "ParseError"


class ConvergenceWarning(UserWarning):
    pass
