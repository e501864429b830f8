"""Exception hierarchy.

Every error carries a machine-readable ``code`` so the CLI can report it
as a JSON field without string matching.
"""


class PSTError(Exception):
    code = "pst_error"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


# spectra
class SpectrumError(PSTError):
    code = "spectrum_error"


class NonDistinct(SpectrumError):
    code = "non_distinct"


class MixedExactness(SpectrumError):
    code = "mixed_exactness"


class InexactInput(PSTError):
    code = "inexact_input"


class GapNotOddInteger(SpectrumError):
    code = "gap_not_odd_integer"

    def __init__(self, index, gap):
        super().__init__(f"gap {index} (= {gap}) is not an odd positive integer",
                         index=index, gap=gap)
        self.index = index
        self.gap = gap


class NotIntegerizable(SpectrumError):
    code = "not_integerizable"


class PatternViolation(SpectrumError):
    code = "pattern_violation"

    def __init__(self, index, message=""):
        super().__init__(message or f"parity pattern broken at beta index {index}",
                         index=index)
        self.index = index


# orthopoly
class NonPositiveOffdiag(PSTError):
    code = "non_positive_offdiag"


class DegenerateInterpolation(PSTError):
    code = "degenerate_interpolation"


class NegativeWeightSquared(PSTError):
    code = "negative_weight_squared"


class DegreeDrop(PSTError):
    code = "degree_drop"


# hamiltonian
class NotPersymmetric(PSTError):
    code = "not_persymmetric"


class DisconnectedHalf(PSTError):
    code = "disconnected_half"


class NonPositiveWeight(PSTError):
    code = "non_positive_weight"


class StructureError(PSTError):
    code = "structure_error"


# synthesis
class S1NonPositive(PSTError):
    code = "s1_non_positive"


class LaplacianOddConstraintViolated(PSTError):
    code = "laplacian_odd_constraint_violated"


class NotPersymmetricResult(PSTError):
    code = "not_persymmetric_result"


class PotentialRequired(PSTError):
    code = "potential_required"


class LaplacianStructureViolated(PSTError):
    code = "laplacian_structure_violated"


class UnsupportedN(PSTError):
    code = "unsupported_n"


class BudgetExceeded(PSTError):
    code = "budget_exceeded"


class PreconditionViolated(PSTError):
    code = "precondition_violated"


class MissingExactData(PSTError):
    code = "missing_exact_data"


# dynamics
class ConvergenceFailure(PSTError):
    code = "convergence_failure"


class NotAnEigenvalue(PSTError):
    code = "not_an_eigenvalue"


class EndpointPSTAbsent(PSTError):
    code = "endpoint_pst_absent"
