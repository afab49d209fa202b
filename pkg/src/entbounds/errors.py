"""Exception types shared across the package."""


class EntboundsError(Exception):
    """Base class for all package-specific errors."""


class InvalidMatrixError(EntboundsError, ValueError):
    """Matrix input violates a structural invariant (finiteness, shape, PSD, ...)."""


class HermiticityError(InvalidMatrixError):
    """Matrix expected to be Hermitian is not, beyond tolerance."""


class DimensionMismatchError(EntboundsError, ValueError):
    """Operands live on incompatible tensor-product spaces."""


class DomainError(EntboundsError, ValueError):
    """Scalar argument outside its legal range."""


class UnsupportedFamilyError(DomainError):
    """No closed form is implemented for the requested state family."""


class ParseError(EntboundsError, ValueError):
    """Malformed input file or unrecognized schema."""


class CertificationRequiredError(EntboundsError):
    """Operation needs an exact or certified lambda_sup but got a heuristic one."""


class NotDetectedError(EntboundsError):
    """Entanglement margin is nonpositive, so no robustness statement exists."""


class InvalidPerturbationError(EntboundsError, ValueError):
    """Perturbation violates the trace or positivity admissibility conditions."""


class NetBudgetError(EntboundsError):
    """Certification net would exceed the sample budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"certification needs about {required} net samples, budget is {budget}"
        )
