from typing import Any

from pydantic import BaseModel, ConfigDict


class AlgebraModel(BaseModel):
    """Base class for immutable algebraic descriptors and values"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class AlgebraError(ArithmeticError):
    """Base class for all errors raised by the algebra package"""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class NotDivisible(AlgebraError):  # noqa: N818
    """Raise when an exact division leaves a nonzero remainder"""

    def __init__(self, message: str, remainder: Any = None) -> None:
        super().__init__(message, witness=remainder)
        self.remainder = remainder


class OutOfRange(AlgebraError):  # noqa: N818
    """Raise when a computation needs more precision, depth, degree or window than configured"""


class PrecisionLoss(OutOfRange):
    """Raise when an operation would consume more p-adic digits than available"""


class DepthExceeded(OutOfRange):
    """Raise when a free delta-ring operation needs a delta-depth beyond the bound"""


class DegreeOverflow(OutOfRange):
    """Raise when a q-PD product or Frobenius leaves the degree bound"""


class WindowOverflow(OutOfRange):
    """Raise when a framed element leaves its degree window"""


class MixedRings(AlgebraError):
    """Raise when two values over different coefficient rings are combined"""


class MixedBases(AlgebraError):
    """Raise when two modules over different base rings are combined"""


class RootDepthUnsupported(OutOfRange):
    """Raise when a specialization cannot express roots of q"""


class Unstable(OutOfRange):  # noqa: N818
    """Raise when cohomology has no stable core between two windows"""


class Defect(AlgebraError):
    """Raise when a computation falsifies an identity that must hold"""


class NonIntegralCoefficient(Defect):
    """Raise when a coefficient that must be p-integral has p in its denominator"""


class NonUnit(Defect):  # noqa: N818
    """Raise when a cofactor that must be a unit is not"""


class NonCommuting(Defect):  # noqa: N818
    """Raise when q-derivations fail to commute"""


class NotAComplex(Defect):  # noqa: N818
    """Raise when consecutive differentials do not compose to zero"""


class Mismatch(Defect):  # noqa: N818
    """Raise when two independently computed tables differ"""
