__all__ = [
    "AlgebraError",
    "BaseElem",
    "BaseRing",
    "ChainMatrix",
    "CyclotomicRing",
    "Defect",
    "DeltaPoly",
    "DeltaRing",
    "FramedAlgebra",
    "InvariantFactors",
    "QPDElem",
    "QPDModule",
    "WittVec",
    "ZmodRing",
]

from .base import AlgebraError, Defect
from .basering import BaseElem, BaseRing
from .chainring import CyclotomicRing, ZmodRing
from .delta import DeltaPoly, DeltaRing
from .homology import ChainMatrix, InvariantFactors
from .qderham import FramedAlgebra
from .qpd import QPDElem, QPDModule
from .witt import WittVec
