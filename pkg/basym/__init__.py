"""
basym - eventual shape of multigraded Betti tables of products of ideal powers
"""
from .grading import Degree, DegreeGroup, PositivityFunctional
from .polyalg import MonomialOrder, PrimeField, Ring
from .session import Session, parse_session

__version__ = "0.1.0"

default_app_config = "basym.apps.BasymConfig"

__all__ = [
    "Degree",
    "DegreeGroup",
    "PositivityFunctional",
    "MonomialOrder",
    "PrimeField",
    "Ring",
    "Session",
    "parse_session",
]
