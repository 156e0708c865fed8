"""Contractions of quantum orthogonal groups over Pimenov algebras."""

from .catalog import CatalogEntry, catalog, projection
from .checker import ContractionCandidate, Verdict, check_candidate
from .classical import Signature
from .kinematics import chain_report, deformation_report
from .nilpotent import ExpPoly, Pim, Q2i
from .sweep import BudgetExceeded, compare_to_catalog, enumerate_admissible

__all__ = [
    "BudgetExceeded",
    "CatalogEntry",
    "ContractionCandidate",
    "ExpPoly",
    "Pim",
    "Q2i",
    "Signature",
    "Verdict",
    "catalog",
    "chain_report",
    "check_candidate",
    "compare_to_catalog",
    "deformation_report",
    "enumerate_admissible",
    "projection",
]

__version__ = "0.1.0"
