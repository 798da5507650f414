from .tables import ScienceTable, ObservedTable, FinitePopMoments, EstimandSet, Monotonicity, Assignment
from .estimates import Measure, CrdEstimate, ConfidenceInterval, NonlinearEstimate, FisherResult
from .bayes import (
    BetaPrior, BetaPosterior, SensitivityGamma, CellProbabilities,
    PosteriorDraws, SensitivityPoint, SensitivityGrid
)
from .simulation import SimulationConfig, MethodSummary, SimulationReport, StudyReport, METHODS, SUMMARY_METHODS

__all__ = [
    "ScienceTable", "ObservedTable", "FinitePopMoments", "EstimandSet", "Monotonicity", "Assignment",
    "Measure", "CrdEstimate", "ConfidenceInterval", "NonlinearEstimate", "FisherResult",
    "BetaPrior", "BetaPosterior", "SensitivityGamma", "CellProbabilities",
    "PosteriorDraws", "SensitivityPoint", "SensitivityGrid",
    "SimulationConfig", "MethodSummary", "SimulationReport", "StudyReport", "METHODS", "SUMMARY_METHODS",
]
