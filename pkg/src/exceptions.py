class PotTabError(Exception):
    """Base exception for potential-outcome table analysis errors"""

    def __init__(self, message: str, error_code: str, details: dict = None):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(message)

class InvalidTableError(PotTabError):
    """Table counts are malformed or negative"""
    pass

class DegeneratePopulationError(PotTabError):
    """Population too small for finite-population moments (N < 2)"""
    pass

class DegenerateTableError(PotTabError):
    """Observed table has an empty treatment or control arm"""
    pass

class VarianceUndefinedError(PotTabError):
    """Variance estimator denominators vanish (N1 < 2 or N0 < 2)"""
    pass

class DomainError(PotTabError):
    """Argument outside its mathematical domain"""
    pass

class EnumerationTooLargeError(PotTabError):
    """Exact enumeration would exceed the configured cap"""
    pass

class FeasibilityError(PotTabError):
    """Margins and sensitivity parameter violate the cell-probability constraints"""
    pass

class RejectionCapError(PotTabError):
    """Posterior feasibility rejection exhausted its retry cap"""
    pass

class ConfigurationError(PotTabError):
    """Invalid simulation or environment configuration"""
    pass

class UnknownStudyError(PotTabError):
    """Requested simulation study does not exist"""
    pass

EXIT_SUCCESS = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_ANALYSIS = 3

# Error code to CLI exit code mapping
ERROR_MAPPINGS = {
    "INVALID_TABLE": EXIT_USAGE,
    "INVALID_ARGUMENT": EXIT_USAGE,
    "CONFIGURATION_ERROR": EXIT_USAGE,
    "UNKNOWN_STUDY": EXIT_USAGE,
    "UNKNOWN_LABEL": EXIT_USAGE,
    "DEGENERATE_POPULATION": EXIT_ANALYSIS,
    "DEGENERATE_TABLE": EXIT_ANALYSIS,
    "VARIANCE_UNDEFINED": EXIT_ANALYSIS,
    "DOMAIN_ERROR": EXIT_ANALYSIS,
    "ENUMERATION_TOO_LARGE": EXIT_ANALYSIS,
    "INFEASIBLE_GAMMA": EXIT_ANALYSIS,
    "REJECTION_CAP_EXHAUSTED": EXIT_ANALYSIS,
}


def exit_code_for(error: Exception) -> int:
    """Map an exception to the CLI exit code"""
    if isinstance(error, PotTabError):
        return ERROR_MAPPINGS.get(error.error_code, EXIT_ANALYSIS)
    return EXIT_UNEXPECTED
