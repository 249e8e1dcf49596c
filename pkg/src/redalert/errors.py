"""Exception types shared across the package."""


class RedAlertError(Exception):
    """Base class for all domain errors."""


class InvalidArgumentError(RedAlertError, ValueError):
    """An argument is outside its admissible range."""


class InfeasibleDesignError(RedAlertError):
    """The requested (rate, epsilon) pair cannot be supported by the channel."""


class TooManyCodewordsError(RedAlertError):
    """The codebook would exceed the configured codeword cap."""

    def __init__(self, message, required_log_count=None):
        super().__init__(message)
        # natural log of the number of codewords the construction would need
        self.required_log_count = required_log_count


class EmptyCodebookError(RedAlertError):
    """Expurgation removed every standard codeword."""


class CandidateExhaustedError(RedAlertError):
    """A filtered construction ran out of candidates before reaching M codewords."""


class InsufficientTrialsError(RedAlertError):
    """Too few Monte Carlo trials for the requested estimate to be meaningful."""
