"""Exception hierarchy for thetakit.

Verification failures are deliberately loud: a falsified claim aborts with a
structured message naming the claim, never a warning.
"""


class ThetakitError(Exception):
    """Base class for all thetakit errors."""


class DomainError(ThetakitError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or too close to) a pole or a zero of a denominator."""


class RangeError(DomainError):
    """Inversion target outside the attainable value range of the edge."""


class PrecisionExhaustedError(ThetakitError):
    """Requested tolerance cannot be met at the working precision.

    Raised instead of silently returning a wrong value.
    """


class VerificationError(ThetakitError):
    """A numerically certified claim failed.

    Carries the label of the claim being falsified; this is the most
    valuable output the library can produce, so it is never swallowed.
    """

    def __init__(self, claim: str, detail: str = ""):
        self.claim = claim
        self.detail = detail
        msg = f"claim falsified: {claim}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class LimitError(ThetakitError):
    """Endpoint-limit extrapolation did not converge to the requested tolerance."""


class ConfigError(ThetakitError):
    """Invalid run configuration; rejected before any computation starts."""
