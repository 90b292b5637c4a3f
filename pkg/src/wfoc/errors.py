"""Error taxonomy shared across the package.

InputError maps to CLI exit code 2, VerificationFailure to exit code 1.
HypothesisError signals a refused construction (violated precondition),
carrying a witness when one is available.
"""


class InputError(ValueError):
    pass


class VerificationFailure(Exception):
    pass


class HypothesisError(InputError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
