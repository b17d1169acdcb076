"""Exception hierarchy shared by all modules."""


class SpinorError(ValueError):
    """Base class for every error raised by bwspinor."""


class ContractViolation(SpinorError):
    """An argument has the wrong index position, priming, shape or rank."""


class NotUnimodular(ContractViolation):
    """A matrix offered as an SL(2,C) element has det != 1."""


class InvalidMomentum(SpinorError):
    """Momentum is not on the required mass shell or not future-pointing."""


class InvalidDirection(SpinorError):
    """The auxiliary vector n is not timelike future-pointing."""


class DegenerateReference(SpinorError):
    """The reference spinor is zero or its flag is aligned with p."""


class DegenerateConfiguration(SpinorError):
    """A phase factor has a vanishing modulus."""


class NotProportional(SpinorError):
    """Two spinors do not share a flagpole."""


class SamplerMismatch(SpinorError):
    """A sampler's mass shell does not match the field being integrated."""


class IntegrationError(SpinorError):
    """An integrand failed or returned a non-finite value at a sample point."""

    def __init__(self, message, momentum=None):
        super().__init__(message)
        self.momentum = momentum
