"""Exception hierarchy for the walker toolkit."""


class WalkerError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class NoRealRoot(WalkerError):
    pass


class DegenerateCorrection(WalkerError):
    pass


class InvalidInterval(WalkerError):
    pass


class TangentialExit(WalkerError):
    pass


class DegenerateGait(WalkerError):
    pass


class PreconditionViolated(WalkerError):
    pass


class SingularConstraint(WalkerError):
    pass


class NoSwitchReached(WalkerError):
    pass


class NoConvergence(WalkerError):
    def __init__(self, iterations, residual, message=None):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            message or f"Newton did not converge after {iterations} iterations (|r|={residual:.3e})"
        )


class SingularJacobian(WalkerError):
    pass


class DivisionByNearZero(WalkerError):
    pass


class Diverged(WalkerError):
    def __init__(self, step_index, cause):
        self.step_index = step_index
        self.cause = cause
        super().__init__(f"walk diverged at step {step_index}: {cause}")
