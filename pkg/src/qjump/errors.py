"""Exception types shared across the package."""


class QjumpError(Exception):
    """Base class for all package-specific errors."""


class TruncationError(QjumpError):
    """A state does not fit in the requested truncated Fock space.

    Carries ``required_dim``, a dimension estimate that would bring the
    truncation leak under tolerance.
    """

    def __init__(self, msg, required_dim=None):
        super().__init__(msg)
        self.required_dim = required_dim


class IntegrationError(QjumpError):
    """Integrator diagnostics failed (positivity, trace drift, ...)."""


class NumericFailure(QjumpError):
    """NaN/Inf appeared during a stochastic integration step."""

    def __init__(self, msg, step_index=None):
        super().__init__(msg)
        self.step_index = step_index


class StepSizeError(QjumpError):
    """A single step clamped/lost more probability than allowed."""

    def __init__(self, msg, step_index=None):
        super().__init__(msg)
        self.step_index = step_index


class DegenerateEvidenceError(QjumpError):
    """A Bayes update received a measurement value wildly inconsistent
    with the prior's support; the posterior underflowed everywhere."""


class EnsembleRunError(QjumpError):
    """One or more trajectories of an ensemble failed.

    ``failures`` maps trajectory index -> error message.
    """

    def __init__(self, failures):
        self.failures = dict(failures)
        idx = ", ".join(str(k) for k in sorted(self.failures))
        super().__init__(f"{len(self.failures)} trajectories failed (indices: {idx})")
