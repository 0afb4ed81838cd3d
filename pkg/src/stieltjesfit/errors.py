"""Exception hierarchy shared across the package."""


class StieltjesFitError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(StieltjesFitError, ValueError):
    """Invalid input data (bad nodes, pole hits, parameter ranges)."""


class PoleHitError(DomainError):
    """Evaluation requested exactly at a pole of the rational function."""

    def __init__(self, pole, message=None):
        self.pole = pole
        super().__init__(message or f"evaluation point coincides with pole t={pole!r}")


class DuplicateNodeError(DomainError):
    """Two sample nodes coincide."""

    def __init__(self, indices):
        self.indices = tuple(indices)
        super().__init__(f"duplicate sample nodes at indices {self.indices}")


class InfeasibleDataError(StieltjesFitError):
    """Sample values do not lie in the interpolation cone (Pick test fails)."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or f"data infeasible: {report}")


class DegenerateSampleError(StieltjesFitError):
    """One-point strictness fails: the sample pins the interpolant down.

    Carries the closed form that the degenerate case forces: either a
    nonnegative constant (``kind='constant'``) or a pure ``-sigma/z`` term
    (``kind='decay'``).
    """

    def __init__(self, kind, gamma=0.0, sigma0=0.0):
        self.kind = kind
        self.gamma = gamma
        self.sigma0 = sigma0
        super().__init__(f"degenerate sample ({kind}): forced to gamma={gamma}, sigma0={sigma0}")


class ChainInfeasibleError(StieltjesFitError):
    """Round-off pushed mid-recursion data outside the cone.

    Carries the partial chain built so far and the offending reduced sample
    set so the caller can re-project and resume.
    """

    def __init__(self, steps, reduced, report):
        self.steps = tuple(steps)
        self.reduced = reduced
        self.report = report
        super().__init__(
            f"transformed data infeasible after {len(self.steps)} steps: {report}"
        )


class BracketError(StieltjesFitError):
    """Root bracket does not straddle a sign change."""


class ConvergenceError(StieltjesFitError):
    """Iterative solver hit its cap.  Carries the best iterate found."""

    def __init__(self, message, best=None, violation=None):
        self.best = best
        self.violation = violation
        super().__init__(message)


class ConditioningError(StieltjesFitError):
    """Linear solve too ill-conditioned to trust (try fewer nodes)."""


class InterlacingError(StieltjesFitError):
    """Extracted poles failed the strict interlacing requirement."""
