"""Exception types shared across the package."""


class RootlabError(Exception):
    pass


class ZeroPolynomialError(RootlabError):
    """Operation would produce or received the zero polynomial."""


class DegreeCapExceededError(RootlabError):
    """Coefficient expansion refused; use structural root finding instead."""


class EvaluationRangeError(RootlabError):
    """A value left the representable range; carries the offending node path."""

    def __init__(self, msg, node_path=""):
        super().__init__(msg)
        self.node_path = node_path


class AtRootError(RootlabError):
    """Normalized log-magnitude requested at a zero of the polynomial."""


class AtAtomError(RootlabError):
    """Cauchy transform requested at an atom of a discrete measure."""


class AtomOnGridError(RootlabError):
    """An empirical atom sits too close to an evaluation grid point."""

    def __init__(self, msg, point=None):
        super().__init__(msg)
        self.point = point


class InsideSupportError(RootlabError):
    """Target-measure transform requested inside (or too close to) the support."""


class RegionTouchesSupportError(RootlabError):
    """Probe region is not separated from the measure support."""


class BoundaryZeroError(RootlabError):
    """A zero persists on the integration contour after jitter retries."""


class NoConvergenceError(RootlabError):
    """Iteration budget exhausted; best iterate attached."""

    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


class ExceptionalPointError(RootlabError):
    """Backward orbit of an exceptional point requested."""


class SubdivisionLimitError(RootlabError):
    """Quadtree isolation hit its depth limit."""


class ScheduleExceededError(RootlabError):
    """Family index outside the configured degree schedule."""


class NonEscapingError(RootlabError):
    """Orbit did not escape; point is (numerically) in the filled Julia set."""


class TruncationWarning(UserWarning):
    """Series truncation too short for the requested tolerance."""


class ConfigError(RootlabError):
    """Experiment configuration failed to parse or validate."""
