"""Exception and warning types used across itlab."""


class ItlabError(Exception):
    """Base class for all itlab errors."""


class ValidationError(ItlabError, ValueError):
    """Invalid input: bad grid, inconsistent geometry, undersampling."""


class ConfigError(ValidationError):
    """Scenario configuration problem (missing/unknown key, bad scenario name)."""


class NumericalError(ItlabError, ArithmeticError):
    """A numerical procedure could not deliver a trustworthy result."""


class AliasingError(NumericalError):
    """Wavefunction does not decay at the grid edges; the DFT would alias."""


class BoundaryError(NumericalError):
    """Density reached the grid edge during a split-step run."""


class IntegrationError(NumericalError):
    """Non-finite force or state during trajectory integration."""


class NoTrajectoryError(NumericalError):
    """No classical trajectory connects the requested endpoints."""


class ConvergenceError(NumericalError):
    """Iterative solver did not converge."""


class PropagationError(NumericalError):
    """Semiclassical amplitude cannot be formed."""


class CausticError(PropagationError):
    """Trajectory family focuses: the Van Vleck density diverges or changes sign."""


class ExtrapolationError(NumericalError):
    """Requested momentum lies outside the sampled spectrum."""


class UndefinedRatioError(NumericalError):
    """Density ratio requested where the momentum density vanishes."""


class PreAsymptoticWarning(UserWarning):
    """Imaging-theorem evaluated before the wavepacket has left the transition zone."""


class AccuracyWarning(UserWarning):
    """Result computed on a sampling too coarse for the advertised accuracy."""
