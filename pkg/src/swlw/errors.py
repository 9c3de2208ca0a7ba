"""Exception types shared across the solvers and the CLI."""


class ConfigurationError(ValueError):
    """A scenario or model parameter violates a stated hypothesis.

    Raised before any stepping happens; the message names the violated
    hypothesis or field.  The CLI maps this to exit code 2.
    """


class CFLError(ConfigurationError):
    """Requested time step violates the explicit stability restriction."""


class StabilityError(RuntimeError):
    """A solver produced values outside its a-priori bounds; the run aborts."""


class PicardError(RuntimeError):
    """Fixed-point iteration failed to converge within the iteration budget."""


class UnphysicalStateError(ValueError):
    """State left the physically meaningful region (h > 0, finite fields)."""
