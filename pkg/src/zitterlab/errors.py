"""Exception types shared across the verification modules."""


class ZitterlabError(Exception):
    """Base class for all library-specific errors."""


class ConfigurationError(ZitterlabError, ValueError):
    """Invalid grid, time step, or run configuration."""


class ShapeError(ZitterlabError, ValueError):
    """Operands defined on incompatible grids or array shapes."""


class DegenerateStateError(ZitterlabError, ValueError):
    """Wavefunction density is below the floor on every node."""


class VortexPhaseError(ZitterlabError, ValueError):
    """Phase winds around a grid plaquette; the polar form is not single-valued."""


class ContainmentError(ZitterlabError, ValueError):
    """State touches the box boundary harder than the preset guard allows."""


class SuperluminalError(ZitterlabError, ValueError):
    """Center-of-mass speed at or beyond the speed of light."""


class ProperTimeUndefinedError(ZitterlabError, ValueError):
    """Charge moves at or above light speed: the standard four-velocity
    definition has no proper time to divide by."""


class OffShellError(ZitterlabError, ValueError):
    """Four-momentum does not satisfy the mass-shell relation."""


class ConstraintViolationError(ZitterlabError, ValueError):
    """A physical constraint is broken beyond discretization tolerance."""
