"""Numerical verification toolkit for spin-driven quantum hydrodynamics
and relativistic zitterbewegung kinematics.

Submodules:

- ``fieldcalc``: grids and discrete vector calculus
- ``madelung``: polar wavefunctions, quantum potential, fluid residuals
- ``evolve``: state presets and the norm-preserving reference propagator
- ``pauli``: spin-1/2 currents and their drift/internal split
- ``relkin``: helical trajectories and CM-clock four-velocities
- ``dirac``: plane-wave spinors and the current decomposition
- ``suite``: the aggregated check registry behind ``zitterlab suite``
"""

__version__ = "0.1.0"

from . import dirac, evolve, fieldcalc, madelung, pauli, relkin  # noqa: F401
