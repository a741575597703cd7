"""Polar decomposition of scalar wavefunctions and the quantum-fluid equations.

A vortex-free scalar state psi factorizes as sqrt(rho) * exp(i*phi/hbar).
In those variables the Schroedinger dynamics splits into a Hamilton-Jacobi
equation carrying the quantum potential

    Q = (hbar^2 / 4m) * [ (grad rho / rho)^2 / 2 - (lap rho) / rho ]
      = -(hbar^2 / 2m) * lap(sqrt rho) / sqrt(rho)

and a continuity equation for the density current rho * grad(phi) / m.
This module evaluates both residuals node-wise on discrete data, checks
the two algebraic forms of Q against each other, and compares the complex
and polar forms of the lagrangian density.

Convention: the drift momentum field is p = +grad(phi), the sign under
which the continuity current reads rho*p/m.  Reports also print the
opposite-sign convention so the choice is visible rather than silent.

Nodes where rho falls below ``rho_floor * max(rho)`` are masked: phi is
undefined there and every derived field carries NaN, which propagates
through the stencils.  Norms skip masked nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, ConfigurationError, ShapeError, VortexPhaseError
from .fieldcalc import (
    ComplexScalarField,
    Grid,
    ScalarField,
    VectorField3,
    gradient,
    gradient_values,
    interior_l2,
    interior_max,
    interior_slices,
    laplacian_values,
    require_same_grid,
)

DEFAULT_RHO_FLOOR = 1e-12  # relative to max(rho)

_TWO_PI = 2.0 * np.pi


def _principal(theta: np.ndarray) -> np.ndarray:
    """Wrap angles into (-pi, pi]."""
    return theta - _TWO_PI * np.round(theta / _TWO_PI)


def unwrap_phase(theta: np.ndarray) -> np.ndarray:
    """Unwrap a raw angle array axis by axis, anchored at the domain center.

    Jumps larger than pi between neighbouring nodes are corrected by
    multiples of 2*pi.  The center node keeps its principal value, which
    realizes unwrapping outward from the middle of the box.
    """
    u = np.asarray(theta, dtype=np.float64)
    for ax in range(u.ndim):
        u = np.unwrap(u, axis=ax)
    center = tuple(n // 2 for n in u.shape)
    return u + (np.asarray(theta)[center] - u[center])


def check_vortex_free(theta: np.ndarray, masked: np.ndarray | None = None) -> None:
    """Reject phases that wind around any fully unmasked grid plaquette."""
    theta = np.asarray(theta)
    if theta.ndim < 2:
        return
    if masked is None:
        masked = np.zeros(theta.shape, dtype=bool)
    for a in range(theta.ndim):
        for b in range(a + 1, theta.ndim):
            t = np.moveaxis(theta, (a, b), (0, 1))
            m = np.moveaxis(masked, (a, b), (0, 1))
            da = _principal(t[1:] - t[:-1])
            db = _principal(t[:, 1:] - t[:, :-1])
            winding = da[:, :-1] + db[1:] - da[:, 1:] - db[:-1]
            ok = ~(m[:-1, :-1] | m[1:, :-1] | m[:-1, 1:] | m[1:, 1:])
            if np.any(np.abs(winding[ok]) > np.pi):
                raise VortexPhaseError(
                    "phase winds around a grid plaquette; polar form undefined"
                )


@dataclass(frozen=True)
class PolarForm:
    """Density/phase representation of a scalar wavefunction."""

    rho: ScalarField
    phi: ScalarField          # NaN on masked nodes
    hbar: float
    mass: float
    masked: np.ndarray        # True where rho is below the floor
    rho_floor: float          # absolute floor actually applied

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    @property
    def masked_fraction(self) -> float:
        return float(np.mean(self.masked))


def polar_decompose(
    psi: ComplexScalarField,
    hbar: float,
    mass: float,
    rho_floor: float = DEFAULT_RHO_FLOOR,
) -> PolarForm:
    """Split psi into density rho = |psi|^2 and unwrapped phase phi.

    ``rho_floor`` is relative to max(rho); nodes below it are masked and
    phi is NaN there.  A state whose density vanishes everywhere raises
    :class:`DegenerateStateError`; a winding phase raises
    :class:`VortexPhaseError`.
    """
    grid = psi.grid
    rho = np.abs(psi.values) ** 2
    rho_max = float(np.max(rho))
    if rho_max <= 0.0:
        raise DegenerateStateError("density vanishes on every node")
    floor_abs = rho_floor * rho_max
    masked = rho < floor_abs
    if bool(np.all(masked)):
        raise DegenerateStateError("density is below the floor on every node")
    theta = np.angle(psi.values)
    check_vortex_free(theta, masked)
    phi = hbar * unwrap_phase(theta)
    phi = np.where(masked, np.nan, phi)
    return PolarForm(
        rho=ScalarField(grid, rho),
        phi=ScalarField(grid, phi),
        hbar=float(hbar),
        mass=float(mass),
        masked=masked,
        rho_floor=floor_abs,
    )


def reconstruct(polar: PolarForm) -> ComplexScalarField:
    """Rebuild sqrt(rho)*exp(i*phi/hbar); masked nodes get zero phase."""
    phase = np.where(polar.masked, 0.0, polar.phi.values) / polar.hbar
    values = np.sqrt(polar.rho.values) * np.exp(1j * phase)
    return ComplexScalarField(polar.grid, values)


def _floored(rho: np.ndarray, floor_abs: float) -> np.ndarray:
    safe = np.where(np.isfinite(rho) & (rho >= floor_abs), rho, np.nan)
    return safe


def quantum_potential(
    rho: ScalarField,
    hbar: float,
    mass: float,
    *,
    form: str = "log",
    rho_floor: float = DEFAULT_RHO_FLOOR,
) -> ScalarField:
    """Quantum potential of a density field.

    ``form="log"`` evaluates the log-derivative bracket
    (hbar^2/4m)[(grad rho/rho)^2/2 - lap rho/rho]; ``form="sqrt"``
    evaluates the companion form -(hbar^2/2m) lap(sqrt rho)/sqrt(rho)
    used for cross-validation.  The two agree at second order in the
    spacing.  The hbar dependence is a single squared prefactor, so
    rescaling hbar rescales Q exactly.
    """
    grid = rho.grid
    floor_abs = rho_floor * float(np.nanmax(rho.values))
    safe = _floored(rho.values, floor_abs)
    if form == "log":
        g = gradient_values(safe, grid)
        gg = np.sum(g * g, axis=-1)
        lap = laplacian_values(safe, grid)
        bracket = 0.5 * gg / (safe * safe) - lap / safe
        q = (hbar * hbar) * (bracket / (4.0 * mass))
    elif form == "sqrt":
        root = np.sqrt(safe)
        lap = laplacian_values(root, grid)
        q = (hbar * hbar) * (-0.5 * lap / root / mass)
    else:
        raise ConfigurationError(f"unknown quantum potential form {form!r}")
    return ScalarField(grid, q)


def momentum_field(polar: PolarForm) -> VectorField3:
    """Drift momentum p = +grad(phi) (see module docstring for the sign)."""
    return gradient(polar.phi)


def hj_residual(
    polar: PolarForm,
    potential: ScalarField,
    dphi_dt: ScalarField,
    *,
    form: str = "log",
) -> ScalarField:
    """Node-wise Hamilton-Jacobi defect d(phi)/dt + (grad phi)^2/2m + Q + U."""
    require_same_grid(polar.rho, potential, dphi_dt)
    grid = polar.grid
    gphi = gradient_values(polar.phi.values, grid)
    kinetic = np.sum(gphi * gphi, axis=-1) / (2.0 * polar.mass)
    q = quantum_potential(polar.rho, polar.hbar, polar.mass, form=form).values
    res = dphi_dt.values + kinetic + q + potential.values
    res = np.where(polar.masked, np.nan, res)
    return ScalarField(grid, res)


def continuity_residual(
    rho_minus: ScalarField,
    rho_plus: ScalarField,
    phi: ScalarField,
    mass: float,
    dt: float,
    rho_mid: ScalarField | None = None,
) -> ScalarField:
    """Node-wise defect of d(rho)/dt + div(rho * grad(phi) / m).

    The time derivative is the centered difference of the two snapshots;
    ``phi`` (and optionally ``rho_mid``) belong to the midpoint time.
    When ``rho_mid`` is omitted the average of the snapshots is used,
    which keeps the estimate second order in dt.
    """
    if dt <= 0.0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    grid = require_same_grid(rho_minus, rho_plus, phi)
    mid = rho_mid.values if rho_mid is not None else 0.5 * (rho_minus.values + rho_plus.values)
    drho_dt = (rho_plus.values - rho_minus.values) / dt
    flux = mid[..., np.newaxis] * gradient_values(phi.values, grid) / mass
    div = np.zeros(grid.dims)
    from .fieldcalc import _first_derivative  # local import avoids re-export

    for ax in range(grid.ndim):
        div += _first_derivative(flux[..., ax], grid.spacing[ax], ax)
    return ScalarField(grid, drho_dt + div)


@dataclass(frozen=True)
class LagrangianCheck:
    """Node-wise and integrated comparison of the two lagrangian densities."""

    density_from_psi: ScalarField
    density_from_polar: ScalarField
    max_abs_diff_interior: float
    integral_from_psi: float
    integral_from_polar: float
    integral_diff: float


def lagrangian_density_check(
    psi: ComplexScalarField,
    dpsi_dt: ComplexScalarField,
    potential: ScalarField,
    hbar: float,
    mass: float,
    rho_floor: float = DEFAULT_RHO_FLOOR,
) -> LagrangianCheck:
    """Evaluate the complex-field and polar-field lagrangian densities.

    The complex route uses psi and its gradients directly; the polar
    route uses (rho, phi).  The two densities are algebraically equal for
    vortex-free states, so the node-wise difference measures pure
    discretization error, and the domain integrals agree for decaying
    states.
    """
    grid = require_same_grid(psi, dpsi_dt, potential)
    polar = polar_decompose(psi, hbar, mass, rho_floor)

    z = np.conj(psi.values) * dpsi_dt.values
    gpsi = gradient_values(psi.values, grid)
    grad_sq = np.sum((gpsi * np.conj(gpsi)).real, axis=-1)
    rho = polar.rho.values
    l_psi = -hbar * z.imag - (hbar * hbar) * grad_sq / (2.0 * mass) - potential.values * rho

    dphi_dt = hbar * z.imag / rho
    grho = gradient_values(rho, grid)
    gphi = gradient_values(polar.phi.values, grid)
    l_polar = -(
        dphi_dt
        + np.sum(gphi * gphi, axis=-1) / (2.0 * mass)
        + (hbar * hbar) * np.sum(grho * grho, axis=-1) / (rho * rho) / (8.0 * mass)
        + potential.values
    ) * rho

    l_psi = np.where(polar.masked, np.nan, l_psi)
    l_polar = np.where(polar.masked, np.nan, l_polar)
    f_psi = ScalarField(grid, l_psi)
    f_polar = ScalarField(grid, l_polar)
    diff = ScalarField(grid, l_psi - l_polar)
    vol = grid.node_volume
    # integrate over the interior region: the densities are compared where
    # the centered stencils apply, so the totals measure pure O(h^2) error
    # for decaying states
    region = interior_slices(grid)
    int_psi = float(np.nansum(l_psi[region]) * vol)
    int_polar = float(np.nansum(l_polar[region]) * vol)
    return LagrangianCheck(
        density_from_psi=f_psi,
        density_from_polar=f_polar,
        max_abs_diff_interior=interior_max(diff),
        integral_from_psi=int_psi,
        integral_from_polar=int_polar,
        integral_diff=abs(int_psi - int_polar),
    )


@dataclass
class MadelungReport:
    """Residual fields plus their interior norms for one state."""

    quantum_potential: ScalarField
    hj_residual: ScalarField
    continuity_residual: ScalarField | None
    energy_estimate: float
    norms: dict
    params: dict
    masked_fraction: float


def energy_estimate(polar: PolarForm, potential: ScalarField) -> float:
    """Density-weighted mean of kinetic + quantum + external energy.

    For a vortex-free state this equals the expectation value of the
    hamiltonian (the quantum-potential term integrates to the gradient
    kinetic energy by parts).
    """
    grid = polar.grid
    gphi = gradient_values(polar.phi.values, grid)
    kinetic = np.sum(gphi * gphi, axis=-1) / (2.0 * polar.mass)
    q = quantum_potential(polar.rho, polar.hbar, polar.mass).values
    e_density = kinetic + q + potential.values
    rho = np.where(polar.masked, 0.0, polar.rho.values)
    weight = np.where(np.isfinite(e_density), rho, 0.0)
    e_density = np.where(np.isfinite(e_density), e_density, 0.0)
    return float(np.sum(weight * e_density) / np.sum(weight))


def build_report(
    polar: PolarForm,
    potential: ScalarField,
    dphi_dt: ScalarField,
    continuity: ScalarField | None = None,
    provenance: dict | None = None,
) -> MadelungReport:
    q = quantum_potential(polar.rho, polar.hbar, polar.mass)
    hj = hj_residual(polar, potential, dphi_dt)
    norms = {
        "hj_max": interior_max(hj),
        "hj_l2": interior_l2(hj),
        "qp_max": interior_max(q),
        "qp_l2": interior_l2(q),
    }
    if continuity is not None:
        norms["continuity_max"] = interior_max(continuity)
        norms["continuity_l2"] = interior_l2(continuity)
    p_mean = np.nanmean(
        gradient_values(polar.phi.values, polar.grid).reshape(-1, 3), axis=0
    )
    params = {
        "hbar": polar.hbar,
        "mass": polar.mass,
        "rho_floor": polar.rho_floor,
        "momentum_mean_plus_grad_phi": [float(c) for c in p_mean],
        "momentum_mean_minus_grad_phi": [float(-c) for c in p_mean],
    }
    if provenance:
        params["state"] = provenance
    return MadelungReport(
        quantum_potential=q,
        hj_residual=hj,
        continuity_residual=continuity,
        energy_estimate=energy_estimate(polar, potential),
        norms=norms,
        params=params,
        masked_fraction=polar.masked_fraction,
    )


def report_to_dict(report: MadelungReport) -> dict:
    def clean(x):
        return float(x) if np.isfinite(x) else None

    return {
        "energy_estimate": clean(report.energy_estimate),
        "masked_fraction": clean(report.masked_fraction),
        "norms": {k: clean(v) for k, v in sorted(report.norms.items())},
        "params": report.params,
    }
