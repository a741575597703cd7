"""Spin vector fields, the spin-1/2 probability current, and its split.

The current of a two-component wavefunction carries three pieces: the
gradient (convective) term, the minimal-coupling term -e*A*rho/m, and the
curl of the spin density.  For a factorized state sqrt(rho)*Phi the same
current splits into

    j = rho * (p - e A) / m + curl(rho s) / m,        rho s = psi^dag s_op psi

so the node-wise velocity is v = w + V with drift w = (p - e A)/m and an
internal part V = curl(rho s)/(m rho) that survives even for real scalar
profiles -- it vanishes only when grad(rho) is parallel to s everywhere
(plane waves being the degenerate case).

With constant spin direction and grad(rho).s = 0 the internal speed obeys
V^2 = s^2 (grad rho / m rho)^2, which makes (1/2) m V^2 coincide with the
density-gradient term hbar^2/8m (grad rho/rho)^2 of the scalar lagrangian
exactly when |s| = hbar/2.  That energy bookkeeping (CM kinetic energy
plus internal kinetic energy) is the classical center-of-mass split, and
it fixes the effective diffusion coefficient at |s|/m = hbar/2m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ConstraintViolationError, ShapeError
from .fieldcalc import (
    ComplexScalarField,
    Grid,
    ScalarField,
    VectorField3,
    curl,
    divergence,
    gradient_values,
    interior_max,
    require_same_grid,
)
from .madelung import DEFAULT_RHO_FLOOR, check_vortex_free, unwrap_phase

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
PAULI = (PAULI_X, PAULI_Y, PAULI_Z)

SPIN_UP = np.array([1.0, 0.0], dtype=np.complex128)
SPIN_DOWN = np.array([0.0, 1.0], dtype=np.complex128)


@dataclass(frozen=True)
class SpinState:
    """Constant unit-norm two-spinor and its spin expectation vector."""

    chi: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        chi = np.array(self.chi, dtype=np.complex128).reshape(2)
        norm = float(np.linalg.norm(chi))
        if abs(norm - 1.0) > 1e-12:
            raise ConfigurationError(f"spinor norm must be 1, got {norm!r}")
        chi.setflags(write=False)
        object.__setattr__(self, "chi", chi)

    @property
    def spin_vector(self) -> np.ndarray:
        """chi^dag (hbar/2 sigma) chi; always of length hbar/2."""
        return np.array(
            [0.5 * self.hbar * np.vdot(self.chi, sig @ self.chi).real for sig in PAULI]
        )


@dataclass(frozen=True)
class PauliSpinorField:
    """Two complex components per node plus coupling data."""

    grid: Grid
    values: np.ndarray            # dims + (2,)
    hbar: float
    mass: float
    charge: float = -1.0
    vector_potential: VectorField3 | None = None

    def __post_init__(self):
        shape = self.grid.dims + (2,)
        arr = np.array(self.values, dtype=np.complex128, copy=True)
        if arr.shape != shape:
            raise ShapeError(f"PauliSpinorField: expected shape {shape}, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if self.vector_potential is not None and self.vector_potential.grid != self.grid:
            raise ShapeError("vector potential lives on a different grid")

    def density_values(self) -> np.ndarray:
        return np.sum(np.abs(self.values) ** 2, axis=-1)

    def density(self) -> ScalarField:
        return ScalarField(self.grid, self.density_values())


def factorized_state(
    scalar: ComplexScalarField,
    chi,
    hbar: float,
    mass: float,
    charge: float = -1.0,
    vector_potential: VectorField3 | None = None,
) -> PauliSpinorField:
    """psi = scalar(x) * chi with a constant unit spinor."""
    spin = chi if isinstance(chi, SpinState) else SpinState(chi, hbar)
    values = scalar.values[..., np.newaxis] * spin.chi
    return PauliSpinorField(scalar.grid, values, hbar, mass, charge, vector_potential)


def spin_density(psi: PauliSpinorField) -> VectorField3:
    """rho * s = psi^dag (hbar/2 sigma) psi, node-wise."""
    a = psi.values[..., 0]
    b = psi.values[..., 1]
    z = np.conj(a) * b
    out = np.empty(psi.grid.dims + (3,))
    out[..., 0] = psi.hbar * z.real
    out[..., 1] = psi.hbar * z.imag
    out[..., 2] = 0.5 * psi.hbar * (np.abs(a) ** 2 - np.abs(b) ** 2)
    return VectorField3(psi.grid, out)


def spin_vector_field(psi: PauliSpinorField, rho_floor: float = DEFAULT_RHO_FLOOR) -> VectorField3:
    """s = (psi^dag s_op psi) / rho; NaN where rho is below the floor."""
    rho = psi.density_values()
    floor_abs = rho_floor * float(np.max(rho))
    safe = np.where(rho >= floor_abs, rho, np.nan)
    return VectorField3(psi.grid, spin_density(psi).values / safe[..., np.newaxis])


def pauli_current(psi: PauliSpinorField) -> VectorField3:
    """Total current: gradient term + coupling term + curl of spin density."""
    grid = psi.grid
    conv = np.zeros(grid.dims + (3,))
    for c in range(2):
        g = gradient_values(psi.values[..., c], grid)
        conv += (np.conj(psi.values[..., c])[..., np.newaxis] * g).imag
    j = psi.hbar * conv / psi.mass
    if psi.vector_potential is not None:
        rho = psi.density_values()
        j = j - (psi.charge / psi.mass) * psi.vector_potential.values * rho[..., np.newaxis]
    j = j + curl(spin_density(psi)).values / psi.mass
    return VectorField3(grid, j)


@dataclass(frozen=True)
class CurrentDecomposition:
    """Total current versus drift + internal split, with the residual."""

    j_total: VectorField3
    j_convective: VectorField3
    j_spin: VectorField3
    V: VectorField3                # internal velocity, j_spin / rho
    w: VectorField3                # drift velocity, (p - eA)/m
    mode: str                      # "scalar-phase" or "connection"
    phi: ScalarField | None
    residual: VectorField3         # j_total - (j_convective + j_spin)
    residual_max_interior: float


def decompose_current(
    psi: PauliSpinorField,
    rho_floor: float = DEFAULT_RHO_FLOOR,
    spin_direction_tol: float = 1e-8,
) -> CurrentDecomposition:
    """Split the current into drift and internal parts.

    When the spin direction is uniform the scalar phase is extracted by
    unwrapping the dominant component (vortex phases are rejected), and
    the drift momentum is its gradient -- a discrete route genuinely
    different from the gradient-term evaluation in ``pauli_current``, so
    the recomposition residual measures stencil error.  For spatially
    varying spin direction, the momentum comes from the normalized-spinor
    connection hbar * Im(Phi^dag grad Phi) instead.
    """
    grid = psi.grid
    rho = psi.density_values()
    floor_abs = rho_floor * float(np.max(rho))
    masked = rho < floor_abs
    safe_rho = np.where(masked, np.nan, rho)

    rho_s = spin_density(psi)
    s_hat = rho_s.values / safe_rho[..., np.newaxis]  # |s| = hbar/2 node-wise
    flat = s_hat.reshape(-1, 3)
    finite = np.all(np.isfinite(flat), axis=1)
    mean_dir = flat[finite].mean(axis=0)
    mean_dir /= np.linalg.norm(mean_dir)
    spread = float(np.max(np.linalg.norm(flat[finite] - 0.5 * psi.hbar * mean_dir, axis=1)))

    phi_field = None
    if spread <= spin_direction_tol * psi.hbar:
        mode = "scalar-phase"
        weights = np.nansum(np.abs(psi.values.reshape(-1, 2)) ** 2, axis=0)
        k = int(np.argmax(weights))
        theta = np.angle(psi.values[..., k])
        check_vortex_free(theta, masked)
        phi = psi.hbar * unwrap_phase(theta)
        phi = np.where(masked, np.nan, phi)
        phi_field = ScalarField(grid, phi)
        p_vals = gradient_values(phi, grid)
    else:
        mode = "connection"
        norm = np.sqrt(safe_rho)
        p_vals = np.zeros(grid.dims + (3,))
        for c in range(2):
            phi_c = psi.values[..., c] / norm
            g = gradient_values(phi_c, grid)
            p_vals += (np.conj(phi_c)[..., np.newaxis] * g).imag
        p_vals = psi.hbar * p_vals

    if psi.vector_potential is not None:
        p_vals = p_vals - psi.charge * psi.vector_potential.values
    w_vals = p_vals / psi.mass
    j_conv = VectorField3(grid, np.where(masked[..., None], np.nan, rho[..., None] * w_vals))
    j_spin = VectorField3(grid, curl(rho_s).values / psi.mass)
    v_vals = j_spin.values / safe_rho[..., np.newaxis]
    j_total = pauli_current(psi)
    residual = VectorField3(
        grid, j_total.values - (j_conv.values + j_spin.values)
    )
    return CurrentDecomposition(
        j_total=j_total,
        j_convective=j_conv,
        j_spin=j_spin,
        V=VectorField3(grid, v_vals),
        w=VectorField3(grid, w_vals),
        mode=mode,
        phi=phi_field,
        residual=residual,
        residual_max_interior=interior_max(residual),
    )


def spin_current_divergence(psi: PauliSpinorField) -> ScalarField:
    """div(curl(rho s))/m: identically zero in the continuum."""
    return divergence(VectorField3(psi.grid, curl(spin_density(psi)).values / psi.mass))


def internal_velocity_constant_spin(
    rho: ScalarField, s: np.ndarray, mass: float, rho_floor: float = DEFAULT_RHO_FLOOR
) -> VectorField3:
    """V = (grad rho ^ s) / (m rho) for a constant spin vector."""
    grid = rho.grid
    floor_abs = rho_floor * float(np.nanmax(rho.values))
    safe = np.where(rho.values >= floor_abs, rho.values, np.nan)
    g = gradient_values(safe, grid)
    v = np.cross(g, np.asarray(s, dtype=float)) / (mass * safe[..., np.newaxis])
    return VectorField3(grid, v)


@dataclass(frozen=True)
class VsqIdentityReport:
    """Internal speed squared, evaluated directly and via the cross-product
    identity (a^b)^2 = a^2 b^2 - (a.b)^2."""

    vsq_direct: ScalarField
    vsq_identity: ScalarField         # s^2 (grad rho / m rho)^2
    predicted_violation: ScalarField  # (grad rho . s)^2 / (m rho)^2
    max_abs_diff: float               # interior max |direct - identity|
    max_defect_vs_predicted: float    # interior max |identity - direct - violation|
    orthogonality_defect: float       # max |grad rho . s| / (|grad rho| |s|)


def vsq_identity_check(
    rho: ScalarField, s, mass: float, rho_floor: float = DEFAULT_RHO_FLOOR
) -> VsqIdentityReport:
    """Check V^2 = s^2 (grad rho / m rho)^2 and quantify its breakdown.

    The identity requires grad(rho).s = 0; when that orthogonality fails
    the two expressions differ by exactly (grad rho . s)^2/(m rho)^2,
    which is reported rather than asserted.
    """
    s = np.asarray(s, dtype=float)
    grid = rho.grid
    floor_abs = rho_floor * float(np.nanmax(rho.values))
    safe = np.where(rho.values >= floor_abs, rho.values, np.nan)
    g = gradient_values(safe, grid)
    m_rho = mass * safe

    v = np.cross(g, s) / m_rho[..., np.newaxis]
    vsq_direct = np.sum(v * v, axis=-1)
    gg = np.sum(g * g, axis=-1)
    vsq_identity = float(s @ s) * gg / (m_rho * m_rho)
    g_dot_s = g @ s
    violation = (g_dot_s / m_rho) ** 2

    g_norm = np.sqrt(gg)
    s_norm = float(np.linalg.norm(s))
    scale = np.nanmax(g_norm)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.abs(g_dot_s) / (g_norm * s_norm)
    rel = np.where(g_norm > 1e-12 * scale, rel, 0.0)

    diff = ScalarField(grid, vsq_identity - vsq_direct)
    defect = ScalarField(grid, vsq_identity - vsq_direct - violation)
    return VsqIdentityReport(
        vsq_direct=ScalarField(grid, vsq_direct),
        vsq_identity=ScalarField(grid, vsq_identity),
        predicted_violation=ScalarField(grid, violation),
        max_abs_diff=interior_max(diff),
        max_defect_vs_predicted=interior_max(defect),
        orthogonality_defect=float(np.nanmax(rel)),
    )


@dataclass(frozen=True)
class KoenigReport:
    """Internal kinetic energy versus the scalar-lagrangian gradient term."""

    internal_kinetic: ScalarField      # (1/2) m V^2
    gradient_term: ScalarField         # hbar^2/8m (grad rho / rho)^2
    cm_kinetic_mean: float             # mean (grad phi)^2 / 2m for context
    max_rel_diff: float                # interior, relative to max gradient term
    ratio_min: float
    ratio_max: float
    expected_ratio: float              # (2|s|/hbar)^2


def koenig_split_check(
    rho: ScalarField,
    phi: ScalarField,
    s,
    hbar: float,
    mass: float,
    rho_floor: float = DEFAULT_RHO_FLOOR,
) -> KoenigReport:
    """Compare (1/2) m V^2 against hbar^2/8m (grad rho/rho)^2 node-wise.

    The two coincide exactly when |s| = hbar/2 and differ by the factor
    (2|s|/hbar)^2 otherwise; both the node-wise difference and the ratio
    band are reported.
    """
    s = np.asarray(s, dtype=float)
    grid = rho.grid
    v = internal_velocity_constant_spin(rho, s, mass, rho_floor)
    internal = 0.5 * mass * np.sum(v.values * v.values, axis=-1)

    floor_abs = rho_floor * float(np.nanmax(rho.values))
    safe = np.where(rho.values >= floor_abs, rho.values, np.nan)
    g = gradient_values(safe, grid)
    grad_term = (hbar * hbar) * np.sum(g * g, axis=-1) / (safe * safe) / (8.0 * mass)

    gphi = gradient_values(phi.values, grid)
    cm_kin = np.nanmean(np.sum(gphi * gphi, axis=-1)) / (2.0 * mass)

    scale = np.nanmax(np.abs(grad_term))
    diff = ScalarField(grid, (internal - grad_term) / (scale if scale > 0 else 1.0))
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = internal / grad_term
    ratio = ratio[np.isfinite(ratio) & (np.abs(grad_term) > 1e-14 * max(scale, 1e-300))]
    expected = (2.0 * float(np.linalg.norm(s)) / hbar) ** 2
    return KoenigReport(
        internal_kinetic=ScalarField(grid, internal),
        gradient_term=ScalarField(grid, grad_term),
        cm_kinetic_mean=float(cm_kin),
        max_rel_diff=interior_max(diff),
        ratio_min=float(np.min(ratio)) if ratio.size else float("nan"),
        ratio_max=float(np.max(ratio)) if ratio.size else float("nan"),
        expected_ratio=expected,
    )


@dataclass(frozen=True)
class TakabayasiResult:
    """Angle field beta with clamping statistics."""

    beta: ScalarField
    clamped_nodes: int
    max_overshoot: float


def takabayasi_beta(
    rho: ScalarField,
    s_field: VectorField3,
    mass: float,
    *,
    branch: str = "electron",
    clamp_tol: float = 1e-6,
    rho_floor: float = DEFAULT_RHO_FLOOR,
) -> TakabayasiResult:
    """Angle defined by div(rho s) = -m rho sin(beta).

    ``branch="electron"`` returns the solution near 0, ``"positron"`` the
    one near pi.  Arguments leaving [-1, 1] by more than ``clamp_tol``
    raise :class:`ConstraintViolationError`; smaller overshoots are
    clamped and counted.
    """
    if branch not in ("electron", "positron"):
        raise ConfigurationError(f"unknown branch {branch!r}")
    grid = require_same_grid(rho, s_field)
    floor_abs = rho_floor * float(np.nanmax(rho.values))
    safe = np.where(rho.values >= floor_abs, rho.values, np.nan)
    div = divergence(VectorField3(grid, rho.values[..., np.newaxis] * s_field.values))
    arg = -div.values / (mass * safe)
    overshoot = np.nanmax(np.abs(arg)) - 1.0
    max_overshoot = float(max(overshoot, 0.0))
    if max_overshoot > clamp_tol:
        raise ConstraintViolationError(
            f"sin(beta) argument exceeds [-1, 1] by {max_overshoot:.3e} "
            f"(tolerance {clamp_tol:.0e})"
        )
    clamped = int(np.sum(np.abs(arg) > 1.0))
    arg = np.clip(arg, -1.0, 1.0)
    beta = np.arcsin(arg)
    if branch == "positron":
        beta = np.pi - beta
    return TakabayasiResult(ScalarField(grid, beta), clamped, max_overshoot)


def diffusion_coefficient(s_magnitude: float, mass: float) -> float:
    """Effective diffusion coefficient |s| / m of the internal motion."""
    if mass <= 0.0:
        raise ValueError(f"mass must be positive, got {mass}")
    if s_magnitude < 0.0:
        raise ValueError(f"|s| must be non-negative, got {s_magnitude}")
    return s_magnitude / mass
