"""Analytic plane-wave spinor states and the splitting of their current.

Everything here is evaluated point-wise from closed forms -- no grid --
so the current identities can be checked at floating-point precision.
States are superpositions of positive-energy plane waves; the bilinear
current psi_bar gamma^mu psi splits into a convective piece built from
the momentum operator acting on each wave and a spin piece built from
the commutator tensor (i/4)[gamma^mu, gamma^nu].  Their sum reproduces
the current exactly for on-shell spinors, and contracting a single
wave's current with its momentum returns the rest mass.

Gamma matrices are in the standard Dirac representation; spinors are
normalized to u_bar u = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, OffShellError
from .relkin import FourVector

_SIGMA = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
)

_I2 = np.eye(2, dtype=np.complex128)
_Z2 = np.zeros((2, 2), dtype=np.complex128)


def _build_gammas() -> tuple[np.ndarray, ...]:
    g0 = np.block([[_I2, _Z2], [_Z2, -_I2]])
    spatial = tuple(np.block([[_Z2, s], [-s, _Z2]]) for s in _SIGMA)
    out = (g0,) + spatial
    for g in out:
        g.setflags(write=False)
    return out

GAMMAS = _build_gammas()
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

def _build_spin_tensor() -> np.ndarray:
    s = np.zeros((4, 4, 4, 4), dtype=np.complex128)
    for mu in range(4):
        for nu in range(4):
            s[mu, nu] = 0.25j * (GAMMAS[mu] @ GAMMAS[nu] - GAMMAS[nu] @ GAMMAS[mu])
    s.setflags(write=False)
    return s

SPIN_TENSOR = _build_spin_tensor()


def anticommutator_residual() -> float:
    """Max deviation of {gamma^mu, gamma^nu} from 2 g^{mu nu} I."""
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            anti = GAMMAS[mu] @ GAMMAS[nu] + GAMMAS[nu] @ GAMMAS[mu]
            worst = max(worst, float(np.max(np.abs(anti - 2.0 * METRIC[mu, nu] * np.eye(4)))))
    return worst


def slash(p: FourVector) -> np.ndarray:
    """gamma^mu p_mu."""
    out = p.t * GAMMAS[0]
    for k in range(3):
        out = out - p.xyz[k] * GAMMAS[k + 1]
    return out


def on_shell_momentum(p3, mass: float) -> FourVector:
    """Positive-energy four-momentum for a spatial momentum."""
    p3 = np.asarray(p3, dtype=float).reshape(3)
    return FourVector(np.sqrt(mass * mass + float(p3 @ p3)), p3)


def _check_on_shell(p: FourVector, mass: float) -> None:
    defect = abs(p.square() - mass * mass)
    if defect > 1e-12 * max(1.0, mass * mass):
        raise OffShellError(f"p.p - m^2 = {defect:.3e}; momentum is off shell")
    if p.t <= 0.0:
        raise OffShellError("only positive-energy waves are supported")


def plane_wave_spinor(p: FourVector, spin: int, mass: float) -> np.ndarray:
    """Positive-energy solution u(p, s) with u_bar u = 1.

    ``spin`` is +1 or -1, labelling the rest-frame spin along z.
    """
    if spin not in (1, -1):
        raise ConfigurationError(f"spin label must be +1 or -1, got {spin}")
    _check_on_shell(p, mass)
    chi = np.array([1.0, 0.0] if spin == 1 else [0.0, 1.0], dtype=np.complex128)
    e = p.t
    sigma_p = sum(p.xyz[k] * _SIGMA[k] for k in range(3))
    lower = (sigma_p @ chi) / (e + mass)
    u = np.concatenate([chi, lower])
    return np.sqrt((e + mass) / (2.0 * mass)) * u


def adjoint(spinor: np.ndarray) -> np.ndarray:
    """u_bar = u^dag gamma^0."""
    return np.conj(spinor) @ GAMMAS[0]


@dataclass(frozen=True)
class PlaneWaveComponent:
    amplitude: complex
    momentum: FourVector
    spin: int


@dataclass(frozen=True)
class DiracPlaneWaveState:
    """Superposition sum_k c_k u(p_k, s_k) exp(-i p_k . x)."""

    components: tuple[PlaneWaveComponent, ...]
    mass: float

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ConfigurationError("state needs at least one plane-wave component")
        spinors = tuple(plane_wave_spinor(c.momentum, c.spin, self.mass) for c in comps)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "_spinors", spinors)

    @property
    def spinors(self) -> tuple[np.ndarray, ...]:
        return self._spinors

    def evaluate(self, x: FourVector) -> np.ndarray:
        psi = np.zeros(4, dtype=np.complex128)
        for comp, u in zip(self.components, self._spinors):
            psi += comp.amplitude * u * np.exp(-1j * comp.momentum.dot(x))
        return psi


def _real_four_vector(values: np.ndarray, scale: float) -> FourVector:
    worst = float(np.max(np.abs(values.imag)))
    if worst > 1e-10 * max(1.0, scale):
        raise ConfigurationError(f"current has an imaginary part of {worst:.3e}")
    return FourVector(values[0].real, values[1:].real)


def dirac_current(state: DiracPlaneWaveState, x: FourVector) -> FourVector:
    """j^mu(x) = psi_bar gamma^mu psi, evaluated analytically."""
    psi = state.evaluate(x)
    bar = adjoint(psi)
    j = np.array([bar @ GAMMAS[mu] @ psi for mu in range(4)])
    return _real_four_vector(j, float(np.max(np.abs(j))))


@dataclass(frozen=True)
class GordonTerms:
    convective: FourVector
    spin_term: FourVector

    @property
    def total(self) -> FourVector:
        return self.convective + self.spin_term


def gordon_decompose(state: DiracPlaneWaveState, x: FourVector) -> GordonTerms:
    """Split the current into convective and spin parts.

    The momentum operator acts analytically on each wave: it multiplies
    psi_k by p_k^mu and psi_bar_k by -p_k^mu, and differentiating a
    (k, l) bilinear brings down the momentum transfer p_k - p_l.
    """
    m = state.mass
    conv = np.zeros(4, dtype=np.complex128)
    spin = np.zeros(4, dtype=np.complex128)
    comps = state.components
    spinors = state.spinors
    for k, (ck, uk) in enumerate(zip(comps, spinors)):
        bar_k = adjoint(uk)
        for l, (cl, ul) in enumerate(zip(comps, spinors)):
            weight = np.conj(ck.amplitude) * cl.amplitude * np.exp(
                1j * (ck.momentum.dot(x) - cl.momentum.dot(x))
            )
            psum = ck.momentum + cl.momentum
            conv += weight * (bar_k @ ul) * psum.as_array() / (2.0 * m)
            q_lower = (ck.momentum - cl.momentum).lower()
            s_block = np.einsum("n,mnab,a,b->m", q_lower, SPIN_TENSOR, bar_k, ul)
            spin += weight * 1j * s_block / m
    scale = float(max(np.max(np.abs(conv)), np.max(np.abs(spin)), 1e-300))
    return GordonTerms(_real_four_vector(conv, scale), _real_four_vector(spin, scale))


def footnote_identity_check(p: FourVector, spin: int, mass: float) -> float:
    """p_mu (u_bar gamma^mu u) for a single unit-amplitude wave.

    Equals the rest mass for any on-shell momentum and either spin label.
    """
    state = DiracPlaneWaveState((PlaneWaveComponent(1.0 + 0.0j, p, spin),), mass)
    j = dirac_current(state, FourVector(0.0, np.zeros(3)))
    return float(p.dot(j))


def current_conservation_residual(state: DiracPlaneWaveState) -> float:
    """Max |(p_k - p_l) . (u_bar_k gamma u_l)| over all component pairs.

    Each bilinear contraction is the divergence of one interference term
    of the current (up to its phase factor), so the maximum bounds
    |d_mu j^mu| everywhere.
    """
    worst = 0.0
    for k, uk in enumerate(state.spinors):
        bar_k = adjoint(uk)
        for l, ul in enumerate(state.spinors):
            q = state.components[k].momentum - state.components[l].momentum
            j_kl = np.array([bar_k @ GAMMAS[mu] @ ul for mu in range(4)])
            worst = max(worst, abs(complex(q.lower() @ j_kl)))
    return worst


def random_state(rng: np.random.Generator, n_waves: int, mass: float,
                 momentum_scale: float = 0.8) -> DiracPlaneWaveState:
    """Reproducible random superposition of on-shell waves."""
    comps = []
    for _ in range(n_waves):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        p3 = direction * rng.uniform(0.0, momentum_scale * mass)
        amp = complex(rng.normal(), rng.normal())
        spin = 1 if rng.uniform() < 0.5 else -1
        comps.append(PlaneWaveComponent(amp, on_shell_momentum(p3, mass), spin))
    return DiracPlaneWaveState(tuple(comps), mass)


def random_event(rng: np.random.Generator, scale: float = 5.0) -> FourVector:
    return FourVector(rng.uniform(-scale, scale), rng.uniform(-scale, scale, size=3))
