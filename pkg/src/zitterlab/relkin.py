"""Kinematics of particles whose charge orbits their center of mass.

The center of mass (CM) of a free spinning particle drifts at a constant
sub-luminal velocity w while the charge runs a circle of radius R at
angular frequency Omega in the CM frame, transverse to the drift -- a
helix in the lab.  The proper time used to build four-velocities here is
the CM one, d(tau) = sqrt(1 - w^2) dt, which exists for any internal
speed, including light-like and super-luminal orbital motion where the
charge's own proper time does not.

With that clock the four-velocity is v = (1, v_lab)/sqrt(1 - w^2), its
time component depends only on the drift, and the constraint p.v = m
holds identically because the drift is the orthogonal projection of the
total velocity onto the momentum direction (w.v = w^2).  The invariant
square is v.v = 1 - V_cmf^2: positive for slow internal motion, zero for
light-like orbits (Omega R = 1), negative beyond -- in any frame.

Conventions: metric signature (+,-,-,-), c = 1.  Helices are analytic,
with exact tau-derivatives up to third order, so second-derivative
identities are checked without finite differencing; a finite-difference
route exists separately as a cross-check oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError, ProperTimeUndefinedError, SuperluminalError

V2_CLASS_TOL = 1e-10


@dataclass(frozen=True)
class FourVector:
    """Minkowski vector with signature (+,-,-,-)."""

    t: float
    xyz: np.ndarray

    def __post_init__(self):
        arr = np.array(self.xyz, dtype=np.float64).reshape(3)
        arr.setflags(write=False)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "xyz", arr)

    def dot(self, other: "FourVector") -> float:
        return self.t * other.t - float(self.xyz @ other.xyz)

    def square(self) -> float:
        return self.dot(self)

    def lower(self) -> np.ndarray:
        """Covariant components (t, -x, -y, -z)."""
        return np.concatenate(([self.t], -self.xyz))

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.t], self.xyz))

    def __add__(self, other):
        return FourVector(self.t + other.t, self.xyz + other.xyz)

    def __sub__(self, other):
        return FourVector(self.t - other.t, self.xyz - other.xyz)

    def __mul__(self, a: float):
        return FourVector(a * self.t, a * self.xyz)

    __rmul__ = __mul__


def minkowski_dot(a: FourVector, b: FourVector) -> float:
    return a.dot(b)


def boost(vec: FourVector, velocity) -> FourVector:
    """Components of ``vec`` in a frame moving at ``velocity`` (passive boost)."""
    u = np.asarray(velocity, dtype=float).reshape(3)
    u2 = float(u @ u)
    if u2 >= 1.0:
        raise SuperluminalError(f"boost speed squared {u2} >= 1")
    if u2 == 0.0:
        return FourVector(vec.t, vec.xyz)
    gamma = 1.0 / np.sqrt(1.0 - u2)
    up = float(u @ vec.xyz)
    t = gamma * (vec.t - up)
    xyz = vec.xyz + ((gamma - 1.0) * up / u2 - gamma * vec.t) * u
    return FourVector(t, xyz)


def _orthonormal_plane(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors spanning the plane orthogonal to w."""
    if np.linalg.norm(w) == 0.0:
        return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    what = w / np.linalg.norm(w)
    trial = np.array([0.0, 0.0, 1.0])
    if abs(what @ trial) > 0.9:
        trial = np.array([1.0, 0.0, 0.0])
    e1 = np.cross(trial, what)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(what, e1)
    return e1, e2


@dataclass(frozen=True)
class HelicalTrajectory:
    """Analytic charge trajectory: CM drift plus transverse circular orbit.

    The orbit plane (e1, e2) must be orthogonal to the drift; that keeps
    the drift equal to the projection of the total velocity onto the
    momentum direction at every instant, which is what the p.v = m
    constraint rests on.  The orbit radius may carry a slow modulation
    R(tau) = R * (1 + mod_amp * sin(mod_freq * tau)).
    """

    mass: float
    radius: float
    omega: float
    drift: np.ndarray
    phase0: float = 0.0
    e1: np.ndarray = None
    e2: np.ndarray = None
    mod_amp: float = 0.0
    mod_freq: float = 0.0

    def __post_init__(self):
        if self.mass <= 0.0:
            raise ConfigurationError(f"mass must be positive, got {self.mass}")
        if self.radius < 0.0:
            raise ConfigurationError(f"radius must be non-negative, got {self.radius}")
        w = np.array(self.drift, dtype=float).reshape(3)
        if float(w @ w) >= 1.0:
            raise SuperluminalError(f"CM speed |w|={np.linalg.norm(w)} must be < 1")
        e1 = self.e1
        e2 = self.e2
        if e1 is None or e2 is None:
            e1, e2 = _orthonormal_plane(w)
        e1 = np.array(e1, dtype=float).reshape(3)
        e2 = np.array(e2, dtype=float).reshape(3)
        for name, e in (("e1", e1), ("e2", e2)):
            if abs(e @ e - 1.0) > 1e-12:
                raise ConfigurationError(f"{name} must be a unit vector")
            if abs(e @ w) > 1e-12:
                raise ConfigurationError(f"{name} must be orthogonal to the drift")
        if abs(e1 @ e2) > 1e-12:
            raise ConfigurationError("e1 and e2 must be orthogonal")
        for arr in (w, e1, e2):
            arr.setflags(write=False)
        object.__setattr__(self, "drift", w)
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)

    @classmethod
    def make(cls, mass, radius, omega, drift=(0.0, 0.0, 0.0), phase0=0.0,
             mod_amp=0.0, mod_freq=0.0) -> "HelicalTrajectory":
        return cls(mass=mass, radius=radius, omega=omega, drift=np.asarray(drift, float),
                   phase0=phase0, mod_amp=mod_amp, mod_freq=mod_freq)

    @classmethod
    def light_like(cls, mass, hbar=1.0, drift=(0.0, 0.0, 0.0), phase0=0.0) -> "HelicalTrajectory":
        """Orbit at the speed of light: Omega = 2m/hbar, R = hbar/2m."""
        return cls.make(mass, hbar / (2.0 * mass), 2.0 * mass / hbar, drift, phase0)

    @classmethod
    def bz(cls, mass, internal_speed, hbar=1.0, drift=(0.0, 0.0, 0.0), phase0=0.0) -> "HelicalTrajectory":
        """Orbit at frequency 2m/hbar with the requested internal speed Omega*R."""
        omega = 2.0 * mass / hbar
        return cls.make(mass, internal_speed / omega, omega, drift, phase0)

    # -- drift kinematics ---------------------------------------------------

    @property
    def drift_speed_sq(self) -> float:
        return float(self.drift @ self.drift)

    @property
    def gamma(self) -> float:
        """Lorentz factor of the CM, 1/sqrt(1 - w^2)."""
        return 1.0 / np.sqrt(1.0 - self.drift_speed_sq)

    def tau_of(self, t):
        """CM proper time: tau = t * sqrt(1 - w^2)."""
        return np.asarray(t, dtype=float) * np.sqrt(1.0 - self.drift_speed_sq)

    def time_of(self, tau):
        return np.asarray(tau, dtype=float) / np.sqrt(1.0 - self.drift_speed_sq)

    # -- orbit in the CM frame, as functions of tau --------------------------

    def radius_at(self, tau):
        tau = np.asarray(tau, dtype=float)
        return self.radius * (1.0 + self.mod_amp * np.sin(self.mod_freq * tau))

    def _radius_derivs(self, tau):
        tau = np.asarray(tau, dtype=float)
        a, eps, r0 = self.mod_amp, self.mod_freq, self.radius
        r = r0 * (1.0 + a * np.sin(eps * tau))
        r1 = r0 * a * eps * np.cos(eps * tau)
        r2 = -r0 * a * eps * eps * np.sin(eps * tau)
        r3 = -r0 * a * eps**3 * np.cos(eps * tau)
        return r, r1, r2, r3

    def _basis(self, tau):
        theta = self.omega * np.asarray(tau, dtype=float) + self.phase0
        c, s = np.cos(theta), np.sin(theta)
        radial = np.multiply.outer(c, self.e1) + np.multiply.outer(s, self.e2)
        azimuth = np.multiply.outer(-s, self.e1) + np.multiply.outer(c, self.e2)
        return radial, azimuth

    def cmf_position(self, tau):
        r, _, _, _ = self._radius_derivs(tau)
        radial, _ = self._basis(tau)
        return np.multiply.outer(r, np.ones(3)) * radial if np.ndim(r) else r * radial

    def cmf_velocity(self, tau):
        r, r1, _, _ = self._radius_derivs(tau)
        radial, azimuth = self._basis(tau)
        return self._combine(r1, radial, r * self.omega, azimuth)

    def cmf_accel(self, tau):
        r, r1, r2, _ = self._radius_derivs(tau)
        radial, azimuth = self._basis(tau)
        return self._combine(r2 - r * self.omega**2, radial, 2.0 * r1 * self.omega, azimuth)

    def cmf_jerk(self, tau):
        r, r1, r2, r3 = self._radius_derivs(tau)
        radial, azimuth = self._basis(tau)
        return self._combine(
            r3 - 3.0 * r1 * self.omega**2, radial,
            (3.0 * r2 - r * self.omega**2) * self.omega, azimuth,
        )

    @staticmethod
    def _combine(a, radial, b, azimuth):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return a[..., np.newaxis] * radial + b[..., np.newaxis] * azimuth

    def cmf_speed_sq(self, tau):
        v = self.cmf_velocity(tau)
        return np.sum(v * v, axis=-1)

    # -- lab-frame trajectory -------------------------------------------------

    def position(self, t):
        t_arr = np.asarray(t, dtype=float)
        drift_part = np.multiply.outer(t_arr, self.drift)
        return drift_part + self.cmf_position(self.tau_of(t_arr))

    def velocity(self, t):
        """Lab velocity w + V_cmf(tau)/gamma (orbit transverse to drift)."""
        tau = self.tau_of(t)
        return self.drift + self.cmf_velocity(tau) / self.gamma

    def four_position(self, t: float) -> FourVector:
        return FourVector(t, self.position(t))


# ---------------------------------------------------------------------------
# operations


def cm_proper_time(times, velocities) -> np.ndarray:
    """Integrate d(tau) = sqrt(1 - w^2) dt over sampled CM velocities.

    Uses a cubic-spline antiderivative (fourth-order accurate on smooth
    data).  ``velocities`` has one 3-vector per sample.
    """
    t = np.asarray(times, dtype=float)
    w = np.asarray(velocities, dtype=float)
    if w.ndim != 2 or w.shape != (t.size, 3):
        raise ConfigurationError(f"expected velocities of shape ({t.size}, 3), got {w.shape}")
    if np.any(np.diff(t) <= 0.0):
        raise ConfigurationError("sample times must be strictly increasing")
    speed_sq = np.sum(w * w, axis=1)
    if np.any(speed_sq >= 1.0):
        raise SuperluminalError("CM speed reaches or exceeds the speed of light")
    integrand = np.sqrt(1.0 - speed_sq)
    anti = CubicSpline(t, integrand).antiderivative()
    tau = anti(t) - anti(t[0])
    if np.any(np.diff(tau) <= 0.0):
        raise ConfigurationError("proper time not strictly increasing; refine the sampling")
    return tau


def four_velocity_new(traj: HelicalTrajectory, t: float) -> FourVector:
    """d(x)/d(tau) with the CM clock: (1, v_lab)/sqrt(1 - w^2)."""
    g = traj.gamma
    return FourVector(g, g * traj.velocity(t))


STD_CLOCK_GUARD = 1e-9  # smallest resolvable 1 - v^2 for the charge clock


def four_velocity_std(traj: HelicalTrajectory, t: float) -> FourVector:
    """Charge-clock definition (1, v)/sqrt(1 - v^2); needs |v| < 1.

    Charge speeds within ``STD_CLOCK_GUARD`` of light speed are rejected
    too: there 1 - v^2 is pure cancellation noise and the division would
    amplify roundoff instead of measuring anything.
    """
    v = traj.velocity(t)
    v2 = float(v @ v)
    if v2 >= 1.0 - STD_CLOCK_GUARD:
        raise ProperTimeUndefinedError(
            f"charge speed squared {v2:.12f} is light-like to working precision: "
            "the charge has no proper time"
        )
    g = 1.0 / np.sqrt(1.0 - v2)
    return FourVector(g, g * v)


def impulse(traj: HelicalTrajectory) -> FourVector:
    """p = m * (1, w)/sqrt(1 - w^2); constant along a free trajectory."""
    g = traj.gamma
    return FourVector(traj.mass * g, traj.mass * g * traj.drift)


@dataclass(frozen=True)
class MassConstraintReport:
    m1: float                       # (p0 - p.v)/sqrt(1 - w^2)
    pv_new: float                   # p.v with the CM clock
    projection_defect: float        # w.v - w^2
    gamma_w: float
    charge_speed_sq: float
    m2: float | None                # (p0 - p.v)/sqrt(1 - v^2), if defined
    pv_std: float | None
    pv_std_predicted: float | None  # m sqrt(1-w^2)/sqrt(1-v^2)


def mass_constraint_check(traj: HelicalTrajectory, t: float) -> MassConstraintReport:
    """Evaluate p.v with both clocks and the invariants behind them."""
    p = impulse(traj)
    v3 = traj.velocity(t)
    v2 = float(v3 @ v3)
    w2 = traj.drift_speed_sq
    sqrt_w = np.sqrt(1.0 - w2)

    p_dot_v3 = float(p.xyz @ v3)
    m1 = (p.t - p_dot_v3) / sqrt_w
    pv_new = p.dot(four_velocity_new(traj, t))
    projection = float(traj.drift @ v3) - w2

    m2 = pv_std = predicted = None
    if v2 < 1.0 - STD_CLOCK_GUARD:
        sqrt_v = np.sqrt(1.0 - v2)
        m2 = (p.t - p_dot_v3) / sqrt_v
        pv_std = p.dot(four_velocity_std(traj, t))
        predicted = traj.mass * sqrt_w / sqrt_v
    return MassConstraintReport(
        m1=float(m1),
        pv_new=float(pv_new),
        projection_defect=projection,
        gamma_w=traj.gamma,
        charge_speed_sq=v2,
        m2=None if m2 is None else float(m2),
        pv_std=None if pv_std is None else float(pv_std),
        pv_std_predicted=None if predicted is None else float(predicted),
    )


def classify_value(v_sq: float, tol: float = V2_CLASS_TOL) -> str:
    if v_sq > tol:
        return "time-like"
    if v_sq < -tol:
        return "space-like"
    return "light-like"


@dataclass(frozen=True)
class V2Sample:
    v2_lab: float           # v.v from lab components
    v2_cmf: float           # 1 - V_cmf^2, analytic
    v2_boosted: float       # after boosting v back to the CM frame
    classification: str


def classify_v2(traj: HelicalTrajectory, t: float, tol: float = V2_CLASS_TOL) -> V2Sample:
    """Square the CM-clock four-velocity in the lab and in the CM frame."""
    v = four_velocity_new(traj, t)
    v2_lab = v.square()
    v_cmf = boost(v, traj.drift)
    v2_cmf_analytic = 1.0 - float(traj.cmf_speed_sq(traj.tau_of(t)))
    return V2Sample(
        v2_lab=float(v2_lab),
        v2_cmf=v2_cmf_analytic,
        v2_boosted=float(v_cmf.square()),
        classification=classify_value(float(v2_lab), tol),
    )


@dataclass(frozen=True)
class BarutZanghiReport:
    v2: float
    vddot_dot_v: float      # second tau-derivative of v contracted with v
    defect: float           # |v2 - (1 - vddot.v * hbar^2 / 4 m^2)|
    omega: float
    bz_omega: float         # 2m/hbar
    cmf_speed_sq: float
    expected_defect: float | None  # closed form for an unmodulated helix


def barut_zanghi_check(traj: HelicalTrajectory, t: float, hbar: float = 1.0) -> BarutZanghiReport:
    """Test v^2 = 1 - (d2v/dtau2 . v) / (2m/hbar)^2 on the helix.

    The relation is specific to orbits at the frequency 2m/hbar; off that
    frequency the defect is reported, not asserted.  For a circular orbit
    the contraction is Omega^2 V^2 analytically, which the report also
    returns as ``expected_defect`` context.
    """
    tau = float(traj.tau_of(t))
    g = traj.gamma
    v = four_velocity_new(traj, t)
    vddot = FourVector(0.0, traj.cmf_jerk(tau))  # d2v/dtau2 = (0, X''')
    contraction = vddot.dot(v)
    bz_omega = 2.0 * traj.mass / hbar
    v2 = v.square()
    defect = abs(v2 - (1.0 - contraction / bz_omega**2))
    vsq_cmf = float(traj.cmf_speed_sq(tau))
    expected = None
    if traj.mod_amp == 0.0:
        expected = abs((traj.omega**2 - bz_omega**2) * vsq_cmf / bz_omega**2)
    return BarutZanghiReport(
        v2=float(v2),
        vddot_dot_v=float(contraction),
        defect=float(defect),
        omega=traj.omega,
        bz_omega=bz_omega,
        cmf_speed_sq=vsq_cmf,
        expected_defect=expected,
    )


@dataclass(frozen=True)
class V2Series:
    times: np.ndarray
    taus: np.ndarray
    v2: np.ndarray
    cmf_speed_sq: np.ndarray


def v2_time_dependence(traj: HelicalTrajectory, times) -> V2Series:
    """v^2(tau) along the trajectory; constant iff the internal speed is."""
    t = np.asarray(times, dtype=float)
    taus = traj.tau_of(t)
    v2 = np.array([four_velocity_new(traj, float(ti)).square() for ti in t])
    return V2Series(times=t, taus=taus, v2=v2, cmf_speed_sq=traj.cmf_speed_sq(taus))


def four_velocity_finite_difference(traj: HelicalTrajectory, t: float, dt: float = 1e-5) -> FourVector:
    """Numerical d(x)/d(tau) used as a cross-check of the analytic route."""
    xp = traj.four_position(t + dt)
    xm = traj.four_position(t - dt)
    dtau = float(traj.tau_of(t + dt) - traj.tau_of(t - dt))
    return FourVector((xp.t - xm.t) / dtau, (xp.xyz - xm.xyz) / dtau)


@dataclass(frozen=True)
class KinematicSample:
    """One row of a trajectory table."""

    t: float
    tau: float
    x: FourVector
    v_new: FourVector
    v_std: FourVector | None
    w_four: FourVector
    p: FourVector
    v2: float
    classification: str
    m1: float
    m2: float | None


def kinematic_sample(traj: HelicalTrajectory, t: float) -> KinematicSample:
    report = mass_constraint_check(traj, t)
    v_new = four_velocity_new(traj, t)
    v_std = None
    if report.charge_speed_sq < 1.0 - STD_CLOCK_GUARD:
        v_std = four_velocity_std(traj, t)
    g = traj.gamma
    return KinematicSample(
        t=float(t),
        tau=float(traj.tau_of(t)),
        x=traj.four_position(t),
        v_new=v_new,
        v_std=v_std,
        w_four=FourVector(g, g * traj.drift),
        p=impulse(traj),
        v2=float(v_new.square()),
        classification=classify_value(float(v_new.square())),
        m1=report.m1,
        m2=report.m2,
    )
