"""Plane-wave augmented Born-Infeld pipeline in Lagrangian coordinates.

The 8-field plane-wave reduction splits into the Chaplygin-type pair
(h, P1) and six passive fields.  In the mass coordinate y (dy = h dx) the
pair diagonalizes into Riemann invariants

    theta = v + Z*tau,   zeta = v - Z*tau,   tau = 1/h,  v = P1/h,

transported at speeds -Z and +Z, where Z^2 = 1 + B1^2 + D1^2 is constant.
Short-wave forcing turns the pair into two gated scalar balance laws (the
same viscous kernel as the general long-wave solver, with linear flux), while
the six passive fields obey a constant-coefficient linear hyperbolic system
q_t + M q_y = 0.  The physical region h >= 1 is theta - zeta <= 2Z.

The matrix M is entered row by row from the printed Lagrangian equations; a
reality check on its spectrum guards against transcription slips.  The
measured spectrum is {+-Z (double), 0 (double)}.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._kernels import claw_step
from .claw import DEFAULT_CFL, linear_flux, stable_dt
from .errors import CFLError, ConfigurationError, StabilityError, UnphysicalStateError
from .gates import CouplingGate
from .grids import Grid1D

PASSIVE_FIELDS = ("D2", "D3", "B2", "B3", "P2", "P3")
BOUND_TOL = 1e-10


@dataclass(frozen=True)
class ABIConstants:
    """Constant longitudinal field components and Z = sqrt(1 + B1^2 + D1^2)."""

    b1: float = 0.6
    d1: float = 0.8

    @property
    def z(self) -> float:
        return float(np.sqrt(1.0 + self.b1 ** 2 + self.d1 ** 2))


def passive_matrix(consts: ABIConstants) -> np.ndarray:
    """6x6 advection matrix for q = (D2, D3, B2, B3, P2, P3) tilde fields."""
    b1, d1 = consts.b1, consts.d1
    M = np.zeros((6, 6))
    M[0, 3] = 1.0;  M[0, 4] = -d1        # D2: + d_y(B3 - D1 P2)
    M[1, 2] = -1.0; M[1, 5] = -d1        # D3: - d_y(B2 + D1 P3)
    M[2, 1] = -1.0; M[2, 4] = -b1        # B2: - d_y(D3 + B1 P2)
    M[3, 0] = 1.0;  M[3, 5] = -b1        # B3: + d_y(D2 - B1 P3)
    M[4, 0] = -d1;  M[4, 2] = -b1        # P2: - d_y(D1 D2 + B1 B2)
    M[5, 1] = -d1;  M[5, 3] = -b1        # P3: - d_y(D1 D3 + B1 B3)
    return M


def passive_spectrum(M: np.ndarray):
    """Eigen-decomposition with the hyperbolicity tripwire.

    A complex eigenvalue beyond tolerance signals a transcription error in M.
    The matrix as entered is symmetric, so an orthonormal eigenbasis is used
    for the characteristic decomposition once reality is confirmed.
    """
    vals = np.linalg.eigvals(M)
    if np.max(np.abs(vals.imag)) > 1e-10:
        raise ConfigurationError(
            "passive system is not hyperbolic: complex eigenvalue detected, "
            "check the matrix entries")
    if np.max(np.abs(M - M.T)) < 1e-12:
        lam, R = np.linalg.eigh(M)
        return lam, R, R.T
    lam, R = np.linalg.eig(M)
    return lam.real, R.real, np.linalg.inv(R).real


# ---------------------------------------------------------------------------
# states and transforms
# ---------------------------------------------------------------------------

@dataclass
class ABIEulerState:
    grid: Grid1D
    h: np.ndarray
    p1: np.ndarray
    passive: np.ndarray            # (6, n), PASSIVE_FIELDS order
    consts: ABIConstants

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        self.p1 = np.asarray(self.p1, dtype=float)
        self.passive = np.asarray(self.passive, dtype=float)
        n = self.grid.n_nodes
        if self.h.shape != (n,) or self.p1.shape != (n,) or self.passive.shape != (6, n):
            raise ConfigurationError("ABI Euler state does not match its grid")
        if np.min(self.h) < 1.0 - 1e-12:
            raise UnphysicalStateError("physical region requires h >= 1 everywhere")


@dataclass
class ABILagrangeState:
    """Riemann invariants and passive tilde fields on the mass coordinate.

    ``y`` may be non-uniform (directly out of the transform) or uniform
    (required by the steppers); ``x_nodes`` retains the Eulerian node
    positions when the state came from a transform.
    """

    y: np.ndarray
    theta: np.ndarray
    zeta: np.ndarray
    passive: np.ndarray            # (6, n) tilde fields
    consts: ABIConstants
    t: float = 0.0
    x_nodes: np.ndarray | None = None
    periodic: bool = True
    check_bounds: bool = True
    y_period: float | None = None  # full mass-circle length (periodic states)

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        self.theta = np.asarray(self.theta, dtype=float)
        self.zeta = np.asarray(self.zeta, dtype=float)
        self.passive = np.asarray(self.passive, dtype=float)
        n = self.y.size
        if self.theta.shape != (n,) or self.zeta.shape != (n,) or self.passive.shape != (6, n):
            raise ConfigurationError("ABI Lagrange state arrays are inconsistent")
        if self.check_bounds:
            diff = self.theta - self.zeta
            if np.min(diff) < -BOUND_TOL:
                raise UnphysicalStateError("theta - zeta must be nonnegative "
                                           "(tau = 1/h > 0)")
            if np.max(diff) > 2.0 * self.consts.z + BOUND_TOL:
                raise UnphysicalStateError("physical region violated: "
                                           "theta - zeta must not exceed 2Z")

    @property
    def dy(self) -> float:
        return float(self.y[1] - self.y[0])

    def tau(self) -> np.ndarray:
        return (self.theta - self.zeta) / (2.0 * self.consts.z)

    def velocity(self) -> np.ndarray:
        return 0.5 * (self.theta + self.zeta)


def to_lagrange(e: ABIEulerState) -> ABILagrangeState:
    """Mass-coordinate transform; exact nodewise division plus trapezoid y(x)."""
    if np.min(e.h) <= 0.0:
        raise UnphysicalStateError("Lagrangian transform requires h > 0")
    z = e.consts.z
    tau = 1.0 / e.h
    v = e.p1 / e.h
    x = e.grid.nodes()
    dx = e.grid.dx
    incr = 0.5 * (e.h[:-1] + e.h[1:]) * dx
    y = np.concatenate([[0.0], np.cumsum(incr)])
    period = (float(y[-1] + 0.5 * (e.h[-1] + e.h[0]) * dx)
              if e.grid.periodic else None)
    return ABILagrangeState(y=y, theta=v + z * tau, zeta=v - z * tau,
                            passive=e.passive / e.h[None, :], consts=e.consts,
                            x_nodes=x.copy(), periodic=e.grid.periodic,
                            y_period=period)


def to_euler(s: ABILagrangeState, x0: float = 0.0) -> ABIEulerState:
    """Invert the transform: h = 2Z/(theta - zeta), P1 = h*(theta + zeta)/2.

    Uses the retained Eulerian nodes when present (exact round trip);
    otherwise rebuilds x by trapezoid integration of tau over y anchored at
    x0 (quiet-boundary anchoring).  The rebuilt positions must come out
    uniform to fit a Grid1D; for evolved states use to_euler_forced, which
    carries non-uniform positions explicitly.
    """
    z = s.consts.z
    diff = s.theta - s.zeta
    if np.min(diff) <= 0.0:
        raise UnphysicalStateError("Eulerian reconstruction requires "
                                   "theta - zeta > 0")
    h = 2.0 * z / diff
    p1 = h * 0.5 * (s.theta + s.zeta)
    if s.x_nodes is not None:
        x = s.x_nodes
    else:
        tau = 1.0 / h
        dy = np.diff(s.y)
        incr = 0.5 * (tau[:-1] + tau[1:]) * dy
        x = x0 + np.concatenate([[0.0], np.cumsum(incr)])
    spacing = np.diff(x)
    dx = float(np.mean(spacing))
    if np.max(np.abs(spacing - dx)) > 1e-8 * max(dx, 1.0):
        raise UnphysicalStateError(
            "reconstructed Eulerian positions are not uniform; use "
            "to_euler_forced for evolved states")
    n = x.size
    if s.periodic:
        grid = Grid1D(float(x[0]), float(x[0] + n * dx), n, "periodic")
    else:
        grid = Grid1D(float(x[0]), float(x[-1]), n, "compact_support")
    return ABIEulerState(grid, h, p1, s.passive * h[None, :], s.consts)


def resample_uniform(s: ABILagrangeState, n: int | None = None) -> ABILagrangeState:
    """Monotone cubic resampling onto a uniform y grid (periodic label space)."""
    n = n or s.y.size
    if s.y_period is None:
        raise ConfigurationError("resample_uniform needs a periodic state with "
                                 "a known mass-circle length")
    period = s.y_period
    y_new = s.y[0] + period * np.arange(n) / n

    pad = 3
    ys = np.concatenate([s.y[-pad:] - period, s.y, s.y[:pad] + period])

    def interp(f):
        fs = np.concatenate([f[-pad:], f, f[:pad]])
        return PchipInterpolator(ys, fs)(y_new)

    return ABILagrangeState(y=y_new, theta=interp(s.theta), zeta=interp(s.zeta),
                            passive=np.stack([interp(q) for q in s.passive]),
                            consts=s.consts, t=s.t, periodic=True,
                            y_period=period)


# ---------------------------------------------------------------------------
# gates and coupling coefficients
# ---------------------------------------------------------------------------

@dataclass
class ABIGateConfig:
    """Two gates, one per Riemann invariant, with the support ordering
    a <= b <= c + 2Z <= d + 2Z that keeps the evolution inside the physical
    region."""

    g1: CouplingGate
    g2: CouplingGate
    alpha1: float
    alpha2: float

    def validate(self, consts: ABIConstants) -> None:
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise ConfigurationError("gate strengths alpha1, alpha2 must be >= 0")
        a, b = self.g1.support
        c, d = self.g2.support
        two_z = 2.0 * consts.z
        if not (a <= b <= c + two_z <= d + two_z):
            raise ConfigurationError(
                "gate support ordering violated: need a <= b <= c + 2Z <= d + 2Z "
                f"(got a={a:g}, b={b:g}, c+2Z={c + two_z:g}, d+2Z={d + two_z:g})")

    def check_initial_data(self, theta0, zeta0) -> None:
        a, b = self.g1.support
        c, d = self.g2.support
        if not (np.min(theta0) > a and np.max(theta0) < b):
            raise ConfigurationError("initial theta must lie strictly inside "
                                     "supp g1' = (a, b)")
        if not (np.min(zeta0) > c and np.max(zeta0) < d):
            raise ConfigurationError("initial zeta must lie strictly inside "
                                     "supp g2' = (c, d)")


def gamma_coeffs(h, p1, gates: ABIGateConfig, consts: ABIConstants):
    """Eulerian forcing coefficients evaluated at (h, P1).

    gamma1 = (alpha1/2Z) g1'((P1+Z)/h) - (alpha2/2Z) g2'((P1-Z)/h)
    gamma2 = (alpha1/2)  g1'((P1+Z)/h) + (alpha2/2)  g2'((P1-Z)/h)

    The arguments are the Riemann invariants theta and zeta expressed in
    Eulerian variables.
    """
    h = np.asarray(h, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    if np.any(h <= 0.0):
        raise UnphysicalStateError("gamma coefficients require h > 0")
    z = consts.z
    g1p = gates.g1.g_prime((p1 + z) / h)
    g2p = gates.g2.g_prime((p1 - z) / h)
    gamma1 = gates.alpha1 / (2.0 * z) * g1p - gates.alpha2 / (2.0 * z) * g2p
    gamma2 = gates.alpha1 / 2.0 * g1p + gates.alpha2 / 2.0 * g2p
    return gamma1, gamma2


# ---------------------------------------------------------------------------
# coupled Riemann-invariant stepping (viscous kernel, linear flux)
# ---------------------------------------------------------------------------

def _pad_periodic(arr: np.ndarray) -> np.ndarray:
    return np.concatenate([arr[-1:], arr, arr[:1]])


def _invariant_step(q: np.ndarray, flux_speed: float, gate: CouplingGate,
                    alpha: float, w_face: np.ndarray, eps: float, dt: float,
                    dy: float) -> np.ndarray:
    """One kernel step of q_t + (flux_speed*q - alpha g'(q) W)_y = eps q_yy."""
    qp = _pad_periodic(q)
    fp = flux_speed * qp
    dfp = np.full_like(qp, flux_speed)
    gpp = np.asarray(gate.g_prime(qp), dtype=float)
    gppp = np.asarray(gate.g_double_prime(qp), dtype=float)
    h_int = np.zeros_like(q)
    out = np.empty_like(q)
    claw_step(qp, fp, dfp, gpp, gppp, h_int, w_face, alpha, eps, dt, dy, out)
    return out


@dataclass
class CoupledBounds:
    theta_lo: float
    theta_hi: float
    zeta_lo: float
    zeta_hi: float
    enforce_region: bool


def coupled_bounds(s: ABILagrangeState, gates: ABIGateConfig) -> CoupledBounds:
    """Invariant box: hull of the data range and the gate support; the
    physical-region assertion engages when the ordering guarantees it."""
    a, b = gates.g1.support
    c, d = gates.g2.support
    lo1 = min(a, float(np.min(s.theta)))
    hi1 = max(b, float(np.max(s.theta)))
    lo2 = min(c, float(np.min(s.zeta)))
    hi2 = max(d, float(np.max(s.zeta)))
    enforce = hi1 - lo2 <= 2.0 * s.consts.z + BOUND_TOL
    return CoupledBounds(lo1, hi1, lo2, hi2, enforce)


def step_coupled(s: ABILagrangeState, w_plus_faces: np.ndarray,
                 gates: ABIGateConfig, eps: float, dt: float,
                 bounds: CoupledBounds | None = None,
                 cfl: float = DEFAULT_CFL) -> ABILagrangeState:
    """One explicit step of the two gated invariant equations.

    theta rides the -Z characteristic with gate g1, zeta the +Z characteristic
    with gate g2; both share the viscosity.  Box bounds and the physical
    region are asserted after the step.
    """
    z = s.consts.z
    dy = s.dy
    if not s.periodic:
        raise ConfigurationError("coupled stepping expects a uniform periodic "
                                 "mass grid (resample first)")
    wmax = float(np.max(w_plus_faces))
    gmax = max(np.max(np.abs(gates.g1.g_double_prime(
                   np.linspace(*gates.g1.support, 501)))) * gates.alpha1,
               np.max(np.abs(gates.g2.g_double_prime(
                   np.linspace(*gates.g2.support, 501)))) * gates.alpha2)
    smax = z + gmax * wmax
    if dt > cfl * dy / smax + 1e-15:
        raise CFLError(f"dt={dt:g} violates the advective restriction "
                       f"{cfl * dy / smax:g} (speed Z plus gate term)")
    if dt > dy * dy / (2.0 * eps) + 1e-15:
        raise CFLError("dt violates the diffusive restriction")
    theta = _invariant_step(s.theta, -z, gates.g1, gates.alpha1, w_plus_faces,
                            eps, dt, dy)
    zeta = _invariant_step(s.zeta, +z, gates.g2, gates.alpha2, w_plus_faces,
                           eps, dt, dy)
    if bounds is not None:
        if (np.min(theta) < bounds.theta_lo - BOUND_TOL
                or np.max(theta) > bounds.theta_hi + BOUND_TOL):
            raise StabilityError(f"theta left [{bounds.theta_lo:g}, "
                                 f"{bounds.theta_hi:g}] at t={s.t + dt:g}")
        if (np.min(zeta) < bounds.zeta_lo - BOUND_TOL
                or np.max(zeta) > bounds.zeta_hi + BOUND_TOL):
            raise StabilityError(f"zeta left [{bounds.zeta_lo:g}, "
                                 f"{bounds.zeta_hi:g}] at t={s.t + dt:g}")
        if bounds.enforce_region and np.max(theta - zeta) > 2.0 * z + BOUND_TOL:
            raise StabilityError("physical region violated: theta - zeta > 2Z")
    return replace(s, theta=theta, zeta=zeta, t=s.t + dt,
                   check_bounds=bounds.enforce_region if bounds else False)


# ---------------------------------------------------------------------------
# passive constant-coefficient system
# ---------------------------------------------------------------------------

def _spectral_shift(values: np.ndarray, shift: float, dy: float) -> np.ndarray:
    n = values.size
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=dy)
    return np.real(np.fft.ifft(np.fft.fft(values) * np.exp(1j * k * shift)))


def step_passive(s: ABILagrangeState, dt: float,
                 method: str = "spectral") -> ABILagrangeState:
    """Advance the six passive tilde fields under q_t + M q_y = 0.

    The spectral path shifts each characteristic field exactly (periodic
    grids); the upwind path is the first-order CIR scheme.
    """
    M = passive_matrix(s.consts)
    lam, R, Rinv = passive_spectrum(M)
    c = Rinv @ s.passive
    dy = s.dy
    if method == "spectral":
        if not s.periodic:
            raise ConfigurationError("spectral passive step needs a periodic grid")
        shifted = np.stack([_spectral_shift(c[j], -lam[j] * dt, dy)
                            for j in range(6)])
    elif method == "upwind":
        if np.max(np.abs(lam)) * dt > dy * (1.0 + 1e-12):
            raise CFLError("passive upwind step violates CFL")
        rows = []
        for j in range(6):
            cj = c[j]
            nu = lam[j] * dt / dy
            if lam[j] >= 0:
                rows.append(cj - nu * (cj - np.roll(cj, 1)))
            else:
                rows.append(cj - nu * (np.roll(cj, -1) - cj))
        shifted = np.stack(rows)
    else:
        raise ConfigurationError(f"unknown passive method {method!r}")
    return replace(s, passive=R @ shifted, t=s.t, check_bounds=False)


# ---------------------------------------------------------------------------
# coupled driver and Eulerian reconstruction
# ---------------------------------------------------------------------------

@dataclass
class ABITrajectory:
    y: np.ndarray
    consts: ABIConstants
    eps: float
    dt: float
    times: np.ndarray
    theta: np.ndarray              # (n_stored, n)
    zeta: np.ndarray
    passive: np.ndarray            # (n_stored, 6, n)
    region_max: np.ndarray         # per-step max of theta - zeta
    box_violation: float           # worst box-bound excursion seen


def run_coupled(s0: ABILagrangeState, gates: ABIGateConfig, w_plus_fn,
                eps: float, t_final: float, cfl: float = DEFAULT_CFL,
                store_every: int | None = None,
                advance_passive: bool = True) -> ABITrajectory:
    """Drive the coupled invariant pair (and optionally the passive fields).

    ``w_plus_fn(t, y_faces)`` supplies |u|^2 at faces of the mass grid.
    Initial data are validated against the gate supports and the support
    ordering before stepping.
    """
    gates.validate(s0.consts)
    gates.check_initial_data(s0.theta, s0.zeta)
    bounds = coupled_bounds(s0, gates)
    n = s0.y.size
    dy = s0.dy
    y_faces = s0.y[0] + dy * (np.arange(n + 1) - 0.5)
    w_probe = np.asarray(w_plus_fn(s0.t, y_faces), dtype=float)
    z = s0.consts.z
    gmax = max(np.max(np.abs(gates.g1.g_double_prime(
                   np.linspace(*gates.g1.support, 501)))) * gates.alpha1,
               np.max(np.abs(gates.g2.g_double_prime(
                   np.linspace(*gates.g2.support, 501)))) * gates.alpha2)
    smax = z + gmax * max(float(np.max(w_probe)), 1e-30) * 2.0
    grid_proxy = Grid1D(float(y_faces[0]), float(y_faces[0] + n * dy), n)
    dt_limit = stable_dt(grid_proxy, smax, eps, cfl)
    n_steps = max(1, int(np.ceil(t_final / dt_limit - 1e-12)))
    dt = t_final / n_steps
    if store_every is None:
        store_every = max(1, n_steps // 32)

    times = [s0.t]
    thetas = [s0.theta.copy()]
    zetas = [s0.zeta.copy()]
    passives = [s0.passive.copy()]
    region = [float(np.max(s0.theta - s0.zeta))]
    box_excess = 0.0
    s = s0
    for k in range(n_steps):
        w_face = np.asarray(w_plus_fn(s.t, y_faces), dtype=float)
        s = step_coupled(s, w_face, gates, eps, dt, bounds=bounds, cfl=cfl)
        if advance_passive:
            s = step_passive(s, dt)
        region.append(float(np.max(s.theta - s.zeta)))
        box_excess = max(box_excess,
                         bounds.theta_lo - float(np.min(s.theta)),
                         float(np.max(s.theta)) - bounds.theta_hi,
                         bounds.zeta_lo - float(np.min(s.zeta)),
                         float(np.max(s.zeta)) - bounds.zeta_hi)
        if (k + 1) % store_every == 0 or k + 1 == n_steps:
            times.append(s.t)
            thetas.append(s.theta.copy())
            zetas.append(s.zeta.copy())
            passives.append(s.passive.copy())
    return ABITrajectory(s0.y.copy(), s0.consts, eps, dt, np.asarray(times),
                         np.asarray(thetas), np.asarray(zetas),
                         np.asarray(passives), np.asarray(region),
                         float(box_excess))


def to_euler_forced(traj: ABITrajectory, gates: ABIGateConfig, w_plus_fn,
                    x0: float = 0.0):
    """Reconstruct Eulerian snapshots plus the interaction forcing fields.

    Each stored level is mapped through h = 2Z/(theta - zeta), the Eulerian
    positions come from trapezoid integration of tau anchored at x0 (the
    first mass node is assumed quiet: vacuum data at the seam keep it fixed),
    and the emitted forcing fields are gamma1*h*W, gamma1*P1*W + gamma2*W and
    gamma1*q*W for the passive fields.
    """
    consts = traj.consts
    z = consts.z
    out = []
    for k, t in enumerate(traj.times):
        theta = traj.theta[k]
        zeta = traj.zeta[k]
        diff = theta - zeta
        if np.min(diff) <= 0.0:
            raise UnphysicalStateError("reconstruction requires theta - zeta > 0")
        h = 2.0 * z / diff
        p1 = h * 0.5 * (theta + zeta)
        tau = 1.0 / h
        dy = np.diff(traj.y)
        incr = 0.5 * (tau[:-1] + tau[1:]) * dy
        x = x0 + np.concatenate([[0.0], np.cumsum(incr)])
        w = np.asarray(w_plus_fn(t, traj.y), dtype=float)
        gamma1, gamma2 = gamma_coeffs(h, p1, gates, consts)
        forcing = {
            "h": gamma1 * h * w,
            "p1": gamma1 * p1 * w + gamma2 * w,
        }
        for j, name in enumerate(PASSIVE_FIELDS):
            forcing[name] = gamma1 * (traj.passive[k, j] * h) * w
        out.append({"t": float(t), "x": x, "h": h, "p1": p1,
                    "passive": traj.passive[k] * h[None, :],
                    "w": w, "forcing": forcing})
    return out


def forced_mass_residual(traj: ABITrajectory, gates: ABIGateConfig, w_plus_fn,
                         window: tuple, n_interp: int = 257,
                         x0: float = 0.0) -> float:
    """Discrete residual of the forced Eulerian mass equation.

    The mass flux consistent with the Lagrangian dynamics is
    P1 + gamma1*h*W (the mass-coordinate velocity is v + gamma1*W), so the
    residual tested is  d_t h + d_x (P1 + gamma1*h*W).  Consecutive stored
    levels are interpolated onto a fixed x-window and differenced there.
    """
    snaps = to_euler_forced(traj, gates, w_plus_fn, x0=x0)
    xs = np.linspace(window[0], window[1], n_interp)
    worst = 0.0
    for k in range(len(snaps) - 1):
        s0, s1 = snaps[k], snaps[k + 1]
        dt = s1["t"] - s0["t"]
        if dt <= 0:
            continue
        def onto(s, name):
            vals = s[name] if name != "flux" else s["p1"] + s["forcing"]["h"]
            return PchipInterpolator(s["x"], vals)(xs)
        h0, h1 = onto(s0, "h"), onto(s1, "h")
        fl0, fl1 = onto(s0, "flux"), onto(s1, "flux")
        dhdt = (h1 - h0) / dt
        flux_mid = 0.5 * (fl0 + fl1)
        dflux = np.gradient(flux_mid, xs)
        resid = dhdt + dflux
        worst = max(worst, float(np.max(np.abs(resid[2:-2]))))
    return worst
