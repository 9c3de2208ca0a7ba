"""Vanishing-viscosity solver for the coupled relativistic scalar balance law

    v_t + f(t, v)_x + h(t, v) = alpha * (g'(v) |u|^2)_x + eps * v_xx,

with flux hypotheses |f_v(t, v)| <= |v| on [-c0, c0], h(t, +-c0) = 0 and
+-h_v(t, +-c0) < 0, and a gate g whose derivative vanishes for |v| >= M < c0.
The coupling density W = |u|^2 is a known function of (t, x) (closed form of
the short wave), evaluated at cell faces so the interaction differences
conservatively.

Discretization: conservative local Lax-Friedrichs on the combined flux
f - alpha*g'(v)*W, forward Euler in time with both the advective and the
diffusive step restrictions, source treated pointwise with the regularized
recipe h(t, (1 - eps) v).  The viscous solution obeys the maximum principle
|v| <= c0, checked after every step.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.legendre import leggauss

from ._kernels import claw_step
from .errors import CFLError, ConfigurationError, StabilityError
from .gates import CouplingGate, bump, null_gate
from .grids import Grid1D

DEFAULT_CFL = 0.45
COMBINED_SAFETY = 0.8
MAXP_TOL = 1e-10


# ---------------------------------------------------------------------------
# flux models
# ---------------------------------------------------------------------------

@dataclass
class FluxModel:
    """Flux f, source h and their derivatives, with the light speed c0.

    ``strict_hypotheses`` marks models expected to satisfy the full set of
    structural hypotheses; the linear-transport model (the classic
    short/long-wave system) is admitted with the checks relaxed.
    """

    f: object
    f_v: object
    f_vv: object
    h: object
    h_v: object
    c0: float
    strict_hypotheses: bool = True
    # damping-rate window for the time-dependent Burgers model, if applicable
    delta1: float | None = None
    L0: float | None = None
    a: object = None

    def validate(self, t_samples=(0.0, 0.5, 1.0), n_v: int = 201) -> None:
        """Fail fast if a stated hypothesis is violated on sampled (t, v)."""
        if self.c0 <= 0:
            raise ConfigurationError("flux: c0 must be positive")
        if not self.strict_hypotheses:
            return
        v = np.linspace(-self.c0, self.c0, n_v)
        for t in t_samples:
            if np.any(np.abs(self.f_v(t, v)) > np.abs(v) + 1e-9):
                raise ConfigurationError(
                    "flux hypothesis violated: |f_v(t, v)| <= |v| fails "
                    f"at t={t}")
            for sign in (+1.0, -1.0):
                if abs(self.h(t, sign * self.c0)) > 1e-10:
                    raise ConfigurationError(
                        f"flux hypothesis violated: h(t, {sign:+g}*c0) != 0 at t={t}")
                # both boundary equilibria must attract from inside
                if self.h_v(t, sign * self.c0) >= 0.0:
                    raise ConfigurationError(
                        "flux hypothesis violated: "
                        f"h_v(t, {sign:+g}*c0) < 0 fails at t={t}")

    def regularized_source_ok(self, eps: float, t_samples=(0.0, 0.5, 1.0)) -> None:
        """The regularized source must push inward at +-(1-eps)*c0."""
        for t in t_samples:
            if self.h(t, (1.0 - eps) * self.c0) <= 0.0 and self.strict_hypotheses:
                raise ConfigurationError(
                    "regularized source: h(t, (1-eps)*c0) > 0 fails")
            if self.h(t, -(1.0 - eps) * self.c0) >= 0.0 and self.strict_hypotheses:
                raise ConfigurationError(
                    "regularized source: -h(t, -(1-eps)*c0) > 0 fails")


def relativistic_burgers_flux(delta: float = 0.1, c0: float = 1.0) -> FluxModel:
    """Time-dependent Burgers flux v^2 / (2 a(t)) with the confining source
    (a_dot/a) v (1 - v^2/c0^2), for a(t) = exp(delta * t)."""
    if delta <= 0:
        raise ConfigurationError("relativistic Burgers model needs delta > 0 "
                                 "(a must be increasing)")
    a = lambda t: np.exp(delta * t)
    return FluxModel(
        f=lambda t, v: np.asarray(v) ** 2 / (2.0 * a(t)),
        f_v=lambda t, v: np.asarray(v) / a(t),
        f_vv=lambda t, v: np.ones_like(np.asarray(v, dtype=float)) / a(t),
        h=lambda t, v: delta * np.asarray(v) * (1.0 - np.asarray(v) ** 2 / c0 ** 2),
        h_v=lambda t, v: delta * (1.0 - 3.0 * np.asarray(v) ** 2 / c0 ** 2),
        c0=c0, delta1=delta, L0=delta, a=a)


def linear_flux(c1: float, c0: float = 1.0) -> FluxModel:
    """Linear transport flux c1*v with no source (the classic interaction model)."""
    return FluxModel(
        f=lambda t, v: c1 * np.asarray(v, dtype=float),
        f_v=lambda t, v: np.full_like(np.asarray(v, dtype=float), c1),
        f_vv=lambda t, v: np.zeros_like(np.asarray(v, dtype=float)),
        h=lambda t, v: np.zeros_like(np.asarray(v, dtype=float)),
        h_v=lambda t, v: np.zeros_like(np.asarray(v, dtype=float)),
        c0=c0, strict_hypotheses=False)


# ---------------------------------------------------------------------------
# state, stepping
# ---------------------------------------------------------------------------

@dataclass
class ClawState:
    grid: Grid1D
    v: np.ndarray
    t: float = 0.0
    eps: float = 1e-3
    alpha_coupling: float = 0.0

    def __post_init__(self):
        self.v = np.ascontiguousarray(self.v, dtype=float)
        if self.v.shape != (self.grid.n_nodes,):
            raise ConfigurationError("claw state does not match its grid")
        if self.eps <= 0.0:
            raise ConfigurationError("viscosity eps must be positive")


def mollify(values: np.ndarray, eps: float, grid: Grid1D) -> np.ndarray:
    """Convolve nodal data with the compactly supported mollifier of radius eps.

    The sampled kernel is normalized to unit discrete mass, so bounds are
    preserved (the result is a convex combination of neighbors).  A radius
    below the grid spacing degenerates to the identity.
    """
    values = np.asarray(values, dtype=float)
    if eps <= 0.0:
        raise ConfigurationError("mollify: eps must be positive")
    dx = grid.dx
    if eps < dx:
        warnings.warn("mollify: radius below grid spacing; returning a copy",
                      stacklevel=2)
        return values.copy()
    m = int(np.floor(eps / dx))
    offsets = np.arange(-m, m + 1)
    kernel = bump(offsets * dx / eps)
    kernel = kernel / kernel.sum()
    n = values.size
    if grid.periodic:
        idx = (np.arange(n)[:, None] - offsets[None, :]) % n
        return np.sum(values[idx] * kernel[None, :], axis=1)
    padded = np.concatenate([np.zeros(m), values, np.zeros(m)])
    idx = np.arange(n)[:, None] + (m - offsets)[None, :]
    return np.sum(padded[idx] * kernel[None, :], axis=1)


def _pad(arr: np.ndarray, grid: Grid1D, ghost: float = 0.0) -> np.ndarray:
    if grid.periodic:
        return np.concatenate([arr[-1:], arr, arr[:1]])
    return np.concatenate([[ghost], arr, [ghost]])


def _face_density(w_plus, grid: Grid1D) -> np.ndarray:
    """Face values of W: accept an (n+1)-array of faces or average nodes."""
    w = np.asarray(w_plus, dtype=float)
    n = grid.n_nodes
    if w.shape == (n + 1,):
        return w
    if w.shape != (n,):
        raise ConfigurationError("w_plus must have n or n+1 entries")
    wp = _pad(w, grid)
    return 0.5 * (wp[:-1] + wp[1:])


def stable_dt(grid: Grid1D, smax: float, eps: float, cfl: float = DEFAULT_CFL,
              safety: float = COMBINED_SAFETY) -> float:
    """Largest admissible step: advective CFL, diffusive bound, and the
    combined monotonicity bound dt*(smax/dx + 2 eps/dx^2) <= safety (the
    Rusanov flux adds its own diffusion on top of eps)."""
    dx = grid.dx
    cands = [dx * dx / (2.0 * eps), safety * dx * dx / (smax * dx + 2.0 * eps)]
    if smax > 0:
        cands.append(cfl * dx / smax)
    return min(cands)


def _step_arrays(state: ClawState, w_face: np.ndarray, flux: FluxModel,
                 gate: CouplingGate, dt: float):
    grid, v, t = state.grid, state.v, state.t
    vp = _pad(v, grid)
    fp = np.asarray(flux.f(t, vp), dtype=float)
    dfp = np.asarray(flux.f_v(t, vp), dtype=float)
    gpp = np.asarray(gate.g_prime(vp), dtype=float)
    gppp = np.asarray(gate.g_double_prime(vp), dtype=float)
    h_int = np.asarray(flux.h(t, (1.0 - state.eps) * v), dtype=float)
    out = np.empty_like(v)
    smax = claw_step(vp, fp, dfp, gpp, gppp, h_int, w_face,
                     state.alpha_coupling, state.eps, dt, grid.dx, out)
    return out, smax


def step_viscous(state: ClawState, w_plus, flux: FluxModel, gate: CouplingGate,
                 dt: float, cfl: float = DEFAULT_CFL,
                 enforce_max_principle: bool = True) -> ClawState:
    """One explicit step; raises CFLError up front and StabilityError if the
    updated state leaves [-c0, c0] beyond tolerance."""
    grid = state.grid
    w_face = _face_density(w_plus, grid)
    dx = grid.dx
    vp = _pad(state.v, grid)
    speeds = np.abs(np.asarray(flux.f_v(state.t, vp), dtype=float)
                    - state.alpha_coupling
                    * np.asarray(gate.g_double_prime(vp), dtype=float)
                    * np.max(w_face))
    smax = float(np.max(speeds))
    if smax > 0 and dt > cfl * dx / smax + 1e-15:
        raise CFLError(f"dt={dt:g} violates the advective restriction "
                       f"{cfl * dx / smax:g}")
    if dt > dx * dx / (2.0 * state.eps) + 1e-15:
        raise CFLError(f"dt={dt:g} violates the diffusive restriction "
                       f"{dx * dx / (2.0 * state.eps):g}")
    v_new, _ = _step_arrays(state, w_face, flux, gate, dt)
    if enforce_max_principle and np.max(np.abs(v_new)) > flux.c0 + MAXP_TOL:
        raise StabilityError(
            f"maximum principle violated at t={state.t + dt:g}: "
            f"max|v|={np.max(np.abs(v_new)):.12g} > c0={flux.c0:g}")
    return ClawState(grid, v_new, state.t + dt, state.eps, state.alpha_coupling)


# ---------------------------------------------------------------------------
# trajectories and diagnostics
# ---------------------------------------------------------------------------

@dataclass
class ClawTrajectory:
    """Stored snapshots plus per-step scalar series.

    ``pairs`` holds (t, v, v_next, w_face) tuples of consecutive-step states
    for the entropy diagnostic, which must difference at the scheme's own dt.
    """

    grid: Grid1D
    eps: float
    alpha_coupling: float
    dt: float
    times: np.ndarray
    states: np.ndarray                 # (n_stored, n)
    l2_series: np.ndarray              # int v^2 dx at every step
    grad_dissipation: np.ndarray       # cumulative eps * int |v_x|^2 dx dt
    maxabs_series: np.ndarray
    pairs: list = field(default_factory=list)

    def sample(self, t: float) -> np.ndarray:
        """Nodal values at time t, linear interpolation between snapshots."""
        times = self.times
        if t <= times[0]:
            return self.states[0]
        if t >= times[-1]:
            return self.states[-1]
        k = int(np.searchsorted(times, t) - 1)
        w = (t - times[k]) / (times[k + 1] - times[k])
        return (1.0 - w) * self.states[k] + w * self.states[k + 1]

    def final_state(self) -> np.ndarray:
        return self.states[-1]


def run_viscous(state: ClawState, flux: FluxModel, gate: CouplingGate,
                w_plus_fn, t_final: float, cfl: float = DEFAULT_CFL,
                store_every: int | None = None, n_pairs: int = 0,
                dt: float | None = None, w_sup: float | None = None,
                enforce_max_principle: bool = True) -> ClawTrajectory:
    """Drive the viscous scheme to t_final.

    ``w_plus_fn(t, x_faces)`` supplies the coupling density at faces (None
    for no coupling).  The step is chosen from the global speed bound and
    adjusted downward so snapshots land on exact step multiples.  ``w_sup``
    is a sup bound for the density over the whole run; without one, twice
    the initial sup is used (the two moving brackets can stack at most that
    high when their peaks start apart).
    """
    grid = state.grid
    flux.validate()
    flux.regularized_source_ok(state.eps)
    if np.max(np.abs(state.v)) >= flux.c0 and flux.strict_hypotheses:
        raise ConfigurationError("initial data must satisfy ||v0||_inf < c0 "
                                 "strictly")
    x_faces = grid.faces()
    if w_sup is None:
        w_probe = (0.0 if w_plus_fn is None
                   else np.asarray(w_plus_fn(state.t, x_faces), dtype=float))
        w_sup = 0.0 if w_plus_fn is None else 2.0 * float(np.max(w_probe))
    vgrid = np.linspace(-flux.c0, flux.c0, 2001)
    smax_bound = float(np.max(np.abs(flux.f_v(state.t, vgrid)))
                       + abs(state.alpha_coupling)
                       * np.max(np.abs(gate.g_double_prime(vgrid)))
                       * max(w_sup, 1e-30))
    smax_bound = max(smax_bound, 1e-12)
    dt_limit = stable_dt(grid, smax_bound, state.eps, cfl)
    if dt is not None:
        if dt > dt_limit * (1.0 + 1e-12):
            raise CFLError(f"requested dt={dt:g} exceeds stable bound {dt_limit:g}")
        dt_limit = dt
    n_steps = max(1, int(np.ceil(t_final / dt_limit - 1e-12)))
    dt_eff = t_final / n_steps
    if store_every is None:
        store_every = max(1, n_steps // 64)
    pair_steps = (set(np.linspace(1, max(1, n_steps - 1), n_pairs, dtype=int))
                  if n_pairs > 0 else set())

    zeros_face = np.zeros(grid.n_nodes + 1)
    times = [state.t]
    states = [state.v.copy()]
    l2 = [grid.integrate(state.v ** 2)]
    grad_cum = [0.0]
    maxabs = [float(np.max(np.abs(state.v)))]
    pairs = []

    cur = state
    dx = grid.dx
    for k in range(n_steps):
        w_face = (zeros_face if w_plus_fn is None
                  else np.asarray(w_plus_fn(cur.t, x_faces), dtype=float))
        v_new, _ = _step_arrays(cur, w_face, flux, gate, dt_eff)
        if enforce_max_principle and np.max(np.abs(v_new)) > flux.c0 + MAXP_TOL:
            raise StabilityError(
                f"maximum principle violated at step {k + 1}: "
                f"max|v|={np.max(np.abs(v_new)):.12g} > c0={flux.c0:g}")
        if k in pair_steps:
            pairs.append((cur.t, cur.v.copy(), v_new.copy(), w_face.copy()))
        dv = np.diff(_pad(cur.v, grid)) / dx
        grad_cum.append(grad_cum[-1] + cur.eps * dt_eff
                        * float(np.sum(dv[1:] ** 2)) * dx)
        cur = ClawState(grid, v_new, cur.t + dt_eff, cur.eps, cur.alpha_coupling)
        l2.append(grid.integrate(cur.v ** 2))
        maxabs.append(float(np.max(np.abs(cur.v))))
        if (k + 1) % store_every == 0 or k + 1 == n_steps:
            times.append(cur.t)
            states.append(cur.v.copy())

    return ClawTrajectory(grid, state.eps, state.alpha_coupling, dt_eff,
                          np.asarray(times), np.asarray(states),
                          np.asarray(l2), np.asarray(grad_cum),
                          np.asarray(maxabs), pairs)


# ---------------------------------------------------------------------------
# entropy machinery
# ---------------------------------------------------------------------------

_GL_X, _GL_W = leggauss(8)
_N_SUB = 24


def _segment_integral(fn, upper: np.ndarray) -> np.ndarray:
    """Vectorized integral of fn over [0, upper_i], composite Gauss-Legendre."""
    upper = np.asarray(upper, dtype=float)
    edges = np.linspace(0.0, 1.0, _N_SUB + 1)
    a = upper[:, None] * edges[None, :-1]
    b = upper[:, None] * edges[None, 1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    xi = mid[:, :, None] + half[:, :, None] * _GL_X[None, None, :]
    w = half[:, :, None] * _GL_W[None, None, :]
    return np.sum(w * fn(xi), axis=(1, 2))


def check_convex(eta_pp, c0: float, n: int = 201) -> None:
    v = np.linspace(-c0, c0, n)
    if np.min(np.asarray(eta_pp(v), dtype=float)) < -1e-12:
        raise ConfigurationError("entropy must be convex on [-c0, c0]")


def entropy_residual(history: ClawTrajectory, w_plus_history, eta, eta_p,
                     eta_pp, flux: FluxModel, gate: CouplingGate) -> np.ndarray:
    """Discrete entropy production of the stored consecutive-step pairs.

    Uses the scheme's own differencing: forward time difference, the Rusanov
    entropy flux with the same local speeds, the viscous entropy flux, and
    the face-valued density for the interaction terms.  Returns an array of
    shape (n_pairs, n); admissibility requires its positive part to vanish
    under (dx, eps) refinement.
    """
    if len(history.pairs) < 1:
        raise ConfigurationError("entropy_residual needs a trajectory with "
                                 "stored step pairs (n_pairs > 0)")
    check_convex(eta_pp, flux.c0)
    grid = history.grid
    dx, dt = grid.dx, history.dt
    alpha = history.alpha_coupling
    eps = history.eps
    out = []
    for idx, (t, v, v_next, w_face_stored) in enumerate(history.pairs):
        w_face = (np.asarray(w_plus_history[idx], dtype=float)
                  if w_plus_history is not None else w_face_stored)
        vp = _pad(v, grid)
        q_f = _segment_integral(lambda xi: np.asarray(flux.f_v(t, xi)) * eta_p(xi), vp)
        q_g = _segment_integral(lambda xi: np.asarray(eta_p(xi)) * gate.g_double_prime(xi), vp)
        eta_v = np.asarray(eta(vp), dtype=float)
        dfp = np.asarray(flux.f_v(t, vp), dtype=float)
        gpp2 = np.asarray(gate.g_double_prime(vp), dtype=float)
        s_face = np.maximum(np.abs(dfp[:-1] - alpha * gpp2[:-1] * w_face),
                            np.abs(dfp[1:] - alpha * gpp2[1:] * w_face))
        q_hat = (0.5 * (q_f[:-1] + q_f[1:])
                 - alpha * w_face * 0.5 * (q_g[:-1] + q_g[1:])
                 - 0.5 * s_face * (eta_v[1:] - eta_v[:-1])
                 - (eps / dx) * (eta_v[1:] - eta_v[:-1]))
        div_q = (q_hat[1:] - q_hat[:-1]) / dx
        d_w = (w_face[1:] - w_face[:-1]) / dx
        psi = np.asarray(eta_p(v)) * gate.g_prime(v) - q_g[1:-1]
        source = np.asarray(flux.h(t, (1.0 - eps) * v), dtype=float) * np.asarray(eta_p(v))
        r = (eta(v_next) - eta(v)) / dt + div_q + source - alpha * psi * d_w
        out.append(r)
    return np.asarray(out)


@dataclass
class EnergyReport:
    times: np.ndarray
    l2_series: np.ndarray
    eps_grad_cumulative: np.ndarray

    @property
    def dissipation_total(self) -> float:
        return float(self.eps_grad_cumulative[-1])


def energy_estimate(history: ClawTrajectory) -> EnergyReport:
    """Per-step int v^2 dx and the running eps * iint |v_x|^2 dx dt."""
    n = history.l2_series.size
    times = history.times[0] + history.dt * np.arange(n)
    return EnergyReport(times, history.l2_series, history.grad_dissipation)


# ---------------------------------------------------------------------------
# sweeps and probes
# ---------------------------------------------------------------------------

@dataclass
class SweepReport:
    values: list
    gaps: list                    # consecutive L1 distances
    monotone: bool
    fitted_order: float | None
    errors: list | None = None    # vs an exact reference, when available
    fitted_error_order: float | None = None
    finals: list | None = None


def fitted_order(xs, ys) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.maximum(np.asarray(ys, dtype=float), 1e-300)
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def epsilon_sweep(grid: Grid1D, v0: np.ndarray, flux: FluxModel,
                  gate: CouplingGate, w_plus_fn, eps_list, t_final: float,
                  alpha_coupling: float = 0.0, mollify_data: bool = True,
                  exact_fn=None, cfl: float = DEFAULT_CFL) -> SweepReport:
    """Run the scenario at each viscosity and report consecutive L1 gaps.

    Data are mollified with the run's own radius (the construction couples
    them); ``exact_fn(x)`` at t_final enables an error fit when the model has
    a closed-form solution.
    """
    eps_list = list(eps_list)
    if len(eps_list) < 3:
        raise ConfigurationError("epsilon_sweep needs at least 3 viscosities")
    if any(e < grid.dx for e in eps_list):
        raise ConfigurationError("epsilon_sweep: every eps must resolve the "
                                 "viscous layer (eps >= dx)")
    finals = []
    for eps in eps_list:
        data = mollify(v0, eps, grid) if mollify_data else np.asarray(v0, float)
        state = ClawState(grid, data, 0.0, eps, alpha_coupling)
        traj = run_viscous(state, flux, gate, w_plus_fn, t_final, cfl=cfl,
                           store_every=10 ** 9)
        finals.append(traj.final_state())
    dx = grid.dx
    gaps = [float(dx * np.sum(np.abs(finals[i] - finals[i + 1])))
            for i in range(len(finals) - 1)]
    monotone = all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1))
    errors = None
    err_order = None
    if exact_fn is not None:
        ref = np.asarray(exact_fn(grid.nodes()), dtype=float)
        errors = [float(dx * np.sum(np.abs(f - ref))) for f in finals]
        err_order = fitted_order(eps_list, errors)
    order = fitted_order(eps_list[:-1], gaps) if len(gaps) >= 2 else None
    return SweepReport(eps_list, gaps, monotone, order, errors, err_order,
                       finals)


def mollification_sweep(grid: Grid1D, v0: np.ndarray, flux: FluxModel,
                        gate: CouplingGate, w_plus_fn, radii, eps: float,
                        t_final: float, alpha_coupling: float = 0.0,
                        cfl: float = DEFAULT_CFL) -> SweepReport:
    """Fixed viscosity, a sequence of data mollification radii; the solution
    sequence at t_final should be L1-Cauchy (decreasing consecutive gaps)."""
    radii = list(radii)
    if len(radii) < 3:
        raise ConfigurationError("mollification_sweep needs at least 3 radii")
    finals = []
    for rad in radii:
        data = mollify(v0, rad, grid)
        state = ClawState(grid, data, 0.0, eps, alpha_coupling)
        traj = run_viscous(state, flux, gate, w_plus_fn, t_final, cfl=cfl,
                           store_every=10 ** 9)
        finals.append(traj.final_state())
    dx = grid.dx
    gaps = [float(dx * np.sum(np.abs(finals[i] - finals[i + 1])))
            for i in range(len(finals) - 1)]
    monotone = all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1))
    order = fitted_order(radii[:-1], gaps) if len(gaps) >= 2 else None
    return SweepReport(radii, gaps, monotone, order, finals=finals)


@dataclass
class NondegeneracyReport:
    samples: list                 # (k, t, near_zero_fraction, sign_changes)
    passed: bool


def nondegeneracy_probe(flux: FluxModel, gate: CouplingGate, k_samples,
                        t_samples, n_points: int = 100_001,
                        threshold: float = 1e-10,
                        max_fraction: float = 0.01) -> NondegeneracyReport:
    """Sampling diagnostic for the genuine-nonlinearity condition: the set
    {v : f_vv(t, v) - k g'''(v) = 0} should have measure zero.  Reports, per
    sampled (k, t), the fraction of a fine v-grid where the combination is
    numerically zero.  Heuristic only."""
    v = np.linspace(-flux.c0, flux.c0, n_points)
    rows = []
    ok = True
    for t in t_samples:
        fvv = np.asarray(flux.f_vv(t, v), dtype=float)
        for k in k_samples:
            phi = fvv - k * gate.g_triple_prime(v)
            frac = float(np.mean(np.abs(phi) < threshold))
            signs = np.sign(phi[np.abs(phi) >= threshold])
            changes = int(np.sum(signs[1:] != signs[:-1])) if signs.size else 0
            rows.append((float(k), float(t), frac, changes))
            if frac >= max_fraction:
                ok = False
    return NondegeneracyReport(rows, ok)
