"""Canonical verification studies.

Each study builds its scenario, runs it, and returns plain measured numbers
(residuals, fitted orders, bound excursions, runtimes).  The acceptance test
suite and the ``verify`` CLI verb both consume these, so tolerances are
asserted in exactly one place per consumer while the runs themselves stay
identical.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import abi, claw, dalembert, dirac1d, dirac3d
from .gates import CouplingGate, null_gate
from .grids import Grid1D, Grid3D
from .spinor import SpinorField1D, make_alpha


def _fit_order(hs, errs) -> float:
    hs = np.asarray(hs, dtype=float)
    errs = np.maximum(np.asarray(errs, dtype=float), 1e-300)
    return float(np.polyfit(np.log(hs), np.log(errs), 1)[0])


# ---------------------------------------------------------------------------
# canonical pieces
# ---------------------------------------------------------------------------

def gaussian(center: float, width: float, height: float):
    return lambda x: height * np.exp(-(np.asarray(x, dtype=float) - center) ** 2
                                     / (2.0 * width ** 2))


def canonical_spinor(grid: Grid1D, kind: str = "pair",
                     width: float = 1.0) -> SpinorField1D:
    """Gaussian spinor data; 'pair' puts mass in both components, 'positive'
    keeps |u1|^2 bounded away from zero, 'right' is a pure -1 component."""
    x = grid.nodes()
    if kind == "pair":
        u1 = gaussian(0.0, width, np.sqrt(0.5))(x)
        u2 = gaussian(0.0, width, np.sqrt(0.5))(x)
    elif kind == "positive":
        u1 = np.sqrt(0.1 + gaussian(0.0, 1.0, 0.8)(x) ** 2)
        u2 = gaussian(1.0, 0.8, 0.4)(x)
    elif kind == "right":
        u1 = np.zeros_like(x)
        u2 = gaussian(0.0, 1.0, 0.9)(x)
    else:
        raise ValueError(kind)
    return SpinorField1D(grid, np.stack([u1 + 0j, u2 + 0j]))


def coupling_density(init: dalembert.InitialObservables):
    """W(t, x) at arbitrary positions from the closed-form brackets."""
    def w_fn(t, xs):
        return dalembert.eval_w_plus(init, t, xs)
    return w_fn


def density_sup(init: dalembert.InitialObservables, grid: Grid1D) -> float:
    """Exact sup of W over all (t, x): half the sum of the bracket maxima."""
    x = grid.nodes()
    return 0.5 * float(np.max(init.bracket_plus(x)) + np.max(init.bracket_minus(x)))


def hw_setup(n: int = 512, eps: float = 2e-3, alpha: float = 0.5,
             length: float = 16.0):
    """The damped time-dependent Burgers scenario with gaussian data and a
    travelling coupling density."""
    grid = Grid1D(-length / 2, length / 2, n, "periodic")
    flux = claw.relativistic_burgers_flux(delta=0.1, c0=1.0)
    gate = CouplingGate.symmetric(0.9, 1.0)
    field = canonical_spinor(grid, "pair")
    init = dalembert.InitialObservables.from_field(field, make_alpha())
    v0 = gaussian(0.0, 1.0, 0.8)(grid.nodes())
    state = claw.ClawState(grid, v0, 0.0, eps, alpha)
    return grid, flux, gate, state, coupling_density(init), density_sup(init, grid)


# ---------------------------------------------------------------------------
# 1. wave property of |u|^2 (three scenarios, refinement order)
# ---------------------------------------------------------------------------

@dataclass
class WavePropertyResult:
    residuals: dict            # scenario -> [per-n residual]
    orders: dict               # scenario -> fitted order
    ns: tuple
    runtime: float


def wave_property_study(ns=(128, 256, 512), t_final: float = 1.0) -> WavePropertyResult:
    alpha = make_alpha()
    scenarios = {
        "free": dirac1d.DiracRunConfig(lam=0.0),
        "constant_v": dirac1d.DiracRunConfig(lam=0.0, potential=lambda t, x: 0.8 + 0.0 * x),
        "thirring": dirac1d.DiracRunConfig(lam=1.0),
    }
    t0 = time.perf_counter()
    residuals = {name: [] for name in scenarios}
    for n in ns:
        grid = Grid1D(-8.0, 8.0, n, "periodic")
        # broad profile: the coarsest grid must resolve the 4th derivative
        # the residual probe differences
        field = canonical_spinor(grid, "pair", width=2.0)
        steps = int(round(t_final / grid.dx))
        for name, cfg in scenarios.items():
            traj = dirac1d.characteristics_trajectory(field, alpha, cfg, steps)
            w = traj.w_plus()
            # sample every 2nd level: on the dt = dx lattice the discrete
            # d'Alembertian annihilates transported profiles identically
            r = dalembert.wave_residual(w[::2], 2.0 * grid.dx, grid.dx,
                                        periodic_x=True)
            residuals[name].append(r)
    dxs = [16.0 / n for n in ns]
    orders = {name: _fit_order(dxs, vals) for name, vals in residuals.items()}
    return WavePropertyResult(residuals, orders, tuple(ns),
                              time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# 2. closed-form agreement and cross-solver order
# ---------------------------------------------------------------------------

@dataclass
class CrossSolverResult:
    closed_form_max_diff: float
    duhamel_dts: tuple
    duhamel_errors: list
    duhamel_order: float


def closed_form_agreement_study(n: int = 256) -> CrossSolverResult:
    alpha = make_alpha()
    grid = Grid1D(-4.0, 4.0, n, "periodic")
    u1 = gaussian(0.0, 0.7, 0.8)
    u2 = gaussian(0.5, 1.0, 0.5)
    field = SpinorField1D.from_callables(grid, u1, u2)
    init = dalembert.InitialObservables.from_callables(
        lambda x: u1(x) ** 2 + u2(x) ** 2,
        lambda x: u1(x) ** 2 - u2(x) ** 2, grid=grid)

    cfg = dirac1d.DiracRunConfig(lam=1.0, potential=lambda t, x: 0.3 + 0.0 * x)
    steps = int(round(1.0 / grid.dx))
    traj = dirac1d.characteristics_trajectory(field, alpha, cfg, steps)
    worst = 0.0
    for k, t in enumerate(traj.times):
        exact = dalembert.eval_w_plus(init, float(t), grid.nodes())
        worst = max(worst, float(np.max(np.abs(traj.w_plus()[k] - exact))))

    # reference: characteristics at 4x resolution, compared on shared nodes
    n_ref = 4 * n
    grid_ref = Grid1D(-4.0, 4.0, n_ref, "periodic")
    field_ref = SpinorField1D.from_callables(grid_ref, u1, u2)
    t_final = 0.5
    steps_ref = int(round(t_final / grid_ref.dx))
    cfg_ref = dirac1d.DiracRunConfig(lam=cfg.lam, potential=cfg.potential)
    ref = dirac1d.advance_characteristics(field_ref, alpha, cfg_ref, steps_ref)
    ref_coarse = ref.values[:, ::4]

    dts = (4e-3, 2e-3, 1e-3)
    errors = []
    for dt in dts:
        dcfg = dirac1d.DiracRunConfig(lam=cfg.lam, potential=cfg.potential,
                                      t_final=t_final, dt=dt)
        traj_d = dirac1d.solve_duhamel(field, alpha, dcfg, init_obs=init,
                                       store_every=10 ** 9)
        diff = traj_d.values[-1] - ref_coarse
        errors.append(float(np.sqrt(grid.integrate(np.sum(np.abs(diff) ** 2,
                                                          axis=0)))))
    return CrossSolverResult(worst, dts, errors, _fit_order(dts, errors))


# ---------------------------------------------------------------------------
# 3. positivity
# ---------------------------------------------------------------------------

@dataclass
class PositivityResult:
    ic_holds: bool
    min_density: float
    one_sided_max_diff: float


def positivity_study(n: int = 512, t_final: float = 1.0) -> PositivityResult:
    alpha = make_alpha()
    grid = Grid1D(-8.0, 8.0, n, "periodic")
    field = canonical_spinor(grid, "positive")
    init = dalembert.InitialObservables.from_field(field, alpha)
    ic = dalembert.check_ic_positivity(init, grid)
    cfg = dirac1d.DiracRunConfig(lam=1.0)
    steps = int(round(t_final / grid.dx))
    traj = dirac1d.characteristics_trajectory(field, alpha, cfg, steps)
    min_density = float(np.min(traj.w_plus()))

    # pure -1 component: density is the initial profile transported right
    field_r = canonical_spinor(grid, "right")
    w0 = np.sum(np.abs(field_r.values) ** 2, axis=0)
    traj_r = dirac1d.characteristics_trajectory(field_r, alpha, cfg, steps)
    worst = 0.0
    for k in range(len(traj_r.times)):
        expected = np.roll(w0, k)
        worst = max(worst, float(np.max(np.abs(traj_r.w_plus()[k] - expected))))
    return PositivityResult(ic, min_density, worst)


# ---------------------------------------------------------------------------
# 4. maximum principle
# ---------------------------------------------------------------------------

@dataclass
class MaxPrincipleResult:
    max_abs_v: float
    c0: float
    runtime: float


def max_principle_study(n: int = 512, eps: float = 2e-3,
                        t_final: float = 1.0) -> MaxPrincipleResult:
    grid, flux, gate, state, w_fn, w_sup = hw_setup(n=n, eps=eps)
    t0 = time.perf_counter()
    traj = claw.run_viscous(state, flux, gate, w_fn, t_final, w_sup=w_sup)
    return MaxPrincipleResult(float(np.max(traj.maxabs_series)), flux.c0,
                              time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# 5. entropy inequality under refinement
# ---------------------------------------------------------------------------

@dataclass
class EntropyResult:
    ns: tuple
    residual_max: list
    order: float


def entropy_study(ns=(256, 512, 1024), eps_ref: float = 2e-3,
                  n_ref: int = 512, t_final: float = 1.0,
                  n_pairs: int = 8) -> EntropyResult:
    eta = lambda v: 0.5 * np.asarray(v) ** 2
    eta_p = lambda v: np.asarray(v)
    eta_pp = lambda v: np.ones_like(np.asarray(v, dtype=float))
    maxima = []
    for n in ns:
        eps = eps_ref * n_ref / n
        grid, flux, gate, state, w_fn, w_sup = hw_setup(n=n, eps=eps)
        traj = claw.run_viscous(state, flux, gate, w_fn, t_final,
                                n_pairs=n_pairs, w_sup=w_sup)
        res = claw.entropy_residual(traj, None, eta, eta_p, eta_pp, flux, gate)
        maxima.append(float(np.max(np.maximum(res, 0.0))))
    dxs = [16.0 / n for n in ns]
    return EntropyResult(tuple(ns), maxima, _fit_order(dxs, maxima))


# ---------------------------------------------------------------------------
# 6. vanishing-viscosity Cauchy property
# ---------------------------------------------------------------------------

@dataclass
class EpsSweepResult:
    eps_list: tuple
    gaps: list
    monotone: bool
    linear_errors: list
    linear_order: float
    runtime: float


def eps_sweep_study(n: int = 2048, eps_list=(8e-3, 4e-3, 2e-3, 1e-3),
                    t_final: float = 0.5, c1: float = 0.5) -> EpsSweepResult:
    grid = Grid1D(-1.0, 1.0, n, "periodic")
    flux = claw.linear_flux(c1, c0=1.0)
    gate = null_gate()
    profile = gaussian(0.0, 0.15, 0.8)
    v0 = profile(grid.nodes())

    def exact(x):
        return profile(grid.wrap(x - c1 * t_final))

    t0 = time.perf_counter()
    report = claw.epsilon_sweep(grid, v0, flux, gate, None, list(eps_list),
                                t_final, exact_fn=exact)
    return EpsSweepResult(tuple(eps_list), report.gaps, report.monotone,
                          report.errors, report.fitted_error_order,
                          time.perf_counter() - t0)


def eps_sweep_hw_study(n: int = 2048, eps_list=(8e-3, 4e-3, 2e-3, 1e-3),
                       t_final: float = 0.5) -> EpsSweepResult:
    """Nonlinear variant on the same grid; the sequence itself is the oracle."""
    grid = Grid1D(-1.0, 1.0, n, "periodic")
    flux = claw.relativistic_burgers_flux(delta=0.1, c0=1.0)
    gate = CouplingGate.symmetric(0.9, 1.0)
    field = SpinorField1D.from_callables(
        Grid1D(-1.0, 1.0, n, "periodic"),
        gaussian(0.0, 0.3, np.sqrt(0.5)), gaussian(0.0, 0.3, np.sqrt(0.5)))
    init = dalembert.InitialObservables.from_field(field, make_alpha())
    v0 = gaussian(0.0, 0.15, 0.8)(grid.nodes())
    t0 = time.perf_counter()
    report = claw.epsilon_sweep(grid, v0, flux, gate, coupling_density(init),
                                list(eps_list), t_final, alpha_coupling=0.3)
    return EpsSweepResult(tuple(eps_list), report.gaps, report.monotone,
                          None, float("nan"), time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# 7. stability under data mollification
# ---------------------------------------------------------------------------

@dataclass
class MollificationResult:
    radii: tuple
    gaps: list
    monotone: bool


def mollification_study(n: int = 1024, radii=(1 / 8, 1 / 16, 1 / 32, 1 / 64),
                        eps: float = 4e-3, t_final: float = 1.0) -> MollificationResult:
    grid = Grid1D(-4.0, 4.0, n, "periodic")
    flux = claw.relativistic_burgers_flux(delta=0.1, c0=1.0)
    gate = CouplingGate.symmetric(0.9, 1.0)
    field = canonical_spinor(grid, "pair")
    init = dalembert.InitialObservables.from_field(field, make_alpha())
    x = grid.nodes()
    v0 = 0.6 * ((np.abs(x) < 1.0).astype(float))
    report = claw.mollification_sweep(grid, v0, flux, gate,
                                      coupling_density(init), list(radii),
                                      eps, t_final, alpha_coupling=0.3)
    return MollificationResult(tuple(radii), report.gaps, report.monotone)


# ---------------------------------------------------------------------------
# 8/9. ABI studies
# ---------------------------------------------------------------------------

def abi_canonical_setup(n: int = 512, length: float = 16.0):
    """Symmetric gated scenario: quiet boundaries (v = 0 at the seam), gates
    satisfying the support ordering with Z = sqrt(2)."""
    consts = abi.ABIConstants(0.6, 0.8)
    gates = abi.ABIGateConfig(
        g1=CouplingGate.on_interval(1.0, 1.4, 1.0),
        g2=CouplingGate.on_interval(-1.4, -1.0, 1.0),
        alpha1=0.5, alpha2=0.5)
    y = -length / 2 + length / n * np.arange(n)
    theta0 = 1.2 + 0.12 * np.exp(-(y - 0.5) ** 2 / 2.0)
    zeta0 = -1.2 - 0.12 * np.exp(-(y + 0.5) ** 2 / 2.0)
    passive0 = np.stack([
        0.1 * np.exp(-y ** 2 / 2.0),
        0.05 * np.sin(2.0 * np.pi * y / length),
        0.08 * np.exp(-(y - 1.0) ** 2 / 2.0),
        0.05 * np.cos(2.0 * np.pi * y / length),
        0.02 * np.exp(-(y + 1.0) ** 2 / 2.0),
        np.zeros_like(y)])
    state = abi.ABILagrangeState(y=y, theta=theta0, zeta=zeta0,
                                 passive=passive0, consts=consts,
                                 y_period=length)

    def w_fn(t, ys):
        return (0.5 * np.exp(-(np.asarray(ys) + t) ** 2)
                + 0.5 * np.exp(-(np.asarray(ys) - t) ** 2))

    return state, gates, w_fn


@dataclass
class ABIRegionResult:
    region_max: float
    two_z: float
    box_violation: float


def abi_region_study(n: int = 512, eps: float = 2e-3,
                     t_final: float = 1.0) -> ABIRegionResult:
    state, gates, w_fn = abi_canonical_setup(n=n)
    traj = abi.run_coupled(state, gates, w_fn, eps, t_final)
    return ABIRegionResult(float(np.max(traj.region_max)),
                           2.0 * state.consts.z, traj.box_violation)


@dataclass
class ABITransformResult:
    roundtrip_rel_error: float
    passive_ns: tuple
    passive_gaps: list
    passive_order: float
    residual_ns: tuple
    residuals: list
    residual_order: float


def abi_transform_study(ns=(256, 512, 1024)) -> ABITransformResult:
    consts = abi.ABIConstants(0.6, 0.8)
    # round trip on a smooth physical Euler state
    grid = Grid1D(-8.0, 8.0, 256, "periodic")
    x = grid.nodes()
    h = 1.2 + 0.3 * np.exp(-x ** 2 / 2.0)
    p1 = 0.25 * np.exp(-(x - 1.0) ** 2 / 2.0)
    passive = np.stack([0.1 * np.sin(2 * np.pi * x / 16.0) + 0.05 * c
                        for c in range(6)])
    e0 = abi.ABIEulerState(grid, h, p1, passive, consts)
    e1 = abi.to_euler(abi.to_lagrange(e0))
    rel = max(
        float(np.max(np.abs(e1.h - e0.h)) / np.max(np.abs(e0.h))),
        float(np.max(np.abs(e1.p1 - e0.p1)) / np.max(np.abs(e0.p1))),
        float(np.max(np.abs(e1.passive - e0.passive))
              / np.max(np.abs(e0.passive))))

    # passive: spectral (exact per mode) vs first-order upwind
    passive_gaps = []
    for n in ns:
        state, gates, _ = abi_canonical_setup(n=n)
        t_final = 0.5
        spec = abi.step_passive(state, t_final, method="spectral")
        up = state
        dt = 0.9 * up.dy / consts.z
        steps = max(1, int(np.ceil(t_final / dt)))
        dt = t_final / steps
        for _ in range(steps):
            up = abi.step_passive(up, dt, method="upwind")
        dy = state.dy
        passive_gaps.append(float(dy * np.sum(np.abs(spec.passive - up.passive))))
    dys = [16.0 / n for n in ns]
    passive_order = _fit_order(dys, passive_gaps)

    # forced Eulerian mass-equation residual under refinement
    residuals = []
    for n in ns:
        state, gates, w_fn = abi_canonical_setup(n=n)
        traj = abi.run_coupled(state, gates, w_fn, eps=2e-3 * 512 / n,
                               t_final=0.25, store_every=1,
                               advance_passive=False)
        r = abi.forced_mass_residual(traj, gates, w_fn, window=(-3.0, 3.0),
                                     n_interp=max(129, n // 4), x0=-8.0)
        residuals.append(r)
    residual_order = _fit_order(dys, residuals)
    return ABITransformResult(rel, tuple(ns), passive_gaps, passive_order,
                              tuple(ns), residuals, residual_order)


# ---------------------------------------------------------------------------
# 10. 3-D wave property
# ---------------------------------------------------------------------------

@dataclass
class Dirac3DResult:
    ns: tuple
    residuals: dict            # (potential, observable) -> [per-n residual]
    orders: dict
    max_norm_drift: float
    runtime_largest: float
    scope_probe: dict


def dirac3d_study(ns=(8, 16, 32), t_final: float = 0.4) -> Dirac3DResult:
    matrices = dirac3d.build_matrices3d()
    potentials = {
        "glassey": dirac3d.GlasseyPotential(p=3.0, lam=1.0),
        "thirring3d": dirac3d.Thirring3DPotential(lam=1.0),
    }
    residuals = {}
    drift = 0.0
    runtime_largest = 0.0
    for pname, pot in potentials.items():
        res_p, res_b = [], []
        for n in ns:
            grid = Grid3D(n=n)
            u0 = dirac3d.planar_field(grid)
            dt = 0.4 * grid.dx / np.sqrt(3.0)
            t0 = time.perf_counter()
            traj = dirac3d.evolve_spectral(u0, matrices, pot, t_final, dt)
            elapsed = time.perf_counter() - t0
            if n == max(ns):
                runtime_largest = max(runtime_largest, elapsed)
            res_p.append(dirac3d.wave_residual3d(traj.w_plus, traj.dt, grid.dx))
            res_b.append(dirac3d.wave_residual3d(traj.w_b, traj.dt, grid.dx))
            drift = max(drift, traj.max_step_norm_drift)
        residuals[(pname, "w_plus")] = res_p
        residuals[(pname, "w_b")] = res_b
    dxs = [2.0 * np.pi / n for n in ns]
    orders = {key: _fit_order(dxs, vals) for key, vals in residuals.items()}
    return Dirac3DResult(tuple(ns), residuals, orders, drift, runtime_largest,
                         dirac3d.wave_property_scope_probe())


# ---------------------------------------------------------------------------
# 11. charge conservation
# ---------------------------------------------------------------------------

@dataclass
class ChargeResult:
    drift_1d: float
    drift_3d: float
    steps_1d: int
    steps_3d: int


def charge_study(steps_1d: int = 1024, steps_3d: int = 1000) -> ChargeResult:
    alpha = make_alpha()
    grid = Grid1D(-8.0, 8.0, 1024, "periodic")
    field = canonical_spinor(grid, "pair")
    cfg = dirac1d.DiracRunConfig(lam=1.0, potential=lambda t, x: 0.4 + 0.0 * x)
    q0 = dirac1d.charge(field)
    traj = dirac1d.characteristics_trajectory(field, alpha, cfg, steps_1d,
                                              store_every=steps_1d // 8)
    drift_1d = float(np.max(np.abs(traj.charges() - q0)) / q0)

    grid3 = Grid3D(n=16)
    u0 = dirac3d.planar_field(grid3)
    matrices = dirac3d.build_matrices3d()
    dt = 0.3 * grid3.dx / np.sqrt(3.0)
    traj3 = dirac3d.evolve_spectral(u0, matrices,
                                    dirac3d.GlasseyPotential(p=3.0, lam=1.0),
                                    steps_3d * dt, dt)
    drift_3d = float(np.max(np.abs(traj3.charges - traj3.charges[0]))
                     / traj3.charges[0])
    return ChargeResult(drift_1d, drift_3d, steps_1d, steps_3d)
