"""Time integration of ∂_t u = Δu − f(u)/ε² with stability control.

Two schemes:

* ``explicit-rk2``  two-stage midpoint rule; dt limited by both the stencil
                    CFL bound and the reaction stiffness ε²/max|f′|;
* ``imex``          implicit Laplacian, explicit reaction; dt limited only by
                    the reaction.  The implicit solve is exact: an FFT
                    diagonalization on the torus, and an angular FFT with a
                    prefactored tridiagonal radial solve per mode on polar
                    charts (the dt-scaled operator is symmetric tridiagonal
                    after the metric weighting, so Thomas elimination is
                    stable without pivoting).

Both schemes keep f-roots that are spatially constant as exact fixed points,
and both advance with a uniform dt chosen so the run hits t_end exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from . import geometry as geo
from .profile import PotentialSpec

__all__ = [
    "EvolutionState",
    "StepperConfig",
    "Trajectory",
    "BlowUpError",
    "MaxPrincipleReport",
    "GradientScalingReport",
    "make_stepper",
    "step",
    "run",
    "check_maximum_principle",
    "fit_overshoot_power",
    "check_gradient_scaling",
    "write_snapshot",
    "read_snapshot",
]


class BlowUpError(RuntimeError):
    def __init__(self, message: str, time: float, step_count: int, sup: float):
        super().__init__(f"{message} at t={time:.6g} (step {step_count}, sup|u|={sup:.3g})")
        self.time = time
        self.step_count = step_count
        self.sup = sup


@dataclass
class EvolutionState:
    u: geo.ScalarField
    epsilon: float
    time: float = 0.0
    step_count: int = 0
    dt: float = 0.0
    rate: np.ndarray | None = None  # last update divided by dt


@dataclass(frozen=True)
class StepperConfig:
    scheme: str = "imex"
    dt_safety: float = 0.25
    t_end: float = 0.0
    snapshot_cadence: int = 1
    dt_override: float | None = None
    k0: float | None = None  # sup bound used for the reaction stiffness; data sup if None

    def __post_init__(self) -> None:
        if self.scheme not in ("explicit-rk2", "imex"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not (0.0 < self.dt_safety <= 1.0):
            raise ValueError("dt_safety must lie in (0, 1]")
        if self.t_end < 0.0:
            raise ValueError("t_end must be nonnegative")
        if self.snapshot_cadence < 1:
            raise ValueError("snapshot_cadence must be at least 1")


# --------------------------------------------------------------------------
# steppers


class _Rk2Stepper:
    def __init__(self, chart: geo.GridChart, epsilon: float, dt: float,
                 potential: PotentialSpec, far: float | None):
        self.chart = chart
        self.epsilon = epsilon
        self.dt = dt
        self.potential = potential
        self.far = far

    def _rhs(self, values: np.ndarray) -> np.ndarray:
        fld = geo.ScalarField(self.chart, values, far_value=self.far)
        lap = geo.laplace_beltrami(fld).values
        return lap - self.potential.f(values) / self.epsilon**2

    def advance(self, values: np.ndarray) -> np.ndarray:
        k1 = self._rhs(values)
        mid = values + (0.5 * self.dt) * k1
        k2 = self._rhs(mid)
        return values + self.dt * k2


class _ImexTorusStepper:
    def __init__(self, chart: geo.GridChart, epsilon: float, dt: float,
                 potential: PotentialSpec):
        self.chart = chart
        self.epsilon = epsilon
        self.dt = dt
        self.potential = potential
        n1, n2 = chart.shape
        lam1 = (2.0 - 2.0 * np.cos(2.0 * math.pi * np.arange(n1) / n1)) / chart.h1**2
        lam2 = (2.0 - 2.0 * np.cos(2.0 * math.pi * np.arange(n2 // 2 + 1) / n2)) / chart.h2**2
        self._denom = 1.0 + dt * (lam1[:, None] + lam2[None, :])

    def advance(self, values: np.ndarray) -> np.ndarray:
        rhs = values - (self.dt / self.epsilon**2) * self.potential.f(values)
        spec = np.fft.rfft2(rhs)
        spec /= self._denom
        return np.fft.irfft2(spec, s=self.chart.shape)


class _ImexPolarStepper:
    def __init__(self, chart: geo.GridChart, epsilon: float, dt: float,
                 potential: PotentialSpec, far: float | None):
        self.chart = chart
        self.epsilon = epsilon
        self.dt = dt
        self.potential = potential
        self.dirichlet = (not chart.closed_top) and far is not None
        self.far = far if far is not None else 0.0

        n1, n2 = chart.shape
        wf, wc, h1, h2 = chart.warp_face, chart.warp_center, chart.h1, chart.h2
        rad = dt / (wc * h1 * h1)
        lo = -rad[1:] * wf[1:n1]          # coupling of row i to i-1, i = 1..n1-1
        up = -rad[:-1] * wf[1:n1]         # coupling of row i to i+1, i = 0..n1-2
        top = 2.0 * wf[n1] if self.dirichlet else wf[n1]
        radial_diag = rad * (wf[:n1] + np.concatenate([wf[1:n1], [top]]))
        s_m = 2.0 - 2.0 * np.cos(np.arange(n2 // 2 + 1) * h2)
        diag = 1.0 + radial_diag[:, None] + (dt / (wc * wc * h2 * h2))[:, None] * s_m[None, :]

        nm = n2 // 2 + 1
        piv = np.empty((n1, nm))
        w = np.zeros((n1, nm))
        piv[0] = diag[0]
        for i in range(1, n1):
            w[i] = lo[i - 1] / piv[i - 1]
            piv[i] = diag[i] - w[i] * up[i - 1]
        self._w = w
        self._binv = 1.0 / piv
        self._cup = up
        self._boundary_gain = (2.0 * wf[n1] * dt / (wc[n1 - 1] * h1 * h1)) * self.far \
            if self.dirichlet else 0.0

    def advance(self, values: np.ndarray) -> np.ndarray:
        rhs = values - (self.dt / self.epsilon**2) * self.potential.f(values)
        if self.dirichlet:
            rhs[-1, :] += self._boundary_gain
        spec = np.fft.rfft(rhs, axis=1)
        kernels.tridiag_solve_modes(self._w, self._binv, self._cup, spec)
        return np.fft.irfft(spec, n=self.chart.n2, axis=1)


def _reaction_stiffness(potential: PotentialSpec, k0: float) -> float:
    u = np.linspace(-k0, k0, 4001)
    return float(np.abs(potential.f_prime(u)).max())


def stable_dt(chart: geo.GridChart, epsilon: float, cfg: StepperConfig,
              potential: PotentialSpec, k0: float) -> float:
    """Largest admissible step for the configured scheme, before safety."""
    fp_max = _reaction_stiffness(potential, k0)
    dt_react = epsilon**2 / fp_max
    if cfg.scheme == "imex":
        return dt_react
    return min(2.0 / chart.stiffness_bound(), dt_react)


def make_stepper(chart: geo.GridChart, epsilon: float, cfg: StepperConfig,
                 potential: PotentialSpec | None = None,
                 k0: float = 1.0, far: float | None = None):
    potential = potential or PotentialSpec.quartic()
    bound = stable_dt(chart, epsilon, cfg, potential, k0)
    dt = cfg.dt_safety * bound
    if cfg.dt_override is not None:
        if cfg.dt_override > bound:
            raise ValueError(
                f"dt override {cfg.dt_override} exceeds the stability bound {bound:.3g}"
            )
        dt = cfg.dt_override
    if cfg.scheme == "explicit-rk2":
        return _Rk2Stepper(chart, epsilon, dt, potential, far)
    if chart.kind == "periodic":
        return _ImexTorusStepper(chart, epsilon, dt, potential)
    return _ImexPolarStepper(chart, epsilon, dt, potential, far)


def step(state: EvolutionState, cfg: StepperConfig,
         potential: PotentialSpec | None = None) -> EvolutionState:
    """Advance one step.  For repeated stepping prefer run(), which reuses
    the prefactored solver."""
    k0 = cfg.k0 if cfg.k0 is not None else max(1.0, float(np.abs(state.u.values).max()))
    stepper = make_stepper(state.u.chart, state.epsilon, cfg,
                           potential=potential, k0=k0, far=state.u.far_value)
    new_vals = stepper.advance(state.u.values)
    if not np.all(np.isfinite(new_vals)):
        raise BlowUpError("non-finite field value", state.time, state.step_count + 1,
                          float(np.nanmax(np.abs(new_vals))))
    rate = (new_vals - state.u.values) / stepper.dt
    fld = geo.ScalarField(state.u.chart, new_vals, time=state.time + stepper.dt,
                          far_value=state.u.far_value)
    return EvolutionState(u=fld, epsilon=state.epsilon, time=state.time + stepper.dt,
                          step_count=state.step_count + 1, dt=stepper.dt, rate=rate)


# --------------------------------------------------------------------------
# trajectories


@dataclass
class Trajectory:
    epsilon: float
    scheme: str
    dt: float
    times: list[float] = field(default_factory=list)
    snapshots: list[geo.ScalarField] = field(default_factory=list)
    rates: list[np.ndarray | None] = field(default_factory=list)
    records: list[object] = field(default_factory=list)
    extinct: bool = False
    extinction_time: float | None = None

    @property
    def final(self) -> geo.ScalarField:
        return self.snapshots[-1]


def run(u0: geo.ScalarField, epsilon: float, cfg: StepperConfig,
        monitors: list | None = None,
        potential: PotentialSpec | None = None,
        inside_mask: np.ndarray | None = None,
        extinction_level: float = -0.9) -> Trajectory:
    """Integrate to t_end, sampling every ``snapshot_cadence`` steps.

    Extinction: when ``inside_mask`` is given, the run stops once the field
    maximum over that region sits below ``extinction_level`` at two
    consecutive samples (robust to profile tails).  Monitors are callables
    ``(state) -> record`` evaluated at each sample; their outputs are stored
    in order.
    """
    potential = potential or PotentialSpec.quartic()
    monitors = monitors or []
    k0 = cfg.k0 if cfg.k0 is not None else max(1.0, float(np.abs(u0.values).max()))
    stepper = make_stepper(u0.chart, epsilon, cfg, potential=potential,
                           k0=k0, far=u0.far_value)

    if cfg.t_end <= 0.0:
        traj = Trajectory(epsilon=epsilon, scheme=cfg.scheme, dt=0.0)
        state = EvolutionState(u=u0.copy(), epsilon=epsilon)
        _sample(traj, state, monitors)
        return traj

    if cfg.dt_override is not None:
        dt = stepper.dt  # exact-dt studies: keep the requested value
        n_steps = max(1, int(round(cfg.t_end / dt)))
    else:
        n_steps = max(1, int(math.ceil(cfg.t_end / stepper.dt - 1e-12)))
        dt = cfg.t_end / n_steps
        stepper = make_stepper(u0.chart, epsilon, replace(cfg, dt_override=dt),
                               potential=potential, k0=k0, far=u0.far_value)

    traj = Trajectory(epsilon=epsilon, scheme=cfg.scheme, dt=dt)
    state = EvolutionState(u=u0.copy(), epsilon=epsilon, dt=dt)
    _sample(traj, state, monitors)

    streak = 0
    for n in range(1, n_steps + 1):
        new_vals = stepper.advance(state.u.values)
        if not np.all(np.isfinite(new_vals)):
            raise BlowUpError("non-finite field value", state.time, n,
                              float(np.nanmax(np.abs(new_vals))))
        t = n * dt
        state.rate = (new_vals - state.u.values) / dt
        state.u = geo.ScalarField(state.u.chart, new_vals, time=t,
                                  far_value=state.u.far_value)
        state.time = t
        state.step_count = n
        if n % cfg.snapshot_cadence == 0 or n == n_steps:
            _sample(traj, state, monitors)
            if inside_mask is not None:
                if float(new_vals[inside_mask].max()) < extinction_level:
                    streak += 1
                    if streak >= 2:
                        traj.extinct = True
                        traj.extinction_time = t
                        break
                else:
                    streak = 0
    return traj


def _sample(traj: Trajectory, state: EvolutionState, monitors: list) -> None:
    traj.times.append(state.time)
    traj.snapshots.append(state.u.copy())
    traj.rates.append(None if state.rate is None else state.rate.copy())
    for mon in monitors:
        traj.records.append(mon(state))


# --------------------------------------------------------------------------
# a-priori bound monitors


@dataclass(frozen=True)
class MaxPrincipleReport:
    sup_abs: float
    overshoot: float  # sup(|u| - 1)+
    within_k0: bool


def check_maximum_principle(state: EvolutionState, k0: float) -> MaxPrincipleReport:
    sup = float(np.abs(state.u.values).max())
    return MaxPrincipleReport(
        sup_abs=sup,
        overshoot=max(0.0, sup - 1.0),
        within_k0=sup <= k0 * (1.0 + 1e-12),
    )


def fit_overshoot_power(samples: list[tuple[float, float]]) -> float:
    """Fitted power p in overshoot ≈ C ε^p over an ε-sweep (log-log lsq)."""
    pts = [(e, o) for e, o in samples if o > 0.0]
    if len(pts) < 2:
        raise ValueError("need at least 2 positive overshoot samples")
    x = np.log([e for e, _ in pts])
    y = np.log([o for _, o in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


@dataclass(frozen=True)
class GradientScalingReport:
    times: tuple[float, ...]
    eps_grad_sups: tuple[float, ...]
    max_value: float


def check_gradient_scaling(traj: Trajectory, t_window: tuple[float, float],
                           mask: np.ndarray | None = None) -> GradientScalingReport:
    """ε·sup_K|∇u| at each sample inside the window (K = mask or all)."""
    times, vals = [], []
    for t, snap in zip(traj.times, traj.snapshots):
        if not (t_window[0] <= t <= t_window[1]):
            continue
        gn = np.sqrt(geo.gradient_norm_sq(snap).values)
        if mask is not None:
            gn = gn[mask]
        times.append(t)
        vals.append(traj.epsilon * float(gn.max()))
    if not vals:
        raise ValueError("no samples in the requested window")
    return GradientScalingReport(times=tuple(times), eps_grad_sups=tuple(vals),
                                 max_value=max(vals))


# --------------------------------------------------------------------------
# snapshot files


def write_snapshot(fld: geo.ScalarField, epsilon: float, path) -> None:
    """ASCII header line + row-major little-endian float64 payload."""
    form, chart = fld.chart.form, fld.chart
    far = "none" if fld.far_value is None else repr(float(fld.far_value))
    header = (
        f"acflow-snapshot kappa={form.kappa} size={form.size!r} "
        f"n1={chart.n1} n2={chart.n2} h1={chart.h1!r} h2={chart.h2!r} "
        f"epsilon={epsilon!r} time={fld.time!r} far={far}\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(fld.values, dtype="<f8").tobytes())


def read_snapshot(path) -> tuple[geo.ScalarField, float]:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").strip()
        payload = fh.read()
    fields = dict(part.split("=", 1) for part in header.split()[1:])
    kappa = int(fields["kappa"])
    size = float(fields["size"])
    form = geo.SpaceForm(kappa=kappa, size=math.pi if kappa == 1 else size)
    chart = geo.make_chart(form, int(fields["n1"]), int(fields["n2"]))
    for key, have in (("h1", chart.h1), ("h2", chart.h2)):
        if not math.isclose(float(fields[key]), have, rel_tol=1e-12):
            raise ValueError(f"snapshot {key} inconsistent with its geometry")
    values = np.frombuffer(payload, dtype="<f8").reshape(chart.shape)
    far = None if fields["far"] == "none" else float(fields["far"])
    fld = geo.ScalarField(chart, values.copy(), time=float(fields["time"]), far_value=far)
    return fld, float(fields["epsilon"])
