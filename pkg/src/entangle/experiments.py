"""Named, reproducible parameter sweeps over the entanglement pipeline.

Each sweep is a pure map over its grid: every grid point is evaluated
independently through :func:`entangle.dynamics.run_pipeline`, instability
is recorded as data (not an error), and the emitted records are
independent of evaluation order and worker count.  Set the environment
variable ``ENTANGLE_THREADS`` to evaluate grid points concurrently.

Axis values and record diagnostics use reporting units: ordinary
frequency (Hz) for rates, couplings and detunings, millikelvin for
temperature, and multiples of pi for the mixing angle.  The baseline
parameter set itself is angular (rad/s), matching the model layer.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import PipelineResult, run_pipeline
from .errors import ParameterError
from .model import (
    DEFAULT_G0,
    TWO_PI,
    SystemParams,
    solve_g_omega_c_from_theta,
)

#: records with E_N below this (or unstable) count as disentangled when
#: extracting robustness thresholds; absorbs the separability clamp
EN_THRESHOLD = 1e-4

SWEEP_KINDS = ("point", "theta", "detuning", "g_minus", "kappa_grid",
               "temp_kappa_b", "generic")


@dataclass(frozen=True)
class SweepAxis:
    """One sweep axis in reporting units."""

    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise ParameterError(f"axis needs at least 2 points, got {self.count}")
        if not self.start < self.stop:
            raise ParameterError(
                f"axis start must be below stop, got [{self.start}, {self.stop}]")
        if self.scale not in ("linear", "log"):
            raise ParameterError(f"axis scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and self.start <= 0.0:
            raise ParameterError("log-scaled axis requires positive endpoints")

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """Which sweep to run and on what grid (None axes take defaults)."""

    kind: str = "theta"
    axis: SweepAxis | None = None
    axis2: SweepAxis | None = None
    param: str | None = None

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ParameterError(
                f"unknown sweep kind {self.kind!r}; choose from {SWEEP_KINDS}")
        if self.kind == "generic" and self.param is None:
            raise ParameterError("generic sweeps need a param name")


@dataclass(frozen=True)
class Baseline:
    """Base parameter set shared by all grid points (angular units).

    Geometry comes either from an explicit ``(g, omega_c)`` pair or from
    ``theta`` via the fixed-splitting inverse (splitting = 2 omega_b).
    The drive is pinned per point to hit ``target_g_minus`` unless that
    is None, in which case ``drive_strength`` is used directly.
    """

    omega_a: float
    omega_b: float
    kappa_a: float
    kappa_c: float
    kappa_b: float
    temperature: float
    theta: float = 0.40 * math.pi
    g: float | None = None
    omega_c: float | None = None
    omega_0: float | None = None
    target_g_minus: float | None = TWO_PI * 2e6
    drive_strength: float = 0.0
    g0: float = DEFAULT_G0

    def params(self, **overrides) -> SystemParams:
        """Resolve to concrete :class:`SystemParams`.

        An overriding ``theta`` re-derives the geometry even when the
        baseline pins ``(g, omega_c)`` explicitly.
        """
        eff = replace(self, **{k: v for k, v in overrides.items()
                               if k != "target_g_minus"})
        if "theta" in overrides or eff.g is None or eff.omega_c is None:
            g, omega_c = solve_g_omega_c_from_theta(
                eff.theta, eff.omega_a, eff.omega_b)
        else:
            g, omega_c = eff.g, eff.omega_c
        omega_0 = eff.omega_0
        if omega_0 is None:
            omega_0 = 0.5 * (eff.omega_a + omega_c)
        return SystemParams(
            omega_a=eff.omega_a, omega_c=omega_c, omega_b=eff.omega_b,
            g=g, kappa_a=eff.kappa_a, kappa_c=eff.kappa_c,
            kappa_b=eff.kappa_b, temperature=eff.temperature,
            omega_0=omega_0, drive_strength=eff.drive_strength, g0=eff.g0,
        )

    def evaluate(self, **overrides) -> PipelineResult:
        target = overrides.pop("target_g_minus", self.target_g_minus)
        return run_pipeline(self.params(**overrides), target_g_minus=target)


def default_baseline(**overrides) -> Baseline:
    """The experimentally feasible cavity-magnomechanics parameter set."""
    base = Baseline(
        omega_a=TWO_PI * 10e9,
        omega_b=TWO_PI * 10e6,
        kappa_a=TWO_PI * 1e6,
        kappa_c=TWO_PI * 1e6,
        kappa_b=TWO_PI * 100.0,
        temperature=0.010,
    )
    return replace(base, **overrides) if overrides else base


@dataclass(frozen=True)
class SweepRecord:
    """One emitted grid point, in reporting units (see module docstring).

    ``max_re_eig`` stays in rad/s as the raw stability diagnostic; the
    negativities are None when the point is unstable.
    """

    axis: tuple[float, ...]
    e_n_pp: float | None
    e_n_mb: float | None
    e_n_pb: float | None
    stable: bool
    max_re_eig: float
    abs_g_plus: float
    abs_g_minus: float
    theta: float
    delta_plus: float
    delta_minus: float


@dataclass(frozen=True)
class SweepResult:
    """Ordered records of one sweep plus a machine-readable summary."""

    kind: str
    axis_names: tuple[str, ...]
    records: tuple[SweepRecord, ...]
    summary: dict

    def argmax(self):
        """Record with the largest polariton-polariton E_N, or None."""
        best = None
        for rec in self.records:
            if rec.e_n_pp is not None and (best is None or rec.e_n_pp > best.e_n_pp):
                best = rec
        return best


# -- default grids ----------------------------------------------------------

THETA_AXIS = SweepAxis(0.26, 0.49, 200)            # theta / pi
DETUNING_AXIS = SweepAxis(6e6, 14e6, 33)           # |Delta| / 2pi, Hz
G_MINUS_AXIS = SweepAxis(0.0, 6e6, 200)            # |G_-| / 2pi, Hz
KAPPA_AXIS = SweepAxis(1e5, 1e7, 60, "log")        # kappa_{a,c} / 2pi, Hz
TEMPERATURE_AXIS = SweepAxis(1.0, 500.0, 60)       # mK
KAPPA_B_AXIS = SweepAxis(1e2, 1e6, 60, "log")      # kappa_b / 2pi, Hz

#: generic sweepable parameters: config name -> (axis column, baseline
#: field, reporting-unit -> internal-unit conversion)
GENERIC_PARAMS = {
    "theta": ("theta_pi", "theta", lambda v: v * math.pi),
    "omega_a": ("omega_a_hz", "omega_a", lambda v: v * TWO_PI),
    "omega_b": ("omega_b_hz", "omega_b", lambda v: v * TWO_PI),
    "kappa_a": ("kappa_a_hz", "kappa_a", lambda v: v * TWO_PI),
    "kappa_c": ("kappa_c_hz", "kappa_c", lambda v: v * TWO_PI),
    "kappa_b": ("kappa_b_hz", "kappa_b", lambda v: v * TWO_PI),
    "temperature": ("temperature_mk", "temperature", lambda v: v * 1e-3),
    "g_minus": ("g_minus_hz", "target_g_minus", lambda v: v * TWO_PI),
}


def _worker_count():
    raw = os.environ.get("ENTANGLE_THREADS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def _map_points(fn, items):
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _record(axis, result: PipelineResult) -> SweepRecord:
    return SweepRecord(
        axis=tuple(float(a) for a in axis),
        e_n_pp=result.e_n_pp,
        e_n_mb=result.e_n_mb,
        e_n_pb=result.e_n_pb,
        stable=result.stable,
        max_re_eig=result.max_re_eig,
        abs_g_plus=abs(result.couplings.g_plus) / TWO_PI,
        abs_g_minus=abs(result.couplings.g_minus) / TWO_PI,
        theta=result.basis.theta,
        delta_plus=result.basis.delta_plus / TWO_PI,
        delta_minus=result.basis.delta_minus / TWO_PI,
    )


def _argmax_summary(result_records, axis_names):
    best = None
    for rec in result_records:
        if rec.e_n_pp is not None and (best is None or rec.e_n_pp > best.e_n_pp):
            best = rec
    if best is None:
        return None
    out = dict(zip(axis_names, best.axis))
    out["e_n_pp"] = best.e_n_pp
    return out


def evaluate_point(base: Baseline) -> SweepResult:
    """Single evaluation of the baseline itself."""
    rec = _record((), base.evaluate())
    return SweepResult("point", (), (rec,), {})


def sweep_theta(base: Baseline, axis: SweepAxis | None = None) -> SweepResult:
    """E_N versus mixing angle at fixed sideband-matched splitting.

    For every theta the pair (g, omega_c) is re-derived so the polariton
    splitting stays at 2 omega_b and the drive sits midway, giving
    delta_plus = -delta_minus = omega_b across the whole sweep.
    """
    axis = axis or THETA_AXIS
    values = axis.values()
    results = _map_points(lambda t: base.evaluate(theta=t * math.pi), values)
    records = tuple(_record((v,), r) for v, r in zip(values, results))
    names = ("theta_pi",)
    return SweepResult("theta", names, records,
                       {"argmax": _argmax_summary(records, names)})


def sweep_detuning(base: Baseline, axis: SweepAxis | None = None) -> SweepResult:
    """E_N versus the symmetric polariton-drive detuning |Delta|.

    ``g`` is frozen at the baseline-theta solution while ``omega_c``
    varies; the drive follows ``omega_0 = (omega_a + omega_c) / 2`` so
    the detunings stay symmetric.  The axis is |Delta|/2pi in Hz and
    cannot go below g/2pi (half the minimum splitting).
    """
    axis = axis or DETUNING_AXIS
    if base.g is not None and base.omega_c is not None:
        g_fixed = base.g
        theta_ref = 0.5 * math.atan2(2.0 * g_fixed,
                                     base.omega_a - base.omega_c)
    else:
        g_fixed, _ = solve_g_omega_c_from_theta(base.theta, base.omega_a,
                                                base.omega_b)
        theta_ref = base.theta
    if TWO_PI * axis.start < g_fixed:
        raise ParameterError(
            f"detuning axis starts below the splitting floor g/2pi = "
            f"{g_fixed / TWO_PI:.6g} Hz")
    # keep omega_c on the same side of omega_a as the baseline geometry
    side = -1.0 if theta_ref >= 0.25 * math.pi else 1.0

    def point(delta_hz):
        delta = TWO_PI * delta_hz
        gap = math.sqrt(max(delta * delta - g_fixed * g_fixed, 0.0))
        omega_c = base.omega_a - side * 2.0 * gap
        return base.evaluate(g=g_fixed, omega_c=omega_c, omega_0=None)

    values = axis.values()
    results = _map_points(point, values)
    records = tuple(_record((v,), r) for v, r in zip(values, results))
    names = ("delta_abs_hz",)
    return SweepResult("detuning", names, records,
                       {"argmax": _argmax_summary(records, names)})


def sweep_g_minus(base: Baseline, axis: SweepAxis | None = None) -> SweepResult:
    """E_N versus the pinned coupling |G_-| at fixed geometry."""
    axis = axis or G_MINUS_AXIS
    values = axis.values()
    results = _map_points(
        lambda v: base.evaluate(target_g_minus=TWO_PI * v), values)
    records = tuple(_record((v,), r) for v, r in zip(values, results))
    names = ("g_minus_hz",)
    summary = {"argmax": _argmax_summary(records, names)}
    unstable = [v for v, r in zip(values, records) if not r.stable]
    summary["first_unstable_g_minus_hz"] = float(min(unstable)) if unstable else None
    return SweepResult("g_minus", names, records, summary)


def sweep_kappa_grid(base: Baseline, axis: SweepAxis | None = None,
                     axis2: SweepAxis | None = None) -> SweepResult:
    """E_N over the (kappa_a, kappa_c) plane at fixed geometry."""
    axis = axis or KAPPA_AXIS
    axis2 = axis2 or KAPPA_AXIS
    grid = [(ka, kc) for ka in axis.values() for kc in axis2.values()]
    results = _map_points(
        lambda p: base.evaluate(kappa_a=TWO_PI * p[0], kappa_c=TWO_PI * p[1]),
        grid)
    records = tuple(_record(p, r) for p, r in zip(grid, results))
    names = ("kappa_a_hz", "kappa_c_hz")
    entangled = sum(1 for r in records
                    if r.e_n_pp is not None and r.e_n_pp > EN_THRESHOLD)
    return SweepResult("kappa_grid", names, records, {
        "argmax": _argmax_summary(records, names),
        "entangled_area_fraction": entangled / len(records),
    })


def sweep_temp_kappa_b(base: Baseline, axis: SweepAxis | None = None,
                       axis2: SweepAxis | None = None) -> SweepResult:
    """E_N over the (temperature, kappa_b) plane, with robustness thresholds.

    Besides the grid itself, two dedicated lines extract the thresholds:
    the smallest temperature with E_N below :data:`EN_THRESHOLD` at
    kappa_b/2pi = 100 Hz, and the smallest kappa_b below threshold at
    T = 10 mK.  A threshold is None when the grid axis never crosses it.
    """
    axis = axis or TEMPERATURE_AXIS
    axis2 = axis2 or KAPPA_B_AXIS
    grid = [(t, kb) for t in axis.values() for kb in axis2.values()]
    results = _map_points(
        lambda p: base.evaluate(temperature=p[0] * 1e-3,
                                kappa_b=TWO_PI * p[1]),
        grid)
    records = tuple(_record(p, r) for p, r in zip(grid, results))
    names = ("temperature_mk", "kappa_b_hz")

    t_line = _map_points(
        lambda t: base.evaluate(temperature=t * 1e-3, kappa_b=TWO_PI * 100.0),
        axis.values())
    kb_line = _map_points(
        lambda kb: base.evaluate(temperature=0.010, kappa_b=TWO_PI * kb),
        axis2.values())
    summary = {
        "argmax": _argmax_summary(records, names),
        "t_crit_mk": _first_below(axis.values(), t_line),
        "kappa_b_crit_hz": _first_below(axis2.values(), kb_line),
    }
    return SweepResult("temp_kappa_b", names, records, summary)


def sweep_generic(base: Baseline, param: str,
                  axis: SweepAxis) -> SweepResult:
    """Sweep a single named baseline parameter over an explicit axis."""
    if param not in GENERIC_PARAMS:
        raise ParameterError(
            f"cannot sweep {param!r}; choose from {sorted(GENERIC_PARAMS)}")
    column, field_name, convert = GENERIC_PARAMS[param]
    values = axis.values()
    results = _map_points(
        lambda v: base.evaluate(**{field_name: convert(v)}), values)
    records = tuple(_record((v,), r) for v, r in zip(values, results))
    names = (column,)
    return SweepResult("generic", names, records,
                       {"param": param,
                        "argmax": _argmax_summary(records, names)})


def _first_below(axis_values, results, threshold=EN_THRESHOLD):
    """Smallest axis value whose point is unstable or has E_N < threshold."""
    for value, result in zip(axis_values, results):
        if result.e_n_pp is None or result.e_n_pp < threshold:
            return float(value)
    return None


def run_sweep(base: Baseline, spec: SweepSpec) -> SweepResult:
    """Dispatch a sweep spec to its implementation."""
    if spec.kind == "point":
        return evaluate_point(base)
    if spec.kind == "theta":
        return sweep_theta(base, spec.axis)
    if spec.kind == "detuning":
        return sweep_detuning(base, spec.axis)
    if spec.kind == "g_minus":
        return sweep_g_minus(base, spec.axis)
    if spec.kind == "kappa_grid":
        return sweep_kappa_grid(base, spec.axis, spec.axis2)
    if spec.kind == "temp_kappa_b":
        return sweep_temp_kappa_b(base, spec.axis, spec.axis2)
    if spec.param not in GENERIC_PARAMS:
        raise ParameterError(
            f"cannot sweep {spec.param!r}; choose from {sorted(GENERIC_PARAMS)}")
    if spec.axis is None:
        raise ParameterError("generic sweeps need an explicit axis")
    return sweep_generic(base, spec.param, spec.axis)
