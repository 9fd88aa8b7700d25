"""Fixed-step integration of the flow and detection of positivity loss.

The metric evolves by the autonomous system

    dx_i/dt = -2 x_i (r_i - W),    W = (sum_j r_j / a_j) / (sum_j 1/a_j),

whose weighted-mean structure makes ln V = sum_i (1/a_i) ln x_i a first
integral.  The integrator therefore works in log coordinates u_i = ln x_i:
there the invariant is linear, and Runge-Kutta steps preserve linear
invariants to roundoff, so V is conserved over any run length regardless of
step resolution.  Positivity of x is automatic in this chart as well.

A trajectory ends in one of three ways:

* an exit event: min r_i crosses zero at an accepted state, refined by
  bisection over the bracketing step;
* the horizon t_max;
* degeneration: the metric collapses in finite time while keeping positive
  Ricci curvature (one coordinate -> 0, the others -> infinity).  Fixed-step
  RK4 cannot follow a collapse funnel indefinitely -- the positivity region
  narrows below both the step resolution and the roundoff floor of the Ricci
  evaluation -- so the run stops, raising :class:`FlowBlowUpError`, once the
  per-step log-motion or the coordinate ratio passes its guard.  Stopping
  there is what keeps sign tests trustworthy at every accepted state.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .catalog import SpaceParams
from .curvature import (MetricPoint, RicciComponents, ricci_components_log))

#: refined exit states satisfy |min r_i| <= this
EXIT_REFINE_TOL = 1e-10

#: abort once max x_i / min x_i exceeds this (degenerate metric)
RATIO_GUARD = 1e12

#: abort once a single step would move some ln x_i by more than this
STEP_GUARD = 0.5

_LOG_RATIO_GUARD = math.log(RATIO_GUARD)


class FlowError(Exception):
    """Base class for integration failures; carries the partial trajectory."""

    def __init__(self, message: str, trajectory: "Trajectory"):
        super().__init__(message)
        self.trajectory = trajectory


class FlowBlowUpError(FlowError):
    """The metric degenerated: ratio or step-resolution guard tripped."""


class FlowNumericError(FlowError):
    """Non-finite state encountered."""


class SamplingError(Exception):
    pass


@dataclass(frozen=True)
class FlowState:
    """One accepted point of a trajectory."""

    t: float
    x: MetricPoint
    r: RicciComponents
    v: float


@dataclass(frozen=True)
class CrossingEvent:
    """A refined zero crossing of min r_i.  kind is 'exit' (into min r <= 0)
    or 'enter' (back into the positivity region)."""

    kind: str
    t: float
    x: tuple[float, float, float]
    min_r: float


@dataclass
class Trajectory:
    """Time-stamped flow history with per-state Ricci data and first integral."""

    params: SpaceParams
    ts: np.ndarray
    xs: np.ndarray
    rs: np.ndarray
    vs: np.ndarray
    events: list[CrossingEvent] = field(default_factory=list)
    verdict: str = "stayed-within-horizon"
    h: float = 0.0

    @property
    def exit_event(self) -> CrossingEvent | None:
        for e in self.events:
            if e.kind == "exit":
                return e
        return None

    @property
    def n_states(self) -> int:
        return len(self.ts)

    @property
    def max_v_drift(self) -> float:
        """max |V(t)/V(0) - 1| over the recorded states."""
        if len(self.vs) == 0:
            return 0.0
        ln = np.log(self.vs) - math.log(self.vs[0])
        return float(np.max(np.abs(np.expm1(ln))))

    def state(self, i: int) -> FlowState:
        return FlowState(float(self.ts[i]), MetricPoint(*self.xs[i]),
                         RicciComponents(*self.rs[i]), float(self.vs[i]))

    def states(self):
        return (self.state(i) for i in range(self.n_states))

    def write_csv(self, stream) -> None:
        """Schema: header t,x1,x2,x3,r1,r2,r3,V; one row per accepted step;
        events appended as '# exit t=<t*> x=<x*>' comment lines."""
        stream.write("t,x1,x2,x3,r1,r2,r3,V\n")
        for i in range(self.n_states):
            row = [self.ts[i], *self.xs[i], *self.rs[i], self.vs[i]]
            stream.write(",".join(repr(float(v)) for v in row) + "\n")
        for e in self.events:
            xs = ",".join(repr(v) for v in e.x)
            stream.write(f"# {e.kind} t={e.t!r} x=({xs})\n")
        if self.verdict.startswith("aborted"):
            stream.write(f"# aborted reason={self.verdict.removeprefix('aborted-')} "
                         f"t={float(self.ts[-1])!r}\n")


def vector_field(a: SpaceParams, x: MetricPoint) -> tuple[float, float, float]:
    """Right-hand side dx_i/dt at the metric x (degree-0 homogeneous)."""
    r1, r2, r3, _ = ricci_components_log(a.a1, a.a2, a.a3,
                                         math.log(x.x1), math.log(x.x2), math.log(x.x3))
    w1, w2, w3 = 1.0 / a.a1, 1.0 / a.a2, 1.0 / a.a3
    wmean = (r1 * w1 + r2 * w2 + r3 * w3) / (w1 + w2 + w3)
    return (-2.0 * x.x1 * (r1 - wmean),
            -2.0 * x.x2 * (r2 - wmean),
            -2.0 * x.x3 * (r3 - wmean))


def _make_udot(a: SpaceParams):
    a1, a2, a3 = a.a1, a.a2, a.a3
    w1, w2, w3 = 1.0 / a1, 1.0 / a2, 1.0 / a3
    wt = w1 + w2 + w3

    def udot(u1: float, u2: float, u3: float) -> tuple[float, float, float]:
        r1, r2, r3, _ = ricci_components_log(a1, a2, a3, u1, u2, u3)
        wm = (r1 * w1 + r2 * w2 + r3 * w3) / wt
        return -2.0 * (r1 - wm), -2.0 * (r2 - wm), -2.0 * (r3 - wm)

    return udot


def _rk4_step(udot, u1, u2, u3, h):
    k11, k12, k13 = udot(u1, u2, u3)
    k21, k22, k23 = udot(u1 + 0.5 * h * k11, u2 + 0.5 * h * k12, u3 + 0.5 * h * k13)
    k31, k32, k33 = udot(u1 + 0.5 * h * k21, u2 + 0.5 * h * k22, u3 + 0.5 * h * k23)
    k41, k42, k43 = udot(u1 + h * k31, u2 + h * k32, u3 + h * k33)
    return (u1 + h / 6.0 * (k11 + 2.0 * (k21 + k31) + k41),
            u2 + h / 6.0 * (k12 + 2.0 * (k22 + k32) + k42),
            u3 + h / 6.0 * (k13 + 2.0 * (k23 + k33) + k43))


def _refine_crossing(a: SpaceParams, udot, u_pre, h: float, into_nonpositive: bool):
    """Bisect the step fraction tau in [0, h] to the zero of min r_i along the
    single-RK4-substep path from u_pre.  Returns (tau, u_at_tau, min_r)."""

    def eval_at(tau: float):
        if tau == 0.0:
            u = u_pre
        else:
            u = _rk4_step(udot, *u_pre, tau)
        r1, r2, r3, _ = ricci_components_log(a.a1, a.a2, a.a3, *u)
        return u, min(r1, r2, r3)

    lo, hi = 0.0, h
    u_hi, g_hi = eval_at(hi)
    for _ in range(200):
        if abs(g_hi) <= EXIT_REFINE_TOL:
            break
        mid = 0.5 * (lo + hi)
        u_mid, g_mid = eval_at(mid)
        inside = g_mid > 0.0 if into_nonpositive else g_mid <= 0.0
        if inside:
            lo = mid
        else:
            hi, u_hi, g_hi = mid, u_mid, g_mid
    return hi, u_hi, g_hi


def integrate(a: SpaceParams, x0: MetricPoint, t_max: float = 100.0, h: float = 1e-3,
              continue_after_exit: bool = False,
              ratio_guard: float = RATIO_GUARD,
              step_guard: float = STEP_GUARD) -> Trajectory:
    """Classical RK4 with fixed step h, recording every accepted state.

    Stops at the first exit event (bisection-refined to |min r_i| <= 1e-10)
    unless ``continue_after_exit`` is set, in which case every sign change of
    min r_i is recorded as a CrossingEvent and integration runs to the horizon.

    Raises FlowBlowUpError when the metric degenerates (coordinate ratio above
    ``ratio_guard``, or per-step log-motion above ``step_guard``) and
    FlowNumericError on non-finite states; both carry the partial trajectory.
    """
    if h <= 0.0 or t_max <= 0.0:
        raise ValueError("t_max and h must be positive")
    if h > t_max:
        raise ValueError(f"step h={h} exceeds t_max={t_max}")

    a1, a2, a3 = a.as_tuple
    w1, w2, w3 = 1.0 / a1, 1.0 / a2, 1.0 / a3
    udot = _make_udot(a)
    log_ratio_guard = math.log(ratio_guard)

    n_steps = int(math.floor(t_max / h + 1e-9))
    cap = n_steps + 2
    ts = np.empty(cap)
    xs = np.empty((cap, 3))
    rs = np.empty((cap, 3))
    vs = np.empty(cap)
    events: list[CrossingEvent] = []

    u1, u2, u3 = math.log(x0.x1), math.log(x0.x2), math.log(x0.x3)

    def record(i, t, u, r):
        ts[i] = t
        xs[i] = (math.exp(u[0]), math.exp(u[1]), math.exp(u[2]))
        rs[i] = r
        vs[i] = math.exp(u[0] * w1 + u[1] * w2 + u[2] * w3)

    def finish(n, verdict):
        return Trajectory(a, ts[:n].copy(), xs[:n].copy(), rs[:n].copy(), vs[:n].copy(),
                          events, verdict, h)

    r1, r2, r3, floor = ricci_components_log(a1, a2, a3, u1, u2, u3)
    inside = min(r1, r2, r3) > 0.0
    if not inside:
        warnings.warn("start lies outside the positive-Ricci region", stacklevel=2)
    record(0, 0.0, (u1, u2, u3), (r1, r2, r3))
    n = 1

    t = 0.0
    for _ in range(n_steps):
        k1 = udot(u1, u2, u3)
        if h * max(abs(k1[0]), abs(k1[1]), abs(k1[2])) > step_guard:
            raise FlowBlowUpError(
                f"degeneration at t={t:.6g}: step resolution guard "
                f"(h*|d ln x/dt| > {step_guard})", finish(n, "aborted-degenerate"))
        u_pre = (u1, u2, u3)
        u1 = u_pre[0] + h / 6.0 * 0.0  # overwritten below; keeps locals warm
        u1, u2, u3 = _rk4_step(udot, *u_pre, h)
        t += h
        if not (math.isfinite(u1) and math.isfinite(u2) and math.isfinite(u3)):
            raise FlowNumericError(f"non-finite state at t={t:.6g}",
                                   finish(n, "aborted-numeric"))
        if max(u1, u2, u3) - min(u1, u2, u3) > log_ratio_guard:
            raise FlowBlowUpError(
                f"degeneration at t={t:.6g}: coordinate ratio above {ratio_guard:g}",
                finish(n, "aborted-degenerate"))
        r1, r2, r3, floor = ricci_components_log(a1, a2, a3, u1, u2, u3)
        record(n, t, (u1, u2, u3), (r1, r2, r3))
        n += 1
        mr = min(r1, r2, r3)
        # a sign within the evaluation's roundoff floor is no sign at all
        now_inside = mr > 0.0 or (mr > -floor and inside)
        if inside and not now_inside:
            tau, u_ev, g_ev = _refine_crossing(a, udot, u_pre, h, into_nonpositive=True)
            x_ev = (math.exp(u_ev[0]), math.exp(u_ev[1]), math.exp(u_ev[2]))
            events.append(CrossingEvent("exit", t - h + tau, x_ev, g_ev))
            if not continue_after_exit:
                rr = ricci_components_log(a1, a2, a3, *u_ev)
                record(n - 1, t - h + tau, u_ev, rr[:3])  # replace overshoot state
                return finish(n, "exited")
        elif not inside and now_inside and mr > floor:
            tau, u_ev, g_ev = _refine_crossing(a, udot, u_pre, h, into_nonpositive=False)
            x_ev = (math.exp(u_ev[0]), math.exp(u_ev[1]), math.exp(u_ev[2]))
            events.append(CrossingEvent("enter", t - h + tau, x_ev, g_ev))
        inside = now_inside

    verdict = "exited" if any(e.kind == "exit" for e in events) else "stayed-within-horizon"
    return finish(n, verdict)


def sample_region(a: SpaceParams, count: int, seed: int, spread: float = 0.3,
                  min_separation: float = 0.05) -> list[MetricPoint]:
    """Deterministic generic starting metrics on the invariant surface, inside
    the positivity region.

    Log coordinates are drawn uniformly from [-spread, spread]^3, projected
    onto V = 1, and rejected unless min r_i > 0 and all pairwise log
    separations exceed ``min_separation``.  The separation margin keeps the
    sample away from the exceptional planes x_i = x_j, whose neighborhoods
    shadow symmetric invariant curves for long stretches and defeat fixed-step
    event detection.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    w1, w2, w3 = 1.0 / a.a1, 1.0 / a.a2, 1.0 / a.a3
    wt = w1 + w2 + w3
    rng = np.random.default_rng(seed)
    points: list[MetricPoint] = []
    tries = 0
    max_tries = 10_000 * count
    while len(points) < count:
        tries += 1
        if tries > max_tries:
            raise SamplingError(
                f"could not find {count} generic points in the positivity region "
                f"after {max_tries} draws (got {len(points)})")
        u = rng.uniform(-spread, spread, 3)
        u -= (u[0] * w1 + u[1] * w2 + u[2] * w3) / wt
        if min(abs(u[0] - u[1]), abs(u[1] - u[2]), abs(u[0] - u[2])) < min_separation:
            continue
        r1, r2, r3, _ = ricci_components_log(a.a1, a.a2, a.a3, *u)
        if min(r1, r2, r3) <= 1e-12:
            continue
        points.append(MetricPoint(math.exp(u[0]), math.exp(u[1]), math.exp(u[2])))
    return points


@dataclass
class EnsembleResult:
    """Outcome summary of many independent integrations."""

    outcomes: list[str]           # exited | stayed | degenerate | numeric-failure
    exit_times: list[float | None]
    trajectories: list[Trajectory]

    @property
    def n_exited(self) -> int:
        return sum(o == "exited" for o in self.outcomes)

    @property
    def n_stayed(self) -> int:
        return len(self.outcomes) - self.n_exited

    @property
    def first_exit_times(self) -> list[float]:
        return [t for t in self.exit_times if t is not None]


def run_ensemble(a: SpaceParams, starts: list[MetricPoint], t_max: float = 100.0,
                 h: float = 1e-3, continue_after_exit: bool = False,
                 keep_trajectories: bool = False) -> EnsembleResult:
    """Integrate each start independently and tally outcomes.

    Degeneration inside the positivity region counts as not-exited: positivity
    was never lost along the resolvable trajectory.
    """
    outcomes: list[str] = []
    exit_times: list[float | None] = []
    trajectories: list[Trajectory] = []
    for x0 in starts:
        try:
            traj = integrate(a, x0, t_max=t_max, h=h,
                             continue_after_exit=continue_after_exit)
            outcomes.append("exited" if traj.exit_event else "stayed")
        except FlowBlowUpError as err:
            traj = err.trajectory
            outcomes.append("exited" if traj.exit_event else "degenerate")
        except FlowNumericError as err:
            traj = err.trajectory
            outcomes.append("numeric-failure")
        ev = traj.exit_event
        exit_times.append(ev.t if ev else None)
        if keep_trajectories:
            trajectories.append(traj)
    return EnsembleResult(outcomes, exit_times, trajectories)
