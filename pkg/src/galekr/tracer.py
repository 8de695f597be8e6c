"""Predictor-corrector continuation along one implicit plane curve.

Follows a single real curve F = 0 inside the chamber by unit-tangent
prediction and short Newton correction, watching the signs of a stop
function g and of a higher Jacobian at the accepted points.  A sign change
is refined by bisection in the steplength, so every reported event point
still satisfies the curve equation to the corrector tolerance.  Arcs end at
the first event: a zero of g, a zero of the Jacobian, a chamber exit, or a
steplength underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

from .chamber import Chamber
from .errors import LaunchFailure, SingularPointError
from .master import MasterSystem
from .poly2 import Poly2
from .roots import VertexLaunch

Point = Tuple[float, float]
Scalar = Callable[[Point], float]

# Hard ceiling on accepted points per arc; a closed curve with no sign
# activity would otherwise cycle forever.
_MAX_STEPS = 100_000


# -- scalar fields -----------------------------------------------------------


@dataclass(frozen=True)
class CurveField:
    """Scalar field whose zero set is the traced curve.

    noise, when present, estimates the evaluation error at a point; the
    corrector treats residuals below a few times this floor as converged,
    which keeps arcs alive where the field is conditioning-limited (master
    logarithms near a facet) without loosening anything in the interior.
    """

    value: Scalar
    gradient: Callable[[Point], Tuple[float, float]]
    noise: Optional[Scalar] = None


def polynomial_field(poly: Poly2) -> CurveField:
    """Field of a polynomial curve, scaled so coefficients are O(1)."""
    s = float(poly.max_abs_coeff())
    if s == 0.0:
        raise ValueError("zero polynomial does not define a curve")
    px = poly.diff(0)
    py = poly.diff(1)

    def value(y: Point) -> float:
        return poly.eval_float(y[0], y[1]) / s

    def gradient(y: Point) -> Tuple[float, float]:
        return (px.eval_float(y[0], y[1]) / s, py.eval_float(y[0], y[1]) / s)

    return CurveField(value, gradient)


def master_field(ms: MasterSystem, j: int) -> CurveField:
    """Field of the j-th master logarithm, scaled by the largest exponent.

    Uses log|p_i|, so predictor overshoot past a facet stays evaluable; the
    tracer stops on the chamber margin before the mismatch matters.
    """
    bcol = [float(b) for b in ms.beta_column(j)]
    logc = math.log(float(ms.constants[j - 1]))
    s = max(1.0, max(abs(b) for b in bcol))
    forms = ms.forms

    def value(y: Point) -> float:
        total = logc
        for form, b in zip(forms, bcol):
            if not b:
                continue
            p = abs(form.value(y[0], y[1]))
            if p < 1e-300:
                return -math.inf if b > 0 else math.inf
            total += b * math.log(p)
        return total / s

    def gradient(y: Point) -> Tuple[float, float]:
        g1 = 0.0
        g2 = 0.0
        for form, b in zip(forms, bcol):
            if not b:
                continue
            p = form.value(y[0], y[1])
            if p == 0.0:
                raise SingularPointError("master gradient undefined on a facet")
            a1, a2 = form.gradient()
            g1 += b * a1 / p
            g2 += b * a2 / p
        return (g1 / s, g2 / s)

    def noise(y: Point) -> float:
        # log(p*(1+d)) shifts by ~d, the relative rounding of the form value.
        eps = 2.22e-16
        tot = 0.0
        for form, b in zip(forms, bcol):
            if not b:
                continue
            a1, a2 = form.gradient()
            mag = abs(form.value(0.0, 0.0)) + abs(a1 * y[0]) + abs(a2 * y[1])
            p = abs(form.value(y[0], y[1]))
            if p < 1e-300:
                return math.inf
            tot += abs(b) * eps * (mag / p + abs(math.log(p)))
        return tot / s

    return CurveField(value, gradient, noise)


# -- configuration and results ----------------------------------------------


@dataclass(frozen=True)
class TraceConfig:
    initial_step: float = 1e-2
    min_step: float = 1e-10
    max_step: float = 1e-1
    step_grow: float = 2.0
    step_shrink: float = 0.5
    newton_iters: int = 2
    newton_tol: float = 1e-12
    grow_after: int = 3
    stop_tol: float = 1e-10

    def __post_init__(self) -> None:
        if not 0.0 < self.min_step < self.initial_step <= self.max_step:
            raise ValueError("need 0 < min_step < initial_step <= max_step")


SAFE = TraceConfig()
FAST = TraceConfig(initial_step=5e-2, grow_after=2)


class StopKind(Enum):
    SOLUTION_FOUND = "solution-found"
    JACOBIAN_ZERO = "jacobian-zero"
    BOUNDARY_EXIT = "boundary-exit"
    STEP_FAILURE = "step-failure"


@dataclass(frozen=True)
class StopEvent:
    kind: StopKind
    point: Point
    detail: Dict[str, object]


@dataclass(frozen=True)
class ArcTrace:
    """One traced arc: accepted points, terminal event, sign history."""

    start: Point
    direction: Point
    steps: Tuple[Point, ...]
    event: StopEvent
    sign_log: Tuple[Tuple[int, int], ...]


def _sign(x: float) -> int:
    return (x > 0.0) - (x < 0.0)


def _dsign(x: float, tol: float) -> int:
    """Sign with a deadband: values below tol carry no sign information.

    Stage handoff points sit exactly on the detector's zero set, where the
    float value is noise of either sign; trusting it would trigger a bogus
    crossing on the first step.
    """
    if abs(x) < tol:
        return 0
    return (x > 0.0) - (x < 0.0)


def _changed(base: int, now: int) -> bool:
    # A zero on either side is not a definite change; zeros at accepted
    # points are handled as events in their own right.
    return base != 0 and now != 0 and base != now


# -- local operations --------------------------------------------------------


def tangent(curve: CurveField, y: Point, prev: Optional[Point] = None) -> Point:
    """Unit tangent at y, oriented to continue prev when given."""
    g1, g2 = curve.gradient(y)
    n = math.hypot(g1, g2)
    if n < 1e-14 or not math.isfinite(n):
        raise SingularPointError(f"curve gradient vanishes near {y}")
    t = (-g2 / n, g1 / n)
    if prev is not None and t[0] * prev[0] + t[1] * prev[1] < 0.0:
        t = (-t[0], -t[1])
    return t


def newton_correct(
    curve: CurveField, anchor: Point, tangent_dir: Point, cfg: TraceConfig
) -> Optional[Point]:
    """Newton on (F, L) from anchor, L the hyperplane through anchor
    orthogonal to the step; None on failure."""
    x, y = anchor
    t1, t2 = tangent_dir
    for _ in range(cfg.newton_iters):
        f = curve.value((x, y))
        if not math.isfinite(f):
            return None
        g1, g2 = curve.gradient((x, y))
        det = g1 * t2 - g2 * t1
        if det == 0.0 or not math.isfinite(det):
            return None
        lam = t1 * (x - anchor[0]) + t2 * (y - anchor[1])
        x += (-f * t2 + lam * g2) / det
        y += (f * t1 - g1 * lam) / det
        if not (math.isfinite(x) and math.isfinite(y)):
            return None
    tol = cfg.newton_tol
    if curve.noise is not None:
        tol = max(tol, 4.0 * curve.noise((x, y)))
    if abs(curve.value((x, y))) < tol:
        return (x, y)
    return None


def _corrected_at(
    curve: CurveField, anchor: Point, d: Point, dt: float, cfg: TraceConfig
) -> Optional[Point]:
    pred = (anchor[0] + dt * d[0], anchor[1] + dt * d[1])
    return newton_correct(curve, pred, d, cfg)


# -- arc tracing -------------------------------------------------------------


def _refine_event(
    curve: CurveField,
    g: Scalar,
    jsign: Scalar,
    anchor: Point,
    d: Point,
    h: float,
    base: Tuple[int, int],
    far: Point,
    far_signs: Tuple[int, int],
    cfg: TraceConfig,
) -> Tuple[StopKind, Point, float]:
    """Bisect the steplength to the earliest sign event in (0, h]."""
    lo, hi = 0.0, h
    sglo, sjlo = base
    pt_hi, (sghi, sjhi) = far, far_signs
    for _ in range(120):
        g_ch = _changed(sglo, sghi) or sghi == 0
        j_ch = _changed(sjlo, sjhi) or sjhi == 0
        if g_ch and not j_ch and abs(g(pt_hi)) < cfg.stop_tol:
            break
        if j_ch and not g_ch and abs(jsign(pt_hi)) < cfg.stop_tol:
            break
        if hi - lo <= cfg.min_step:
            break
        mid = 0.5 * (lo + hi)
        pm = _corrected_at(curve, anchor, d, mid, cfg)
        if pm is None:
            break
        sgm, sjm = _dsign(g(pm), cfg.newton_tol), _dsign(jsign(pm), cfg.newton_tol)
        if sgm == 0:
            return StopKind.SOLUTION_FOUND, pm, mid
        if sjm == 0 and not _changed(sglo, sgm):
            return StopKind.JACOBIAN_ZERO, pm, mid
        if _changed(sglo, sgm) or _changed(sjlo, sjm):
            hi, pt_hi, sghi, sjhi = mid, pm, sgm, sjm
        else:
            lo, sglo, sjlo = mid, sgm, sjm
    if _changed(sglo, sghi) or sghi == 0:
        return StopKind.SOLUTION_FOUND, pt_hi, hi
    return StopKind.JACOBIAN_ZERO, pt_hi, hi


def _last_inside(
    curve: CurveField,
    ch: Chamber,
    anchor: Point,
    d: Point,
    h: float,
    far: Point,
    cfg: TraceConfig,
) -> Tuple[Point, float]:
    """Latest on-curve point along the step whose margin is >= stop_tol."""
    lo, hi = 0.0, h
    plo = anchor
    for _ in range(80):
        if hi - lo <= cfg.min_step:
            break
        mid = 0.5 * (lo + hi)
        pm = _corrected_at(curve, anchor, d, mid, cfg)
        if pm is None:
            break
        if ch.margin(pm) >= cfg.stop_tol:
            lo, plo = mid, pm
        else:
            hi = mid
    return plo, lo


def _boundary_form(ch: Chamber, frm: Point, to: Point) -> int:
    cross = ch.crossing(frm, to)
    if cross is not None:
        return cross[0]
    margins = [f.value(to[0], to[1]) for f in ch.forms]
    return min(range(len(margins)), key=margins.__getitem__)


def trace_arc(
    curve: CurveField,
    g: Scalar,
    jsign: Scalar,
    ch: Chamber,
    start: Point,
    direction: Point,
    cfg: TraceConfig,
) -> ArcTrace:
    """Trace from start along direction until the first stopping event.

    The start must satisfy the curve equation to newton_tol.  Starts on the
    boundary are allowed: the exit detector stays disarmed until the trace
    has pulled at least 2*stop_tol inside, so it can leave the wall it
    started on without instantly stopping.  Signs of g and jsign are read
    at accepted points only; a zero sign at the start (the usual state for
    a stage handoff point) sets no baseline and triggers no event.
    """
    y = (float(start[0]), float(start[1]))
    steps: List[Point] = [y]
    sglog: List[Tuple[int, int]] = []

    def finish(event: StopEvent) -> ArcTrace:
        return ArcTrace(y0, direction, tuple(steps), event, tuple(sglog))

    y0 = y
    sg, sj = _dsign(g(y), cfg.newton_tol), _dsign(jsign(y), cfg.newton_tol)
    sglog.append((sg, sj))
    g_base, j_base = sg, sj
    try:
        d = tangent(curve, y, prev=direction)
    except SingularPointError as exc:
        return finish(StopEvent(StopKind.STEP_FAILURE, y, {"reason": str(exc)}))
    resid_prev = abs(curve.value(y))
    armed = ch.margin(y) >= 2 * cfg.stop_tol
    h = cfg.initial_step
    wins = 0

    for _ in range(_MAX_STEPS):
        z = _corrected_at(curve, y, d, h, cfg)
        ok = z is not None
        if ok:
            resid = abs(curve.value(z))
            corr = math.hypot(z[0] - (y[0] + h * d[0]), z[1] - (y[1] + h * d[1]))
            # Reject correction wander and residual creep even when Newton
            # converged; both are the first symptoms of curve-jumping.
            floor = 0.1 * cfg.newton_tol
            if curve.noise is not None:
                floor = max(floor, 4.0 * curve.noise(z))
            if corr > h or resid > max(2.0 * resid_prev, floor):
                ok = False
        if ok:
            try:
                dz = tangent(curve, z, prev=d)
            except SingularPointError:
                ok = False
        if not ok:
            h *= cfg.step_shrink
            wins = 0
            if h < cfg.min_step:
                return finish(
                    StopEvent(
                        StopKind.STEP_FAILURE, y, {"reason": "steplength underflow"}
                    )
                )
            continue

        m = ch.margin(z)
        limit = h
        exited = armed and m < cfg.stop_tol
        if exited:
            z_in, limit = _last_inside(curve, ch, y, d, h, z, cfg)
            sg_in, sj_in = _dsign(g(z_in), cfg.newton_tol), _dsign(jsign(z_in), cfg.newton_tol)
        else:
            z_in, sg_in, sj_in = (
                z,
                _dsign(g(z), cfg.newton_tol),
                _dsign(jsign(z), cfg.newton_tol),
            )

        if _changed(g_base, sg_in) or _changed(j_base, sj_in) or sg_in == 0 or (
            sj_in == 0 and j_base != 0
        ):
            kind, pt, _ = _refine_event(
                curve, g, jsign, y, d, limit, (g_base, j_base), z_in,
                (sg_in, sj_in), cfg,
            )
            steps.append(pt)
            sglog.append((_dsign(g(pt), cfg.newton_tol), _dsign(jsign(pt), cfg.newton_tol)))
            val = g(pt) if kind is StopKind.SOLUTION_FOUND else jsign(pt)
            return finish(StopEvent(kind, pt, {"value": val}))

        if exited:
            steps.append(z_in)
            sglog.append((sg_in, sj_in))
            return finish(
                StopEvent(
                    StopKind.BOUNDARY_EXIT, z_in, {"form": _boundary_form(ch, y, z)}
                )
            )

        y, d, resid_prev = z, dz, resid
        steps.append(y)
        sglog.append((sg_in, sj_in))
        if sg_in != 0:
            g_base = sg_in
        if sj_in != 0:
            j_base = sj_in
        if not armed and m >= 2 * cfg.stop_tol:
            armed = True
        if not armed and m < -10 * cfg.stop_tol:
            return finish(
                StopEvent(
                    StopKind.STEP_FAILURE, y, {"reason": "escaped a boundary start"}
                )
            )
        wins += 1
        if wins >= cfg.grow_after:
            h = min(h * cfg.step_grow, cfg.max_step)
            wins = 0

    return finish(
        StopEvent(StopKind.STEP_FAILURE, y, {"reason": "step budget exhausted"})
    )


def refine_intersection(
    f1: CurveField, f2: CurveField, start: Point, iters: int = 30
) -> Point:
    """Newton for f1 = f2 = 0 from a nearby start.

    Stage handoff points arrive with the stop tolerance of the previous
    stage; snapping them to the full intersection clears both residuals to
    rounding level.  Returns the start unchanged if iteration misbehaves.
    """
    x, y = start
    for _ in range(iters):
        v1 = f1.value((x, y))
        v2 = f2.value((x, y))
        if not (math.isfinite(v1) and math.isfinite(v2)):
            return start
        a1, a2 = f1.gradient((x, y))
        b1, b2 = f2.gradient((x, y))
        det = a1 * b2 - a2 * b1
        if det == 0.0 or not math.isfinite(det):
            return start
        dx = (-v1 * b2 + v2 * a2) / det
        dy = (-a1 * v2 + b1 * v1) / det
        x += dx
        y += dy
        if not (math.isfinite(x) and math.isfinite(y)):
            return start
        if math.hypot(dx, dy) < 1e-15 * (1.0 + math.hypot(x, y)):
            break
    return (x, y)


# -- vertex launches ---------------------------------------------------------


def vertex_launch(
    vl: VertexLaunch, curve: CurveField, ch: Chamber, cfg: TraceConfig
) -> Tuple[Point, Point]:
    """On-curve start near an admissible vertex, with the outgoing direction.

    Walks the local monomial model v = alpha * u**beta_exp (u, v the two
    incident form values) at u = h, doubling h from 1e-6 until one corrector
    step lands on the curve strictly inside the chamber.  Raises
    LaunchFailure when no h up to 0.1 works.

    The corrector runs deeper than a trace step: candidates start outside
    the quadratic basin (the curve's curvature grows like 1/v near the
    vertex).  Close in, the field's own noise floor governs acceptance;
    the returned start may carry a residual at that floor rather than at
    newton_tol.
    """
    fa = ch.forms[vl.incident[0]]
    fb = ch.forms[vl.incident[1]]
    a1, a2 = fa.gradient()
    b1, b2 = fb.gradient()
    det = a1 * b2 - a2 * b1
    if det == 0.0:
        raise LaunchFailure(f"incident forms at vertex {vl.vertex_index} are parallel")
    vx, vy = vl.point
    bexp = float(vl.beta_exp)
    deep = replace(cfg, newton_iters=8)
    h = 1e-6
    while h <= 0.1:
        v = math.exp(vl.log_alpha + bexp * math.log(h))
        cand = (
            vx + (h * b2 - v * a2) / det,
            vy + (v * a1 - h * b1) / det,
        )
        h *= 2.0
        if ch.margin(cand) < 2 * cfg.stop_tol:
            continue
        try:
            t = tangent(curve, cand)
        except SingularPointError:
            continue
        z = newton_correct(curve, cand, t, deep)
        if z is None or ch.margin(z) < 2 * cfg.stop_tol:
            continue
        away = (z[0] - vx, z[1] - vy)
        dist = math.hypot(*away)
        corr = math.hypot(z[0] - cand[0], z[1] - cand[1])
        if dist == 0.0 or corr > 0.5 * dist:
            continue
        d = tangent(curve, z)
        if d[0] * away[0] + d[1] * away[1] < 0.0:
            d = (-d[0], -d[1])
        return z, d
    raise LaunchFailure(
        f"no launch point on the curve near vertex {vl.vertex_index}"
    )
