"""Two-stage Khovanskii-Rolle continuation and its solution ledger.

Stage 1 traces the polynomial curve J2 = 0 watching phi_1; stage 2 traces
phi_1 = 0 watching phi_2.  Arcs start from the interior solutions of the
previous stage (both directions) and from the boundary: edge and vertex
zeros of J2 for stage 1, admissible-vertex launches for stage 2.  Every
interior solution must be discovered by exactly two arcs; a count other
than two is the curve-jumping signal, and after one retry with a halved
step it is an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from .chamber import Chamber
from .errors import LaunchFailure, SingularPointError, VerificationError
from .master import (
    MasterSystem,
    jacobian1_polynomial,
    jacobian2_polynomial,
    master_residual,
)
from .poly2 import Poly2
from .roots import VertexLaunch, admissible_vertices, boundary_points, solve_bivariate
from .tracer import (
    SAFE,
    ArcTrace,
    CurveField,
    StopKind,
    TraceConfig,
    master_field,
    polynomial_field,
    refine_intersection,
    tangent,
    trace_arc,
    vertex_launch,
)

__all__ = [
    "CheckResult",
    "JacobianChain",
    "SolutionReport",
    "StageResult",
    "apriori_path_bound",
    "build_chain",
    "fewnomial_bound",
    "run_stage",
    "solve_positive",
    "verify",
]

Point = Tuple[float, float]

DEDUP_RADIUS = 1e-6


class JacobianChain(NamedTuple):
    j1: Poly2
    j2: Poly2


def build_chain(ms: MasterSystem) -> JacobianChain:
    j2 = jacobian2_polynomial(ms)
    return JacobianChain(jacobian1_polynomial(ms, j2), j2)


@dataclass
class StageResult:
    stage: int
    solutions: List[Point]
    discovery_counts: Dict[Point, int]
    arcs: List[ArcTrace]
    boundary_start_count: int
    warnings: List[str]


@dataclass
class SolutionReport:
    s0: List[Point]
    s0_boundary: List[Point]
    t1: List[Point]
    t2: List[VertexLaunch]
    s1: List[Point]
    s2: List[Point]
    arcs: Dict[int, List[ArcTrace]]
    discovery_counts: Dict[int, Dict[Point, int]]
    path_counts: Dict[int, int]
    bounds: Tuple[int, int]
    warnings: List[str]
    checks: List["CheckResult"]


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def apriori_path_bound(n: int, m: int) -> int:
    """Worst-case arc count for two master functions in n variables.

    The chamber's facet count m replaces n + 3 in the single-facet term;
    the codimension-two term keeps the full binomial.
    """
    return 8 * n * n + 2 * n * m + (n + 3) * (n + 2) // 2


def fewnomial_bound(n: int) -> int:
    """Ceiling on the number of interior solutions for two master functions."""
    return 2 * n * n + ((n + 1) * (n + 3)) // 2


def _inward(curve: CurveField, ch: Chamber, p: Point) -> Point:
    """Tangent direction at a boundary point oriented into the chamber."""
    d = tangent(curve, p)
    eps = 1e-7
    plus = ch.margin((p[0] + eps * d[0], p[1] + eps * d[1]))
    minus = ch.margin((p[0] - eps * d[0], p[1] - eps * d[1]))
    return d if plus >= minus else (-d[0], -d[1])


def _dedupe(points: Sequence[Point], radius: float) -> List[List[Point]]:
    groups: List[List[Point]] = []
    for p in points:
        for g in groups:
            if math.hypot(p[0] - g[0][0], p[1] - g[0][1]) < radius:
                g.append(p)
                break
        else:
            groups.append([p])
    return groups


def _stage_fields(
    j: int, ms: MasterSystem, chain: JacobianChain
) -> Tuple[CurveField, CurveField, CurveField]:
    """(curve, stop field, Jacobian sign field) for stage j."""
    if j == 1:
        return (
            polynomial_field(chain.j2),
            master_field(ms, 1),
            polynomial_field(chain.j1),
        )
    if j == 2:
        return (
            master_field(ms, 1),
            master_field(ms, 2),
            polynomial_field(chain.j2),
        )
    raise ValueError("stage must be 1 or 2")


BoundaryStart = Union[Point, VertexLaunch]


def run_stage(
    j: int,
    ms: MasterSystem,
    chain: JacobianChain,
    ch: Chamber,
    starts_interior: Sequence[Point],
    starts_boundary: Sequence[BoundaryStart],
    cfg: TraceConfig = SAFE,
) -> StageResult:
    """Trace every arc of one stage and assemble its solution ledger.

    Interior starts are traced in both tangent directions; boundary starts
    inward only.  A boundary start is either a point already on the curve
    or a VertexLaunch to be walked onto it.  Solution endpoints are
    polished by Newton on (curve, stop) and deduplicated; the count of
    arcs ending at each solution is the double-discovery ledger.
    """
    curve, stop, jsign = _stage_fields(j, ms, chain)
    warnings: List[str] = []
    arcs: List[ArcTrace] = []
    launched_boundary = 0

    for p in starts_interior:
        base = tangent(curve, p)
        for s in (1.0, -1.0):
            arcs.append(
                trace_arc(
                    curve,
                    stop.value,
                    jsign.value,
                    ch,
                    p,
                    (s * base[0], s * base[1]),
                    cfg,
                )
            )
    for b in starts_boundary:
        if isinstance(b, VertexLaunch):
            try:
                pt, d = vertex_launch(b, curve, ch, cfg)
            except LaunchFailure as exc:
                warnings.append(f"stage {j}: {exc}")
                continue
        else:
            pt = b
            try:
                d = _inward(curve, ch, pt)
            except SingularPointError as exc:
                warnings.append(
                    f"stage {j}: singular tangent at boundary start {pt}: {exc}"
                )
                continue
        launched_boundary += 1
        arcs.append(trace_arc(curve, stop.value, jsign.value, ch, pt, d, cfg))

    found: List[Point] = []
    for a in arcs:
        if a.event.kind is StopKind.SOLUTION_FOUND:
            found.append(refine_intersection(curve, stop, a.event.point))
        elif a.event.kind is StopKind.STEP_FAILURE:
            warnings.append(
                f"stage {j}: step failure at ({a.event.point[0]:.9g}, "
                f"{a.event.point[1]:.9g})"
            )

    groups = _dedupe(found, DEDUP_RADIUS)
    solutions = sorted(g[0] for g in groups)
    counts = {g[0]: len(g) for g in groups}
    return StageResult(
        stage=j,
        solutions=solutions,
        discovery_counts=counts,
        arcs=arcs,
        boundary_start_count=launched_boundary,
        warnings=warnings,
    )


def _stage_with_retry(
    j: int,
    ms: MasterSystem,
    chain: JacobianChain,
    ch: Chamber,
    starts_interior: Sequence[Point],
    starts_boundary: Sequence[BoundaryStart],
    cfg: TraceConfig,
) -> StageResult:
    """Run a stage; on a bad discovery count, retry once with halved steps."""
    res = run_stage(j, ms, chain, ch, starts_interior, starts_boundary, cfg)
    if all(c == 2 for c in res.discovery_counts.values()):
        return res
    half = replace(
        cfg,
        initial_step=max(cfg.initial_step / 2.0, cfg.min_step * 2.0),
        max_step=max(cfg.max_step / 2.0, cfg.min_step * 2.0),
    )
    retry = run_stage(j, ms, chain, ch, starts_interior, starts_boundary, half)
    retry.warnings.insert(
        0, f"stage {j}: discovery counts off, retraced with halved step"
    )
    return retry


def _curve_vertices(poly: Poly2, ch: Chamber) -> List[Point]:
    """Chamber vertices lying exactly on the polynomial curve."""
    out: List[Point] = []
    for v in ch.vertices:
        if poly.eval_exact(v.point[0], v.point[1]) == 0:
            out.append((float(v.point[0]), float(v.point[1])))
    return out


def solve_positive(ms: MasterSystem, cfg: TraceConfig = SAFE) -> SolutionReport:
    """All solutions of phi_1 = phi_2 = 0 strictly inside the chamber.

    Raises:
        VerificationError: a solution was not discovered exactly twice
            even after the halved-step retry.
    """
    ch = ms.chamber
    chain = build_chain(ms)

    zeros = solve_bivariate(chain.j1, chain.j2, ch)
    s0 = list(zeros.interior)
    t1_points = [e.point for e in boundary_points(chain.j2, ch)]
    t1_points += _curve_vertices(chain.j2, ch)
    t2 = admissible_vertices(ms, ch, 1)

    stage1 = _stage_with_retry(1, ms, chain, ch, s0, t1_points, cfg)
    stage2 = _stage_with_retry(2, ms, chain, ch, stage1.solutions, t2, cfg)

    report = SolutionReport(
        s0=s0,
        s0_boundary=list(zeros.boundary),
        t1=t1_points,
        t2=t2,
        s1=stage1.solutions,
        s2=stage2.solutions,
        arcs={1: stage1.arcs, 2: stage2.arcs},
        discovery_counts={1: stage1.discovery_counts, 2: stage2.discovery_counts},
        path_counts={1: len(stage1.arcs), 2: len(stage2.arcs)},
        bounds=(apriori_path_bound(ms.n, ch.facet_count), fewnomial_bound(ms.n)),
        warnings=stage1.warnings + stage2.warnings,
        checks=[],
    )
    report.checks = verify(report, ms)
    bad = [c for c in report.checks if c.name == "double-discovery" and not c.passed]
    if bad:
        raise VerificationError(bad[0].detail)
    return report


def _interleaving_ok(arc: ArcTrace) -> bool:
    """Between two stop-sign changes there is a Jacobian-sign change."""
    last_g = 0
    last_j = 0
    events: List[str] = []
    for sg, sj in arc.sign_log:
        if sg != 0:
            if last_g != 0 and sg != last_g:
                events.append("g")
            last_g = sg
        if sj != 0:
            if last_j != 0 and sj != last_j:
                events.append("j")
            last_j = sj
    prev_g = False
    for e in events:
        if e == "g":
            if prev_g:
                return False
            prev_g = True
        else:
            prev_g = False
    return True


def verify(report: SolutionReport, ms: MasterSystem) -> List[CheckResult]:
    """Structured pass/fail list over the finished ledger."""
    checks: List[CheckResult] = []

    bad_counts = [
        (j, p, c)
        for j, counts in report.discovery_counts.items()
        for p, c in counts.items()
        if c != 2
    ]
    checks.append(
        CheckResult(
            "double-discovery",
            not bad_counts,
            "every solution found by exactly two arcs"
            if not bad_counts
            else "; ".join(
                f"stage {j}: ({p[0]:.9g}, {p[1]:.9g}) found {c} times"
                for j, p, c in bad_counts
            ),
        )
    )

    t_counts = {1: len(report.t1), 2: len(report.t2)}
    s_prev = {1: len(report.s0), 2: len(report.s1)}
    bad_paths = [
        j
        for j in (1, 2)
        if report.path_counts[j] != t_counts[j] + 2 * s_prev[j]
    ]
    checks.append(
        CheckResult(
            "path-count",
            not bad_paths,
            "r_j = t_j + 2 s_{j-1} in both stages"
            if not bad_paths
            else "; ".join(
                f"stage {j}: {report.path_counts[j]} arcs from "
                f"{t_counts[j]} + 2*{s_prev[j]} starts"
                for j in bad_paths
            ),
        )
    )

    bad_arcs = sum(
        1
        for arcs in report.arcs.values()
        for a in arcs
        if not _interleaving_ok(a)
    )
    checks.append(
        CheckResult(
            "interleaving",
            bad_arcs == 0,
            "Jacobian sign changes separate stop-sign changes on every arc"
            if bad_arcs == 0
            else f"{bad_arcs} arcs violate interleaving",
        )
    )

    worst = 0.0
    inside = True
    for p in report.s2:
        worst = max(worst, master_residual(ms, p))
        if ms.chamber.margin(p) <= 0.0:
            inside = False
    checks.append(
        CheckResult(
            "residual",
            worst < 1e-8 and inside,
            f"max master residual {worst:.3g}"
            + ("" if inside else "; a solution sits outside the chamber"),
        )
    )

    few = report.bounds[1]
    checks.append(
        CheckResult(
            "fewnomial-ceiling",
            len(report.s2) <= few,
            f"{len(report.s2)} solutions vs bound {few}",
        )
    )
    return checks
